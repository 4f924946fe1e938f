#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "lpsum/legendre.hpp"

using namespace lps;

namespace {

double sup_err(const GridFn& a, const GridFn& b, double lo = -kInf, double hi = kInf) {
    double e = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double x = a.node(i)[0];
        if (x < lo || x > hi) continue;
        if (is_inf(a[i]) != is_inf(b[i])) return kInf;
        if (!is_inf(a[i])) e = std::max(e, std::fabs(a[i] - b[i]));
    }
    return e;
}

GridFn quad1(const Box& b, double c = 0.5) {
    GridFn u(b, Kind::base);
    u.fill([&](auto x) { return c * x[0] * x[0]; });
    return u;
}

GridFn interval_base(const Box& b, double lo, double hi) {
    GridFn u(b, Kind::base);
    u.fill([&](auto x) { return (x[0] >= lo - 1e-12 && x[0] <= hi + 1e-12) ? 0.0 : kInf; });
    return u;
}

// Convex piecewise-linear function with random kinks.
GridFn random_pl(std::mt19937_64& rng, const Box& b) {
    std::uniform_real_distribution<double> K(-3, 3), S(0, 2);
    std::vector<std::pair<double, double>> hinges(6);
    for (auto& h : hinges) h = {K(rng), S(rng)};
    GridFn u(b, Kind::base);
    u.fill([&](auto x) {
        double v = 0.3 * std::fabs(x[0]);
        for (auto [k, s] : hinges) v += s * std::max(0.0, k > 0 ? x[0] - k : k - x[0]);
        return v;
    });
    return u;
}

}  // namespace

TEST_CASE("quadratic self-duality") {
    GridFn u = quad1(Box::cube(1, -8, 8, 1025));
    GridFn us = legendre_transform(u, Box::cube(1, -4, 4, 1025));
    GridFn exact = quad1(us.box());
    CHECK(sup_err(us, exact) <= 1e-4);
}

TEST_CASE("indicator conjugate is |y|") {
    GridFn u = interval_base(Box::cube(1, -2, 2, 401), -1, 1);
    GridFn us = legendre_transform(u, Box::cube(1, -3, 3, 301));
    for (std::size_t j = 0; j < us.size(); ++j) CHECK(us[j] == doctest::Approx(std::fabs(us.node(j)[0])).epsilon(1e-12));
}

TEST_CASE("fast transform matches the brute-force oracle") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 10; ++k) {
        GridFn u = random_pl(rng, Box::cube(1, -4, 4, 257));
        Box d = dual_box(u);
        GridFn a = legendre_transform(u, d), b = ref::legendre_brute(u, d);
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-12));
    }
    // 2-D and 3-D against the oracle, including +inf entries
    std::uniform_real_distribution<double> U(0, 1);
    for (int dim = 2; dim <= 3; ++dim) {
        GridFn u(Box::cube(dim, -1, 1, dim == 2 ? 17 : 9), Kind::base);
        u.fill([&](auto x) { return x[0] * x[0] + 0.5 * x[1] * x[1] + 0.3 * x[0] * x[1] + x[2] * x[2] + 0.1 * U(rng); });
        for (std::size_t i = 0; i < u.size(); i += 7) u[i] = kInf;
        Box d = dual_box(u, 11);
        GridFn a = legendre_transform(u, d), b = ref::legendre_brute(u, d);
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-12));
    }
}

TEST_CASE("parallel and serial transforms agree bitwise") {
    GridFn u(Box::cube(2, -2, 2, 65), Kind::base);
    u.fill([](auto x) { return std::cosh(x[0]) + x[1] * x[1]; });
    Box d = dual_box(u);
    set_threads(4);
    GridFn a = legendre_transform(u, d);
    set_threads(1);
    GridFn b = ref::legendre_transform(u, d);
    CHECK(a.values == b.values);
}

TEST_CASE("biconjugate") {
    GridFn u = quad1(Box::cube(1, -4, 4, 513));
    CHECK(sup_err(biconjugate(u), u) <= 1e-3);

    // nonconvex input -> convex envelope, checked against a hull oracle
    GridFn w(Box::cube(1, -3, 5, 401), Kind::base);
    w.fill([](auto x) { return std::min(x[0] * x[0], (x[0] - 2) * (x[0] - 2)); });
    GridFn env = biconjugate(w);
    for (std::size_t i = 0; i < w.size(); ++i) {
        double x = w.node(i)[0];
        double e = 0;
        // lower envelope: min over chords through sampled points
        double best = w[i];
        for (std::size_t a = 0; a <= i; ++a)
            for (std::size_t b = i; b < w.size(); b += 3) {
                if (a == b) continue;
                double xa = w.node(a)[0], xb = w.node(b)[0];
                best = std::min(best, w[a] + (w[b] - w[a]) * (x - xa) / (xb - xa));
            }
        e = std::fabs(env[i] - best);
        CHECK(e <= 2e-3);
    }

    GridFn two(Box::cube(1, -4, 4, 161), Kind::base);
    two.fill([](auto x) { return (std::fabs(x[0] + 2) <= 0.5 || std::fabs(x[0] - 2) <= 0.5) ? 0.0 : kInf; });
    GridFn hull = biconjugate(two);
    for (std::size_t i = 0; i < hull.size(); ++i) {
        double x = hull.node(i)[0];
        if (x >= -2.5 && x <= 2.5) CHECK(hull[i] == doctest::Approx(0).epsilon(1e-12));
        else CHECK(is_inf(hull[i]));
    }
}

TEST_CASE("inf_convolution") {
    Box b = Box::cube(1, -8, 8, 1025);
    GridFn K = interval_base(b, 0, 1), L = interval_base(b, 2, 3);
    GridFn KL = inf_convolution(K, L);
    for (std::size_t i = 0; i < KL.size(); ++i) {
        double x = KL.node(i)[0];
        if (x >= 2 - 1e-9 && x <= 4 + 1e-9) CHECK(std::fabs(KL[i]) <= 1e-9);
        else CHECK(is_inf(KL[i]));
    }
    GridFn u = quad1(b);
    GridFn id = interval_base(b, 0, 0);
    CHECK(sup_err(inf_convolution(u, id), u, -6, 6) <= 1e-3);

    GridFn q = quad1(Box::cube(1, -4, 4, 257));
    GridFn qq = inf_convolution(q, q);
    // direct inf over the grid
    double e = 0;
    for (std::size_t i = 0; i < qq.size(); ++i) {
        double z = qq.node(i)[0];
        double best = kInf;
        for (std::size_t j = 0; j < q.size(); ++j) {
            double y = q.node(j)[0];
            best = std::min(best, ext_add(grid_eval(q, z - y), q[j]));
        }
        e = std::max(e, std::fabs(qq[i] - best));
        CHECK(qq[i] == doctest::Approx(0.25 * z * z).epsilon(1e-3));
    }
    CHECK(e <= 1e-3);
}

TEST_CASE("lp_base_sum") {
    Box b = Box::cube(1, -6, 6, 769);
    GridFn u = quad1(b), v = quad1(b, 1.0);
    GridFn w1 = lp_base_sum(1, u, 1, v, 1);
    GridFn ic = inf_convolution(u, v);
    CHECK(sup_err(w1, ic) <= 1e-10);

    GridFn w0 = lp_base_sum(1, u, 0, v, 3);
    CHECK(sup_err(w0, u, -5, 5) <= 1e-3);

    // p = 2, u = v = x^2/2: dual sum sqrt(2) y^2/2, conjugate x^2/(2 sqrt 2)
    GridFn w2 = lp_base_sum(1, u, 1, u, 2);
    for (std::size_t i = 0; i < w2.size(); ++i) {
        double x = w2.node(i)[0];
        if (std::fabs(x) > 5) continue;
        CHECK(w2[i] == doctest::Approx(std::sqrt(2) / 4 * x * x).epsilon(1e-3).scale(1));
    }

    // discrete midpoint convexity of the output
    std::mt19937_64 rng(9);
    GridFn r1 = random_pl(rng, b), r2 = random_pl(rng, b);
    GridFn w = lp_base_sum(0.7, r1, 1.3, r2, 2.5);
    for (std::size_t i = 1; i + 1 < w.size(); ++i) {
        if (is_inf(w[i - 1]) || is_inf(w[i + 1])) continue;
        CHECK(w[i] <= 0.5 * (w[i - 1] + w[i + 1]) + 1e-9);
    }
}

TEST_CASE("support_fn and s_aleksandrov") {
    SConcaveFn chi;
    chi.s = 1;
    chi.base = interval_base(Box::cube(1, -3, 3, 601), -1, 1);
    GridFn h = support_fn(chi);
    for (std::size_t j = 0; j < h.size(); ++j) CHECK(h[j] == doctest::Approx(std::fabs(h.node(j)[0])));

    SConcaveFn g;
    g.s = 0;
    g.base = quad1(Box::cube(1, -6, 6, 769));
    GridFn hg = support_fn(g, Box::cube(1, -3, 3, 385));
    for (std::size_t j = 0; j < hg.size(); ++j) CHECK(hg[j] == doctest::Approx(0.5 * hg.node(j)[0] * hg.node(j)[0]).epsilon(1e-3).scale(1));

    SConcaveFn ab;
    ab.s = 1;
    ab.base = GridFn(Box::cube(1, -4, 4, 401), Kind::base);
    ab.base.fill([](auto x) { return std::fabs(x[0]); });
    GridFn ha = support_fn(ab, Box::cube(1, -2, 2, 401));
    for (std::size_t j = 0; j < ha.size(); ++j) {
        double y = ha.node(j)[0];
        if (std::fabs(y) <= 1 + 1e-12) CHECK(std::fabs(ha[j]) <= 1e-12);
        else CHECK(ha[j] > 0.9 * 4 * (std::fabs(y) - 1));
    }

    // square support function -> indicator of the square
    GridFn w(Box::cube(2, -3, 3, 61), Kind::base);
    w.fill([](auto y) { return std::fabs(y[0]) + std::fabs(y[1]); });
    SConcaveFn A = s_aleksandrov(w, 1, Box::cube(2, -2, 2, 41));
    GridFn dens = A.density();
    for (std::size_t i = 0; i < dens.size(); ++i) {
        auto x = dens.node(i);
        bool inside = std::fabs(x[0]) <= 1 + 1e-9 && std::fabs(x[1]) <= 1 + 1e-9;
        CHECK(dens[i] == doctest::Approx(inside ? 1.0 : 0.0));
    }

    // w = y^2/2, s = -1 -> (1 + x^2/2)^{-1}
    GridFn w2 = quad1(Box::cube(1, -6, 6, 1201));
    GridFn d2 = s_aleksandrov(w2, -1, Box::cube(1, -4, 4, 161)).density();
    for (std::size_t i = 0; i < d2.size(); ++i) {
        double x = d2.node(i)[0];
        CHECK(d2[i] == doctest::Approx(1 / (1 + 0.5 * x * x)).epsilon(1e-3));
    }

    // s = 0 against the log-domain route
    GridFn d0 = s_aleksandrov(w2, 0, Box::cube(1, -4, 4, 161)).density();
    GridFn ws = legendre_transform(w2, Box::cube(1, -4, 4, 161));
    for (std::size_t i = 0; i < d0.size(); ++i) CHECK(std::fabs(d0[i] - std::exp(-ws[i])) <= 1e-10);
}

TEST_CASE("conjugate properties") {
    std::mt19937_64 rng(23);
    Box b = Box::cube(1, -4, 4, 257);
    for (int k = 0; k < 20; ++k) {
        GridFn u = random_pl(rng, b), v = u;
        std::uniform_real_distribution<double> U(0, 0.5);
        double c = U(rng);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = u[i] + c + 0.1 * v.node(i)[0] * v.node(i)[0];
        Box d = dual_box(u, v);
        GridFn us = legendre_transform(u, d), vs = legendre_transform(v, d);
        for (std::size_t j = 0; j < us.size(); ++j) CHECK(us[j] >= vs[j] - 1e-12);
    }
    // Fenchel equality and gradient inversion for a smooth strictly convex u
    GridFn u(Box::cube(1, -3, 3, 1201), Kind::base);
    auto fu = [](double x) { return std::log(std::cosh(x)) + 0.5 * x * x; };
    auto du = [](double x) { return std::tanh(x) + x; };
    u.fill([&](auto x) { return fu(x[0]); });
    GridFn us = legendre_transform(u, Box::cube(1, -3, 3, 1201));
    for (double x = -2; x <= 2; x += 0.25) {
        double g = du(x);
        double lhs = fu(x) + grid_eval(us, g);
        CHECK(lhs == doctest::Approx(x * g).epsilon(1e-3).scale(1));
        // ∇u*(∇u(x)) = x via central differences of u*
        double h = us.spacing[0];
        double dus = (grid_eval(us, g + h) - grid_eval(us, g - h)) / (2 * h);
        CHECK(std::fabs(dus - x) <= 1e-3);
    }
}
