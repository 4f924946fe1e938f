#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "lpsum/convolve.hpp"
#include "lpsum/legendre.hpp"

using namespace lps;

namespace {

GridFn indicator(const Box& b, double lo, double hi) {
    GridFn f(b, Kind::density);
    f.fill([&](auto x) { return (x[0] >= lo - 1e-9 && x[0] <= hi + 1e-9) ? 1.0 : 0.0; });
    return f;
}

// Convex base with u(0) = 0, u >= 0: hinge terms pointing away from the origin plus a quadratic.
SConcaveFn random_sc(std::mt19937_64& rng, const Box& b, double s) {
    std::uniform_real_distribution<double> K(-2, 2), W(0, 1), Q(0.2, 1.0);
    double q = Q(rng);
    std::vector<std::array<double, 3>> h(4);
    for (auto& e : h) e = {K(rng), K(rng), W(rng)};
    SConcaveFn f;
    f.s = s;
    f.base = GridFn(b, Kind::base);
    f.base.fill([&](auto x) {
        double v = 0.5 * q * (x[0] * x[0] + x[1] * x[1]);
        for (auto& e : h) {
            double d = e[0] * x[0] + (b.dim > 1 ? e[1] * x[1] : 0.0);
            v += e[2] * std::max(0.0, d);
        }
        return v;
    });
    return f;
}

// Largest difference quotient along axis 0, used as the decomposition-error modulus.
double lip(const GridFn& f) {
    double l = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto ijk = f.unravel(i);
        if (ijk[0] + 1 >= f.shape[0]) continue;
        l = std::max(l, std::fabs(f[f.ravel(ijk[0] + 1, ijk[1], ijk[2])] - f[i]) / f.spacing[0]);
    }
    return l;
}

double sup_diff(const GridFn& a, const GridFn& b) {
    double e = 0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::fabs(a[i] - b[i]));
    return e;
}

}  // namespace

TEST_CASE("scale_s") {
    Box b = Box::cube(1, -4, 4, 161);
    GridFn g(b, Kind::density);
    g.fill([](auto x) { return std::exp(-x[0] * x[0]); });
    CHECK(scale_s(1, g, 0.7).values == g.values);
    GridFn g2 = scale_s(2, g, 0);
    for (std::size_t i = 0; i < g2.size(); ++i) {
        double x = g2.node(i)[0];
        // f(x/2)^2 = e^{-x^2/2}; the power acts together with the dilation
        CHECK(g2[i] == doctest::Approx(std::exp(-0.5 * x * x)).epsilon(2e-3).scale(1));
    }
    GridFn c = indicator(b, 0, 1);
    GridFn c2 = scale_s(2, c, 1);
    for (std::size_t i = 0; i < c2.size(); ++i) {
        double x = c2.node(i)[0];
        if (std::fabs(x - 2) < 1.5 * c2.spacing[0] || std::fabs(x) < 1.5 * c2.spacing[0]) continue;  // interpolated edge cells
        CHECK(c2[i] == doctest::Approx((x >= -1e-9 && x <= 2 + 1e-9) ? 2.0 : 0.0));
    }
}

TEST_CASE("scale_ps") {
    Box b = Box::cube(1, -4, 4, 161);
    GridFn g(b, Kind::density);
    g.fill([](auto x) { return std::exp(-x[0] * x[0]); });
    CHECK(scale_ps(1, g, 2, 0.5).values == g.values);
    GridFn z = scale_ps(0, g, 2, 0.5);
    CHECK(total_mass(z) == doctest::Approx(z.spacing[0]));
    CHECK(z[z.nearest_origin_index()] == 1);
    CHECK(sup_diff(scale_ps(1.7, g, 1, 0.5), scale_s(1.7, g, 0.5)) == 0);
    // at s = 0 the two readings differ unless alpha = 1
    GridFn pw = scale_ps(3, g, 2, 0, S0Route::power), lit = scale_ps(3, g, 2, 0, S0Route::literal);
    CHECK(sup_diff(pw, lit) > 0.1);
}

TEST_CASE("sup_convolution_s on indicators") {
    Box b = Box::cube(1, -4, 4, 129);
    GridFn A = indicator(b, 0, 1);
    GridFn h = sup_convolution_s(A, A, kInf);
    for (std::size_t i = 0; i < h.size(); ++i) {
        double x = h.node(i)[0];
        CHECK(h[i] == doctest::Approx((x >= -1e-9 && x <= 2 + 1e-9) ? 1.0 : 0.0));
    }
    GridFn h2 = sup_convolution_s(A, A, 0.7, 0.5, 0.5);
    for (std::size_t i = 0; i < h2.size(); ++i) {
        double x = h2.node(i)[0];
        CHECK(h2[i] == doctest::Approx((x >= -1e-9 && x <= 1 + 1e-9) ? 1.0 : 0.0));
    }
}

TEST_CASE("sup_convolution_s at s = 0 matches the inf-convolution route") {
    Box b = Box::cube(1, -6, 6, 241);
    GridFn u(b, Kind::base), v(b, Kind::base);
    u.fill([](auto x) { return 0.5 * x[0] * x[0]; });
    v.fill([](auto x) { return std::fabs(x[0]) + 0.25 * x[0] * x[0]; });
    GridFn f = u, g = v;
    f.kind = g.kind = Kind::density;
    for (auto& x : f.values) x = std::exp(-x);
    for (auto& x : g.values) x = std::exp(-x);
    GridFn h = sup_convolution_s(f, g, 0);
    GridFn w = inf_convolution(u, v);
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (std::fabs(h.node(i)[0]) > 5) continue;
        CHECK(h[i] == doctest::Approx(std::exp(-w[i])).epsilon(1e-3).scale(1));
    }
}

TEST_CASE("sup_convolution_s at s = +inf against a direct oracle") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(0, 1);
    Box b = Box::cube(1, -2, 2, 41);
    GridFn f(b, Kind::density), g(b, Kind::density);
    f.fill([&](auto x) { return std::fabs(x[0]) < 1 ? U(rng) : 0.0; });
    g.fill([&](auto x) { return std::fabs(x[0]) < 1.5 ? U(rng) : 0.0; });
    GridFn h = sup_convolution_s(f, g, kInf);
    for (std::size_t iz = 0; iz < h.size(); ++iz) {
        double best = 0;
        for (std::size_t ix = 0; ix < f.size(); ++ix)
            for (std::size_t iy = 0; iy < g.size(); ++iy)
                if (std::fabs(f.node(ix)[0] + g.node(iy)[0] - h.node(iz)[0]) < 1e-9 && f[ix] > 0 && g[iy] > 0)
                    best = std::max({best, f[ix], g[iy]});
        CHECK(h[iz] == doctest::Approx(best));
    }
    set_threads(3);
    GridFn hp = sup_convolution_s(f, g, kInf);
    set_threads(1);
    CHECK(hp.values == ref::sup_convolution_s(f, g, kInf, 1, 1, f.box()).values);
}

TEST_CASE("lps_sup_convolution reductions") {
    Box b = Box::cube(1, -4, 4, 129);
    std::mt19937_64 rng(2);
    SConcaveFn f = random_sc(rng, b, 0.5), g = random_sc(rng, b, 0.5);
    GridFn fd = f.density(), gd = g.density();
    auto c = ConvolveParams::with_t(1, 0.5, 0.3);
    GridFn h = lps_sup_convolution(fd, gd, c);
    CHECK(sup_diff(h, sup_convolution_s(scale_s(0.7, fd, 0.5), scale_s(0.3, gd, 0.5), 0.5)) <=
          2 * b.spacing(0) * std::max(lip(fd), lip(gd)));
    CHECK(sup_diff(h, sup_convolution_s(fd, gd, 0.5, 0.7, 0.3)) == 0);

    // f with itself at p = 1 returns f
    GridFn ff = lps_sup_convolution(fd, fd, c);
    double lip = 0;
    for (std::size_t i = 1; i < fd.size(); ++i) lip = std::max(lip, std::fabs(fd[i] - fd[i - 1]) / fd.spacing[0]);
    CHECK(sup_diff(ff, fd) <= 2 * fd.spacing[0] * lip);
}

TEST_CASE("base route agrees with the generic decomposition search") {
    Box b = Box::cube(1, -4, 4, 129);
    std::mt19937_64 rng(4);
    for (double s : {-0.5, 0.0, 0.5, 1.0}) {
        for (double p : {1.0, 2.0}) {
            SConcaveFn f = random_sc(rng, b, s), g = random_sc(rng, b, s);
            auto c = ConvolveParams::with_t(p, s, 0.4);
            GridFn hb = lps_sup_convolution(f, g, c);
            GridFn hg = lps_sup_convolution(f.density(), g.density(), c);
            CAPTURE(s);
            CAPTURE(p);
            const double tol = 2 * b.spacing(0) * std::max(lip(f.density()), lip(g.density()));
            CHECK(sup_diff(hb, hg) <= tol);
            GridFn hbr = brute_force_lps(f.density(), g.density(), c, LambdaMode::sup);
            CHECK(sup_diff(hb, hbr) <= tol);
        }
        SConcaveFn f = random_sc(rng, b, s), g = random_sc(rng, b, s);
        ConvolveParams c;
        c.p = 0.5;
        c.s = s;
        c.alpha = 0.6;
        c.beta = 0.4;
        GridFn hb = lps_infsup_convolution(f, g, c);
        GridFn hg = lps_infsup_convolution(f.density(), g.density(), c);
        CHECK(sup_diff(hb, hg) <= 2 * b.spacing(0) * std::max(lip(f.density()), lip(g.density())));
    }
}

TEST_CASE("base route in 2-D against the brute-force oracle") {
    Box b = Box::cube(2, -2, 2, 33);
    std::mt19937_64 rng(8);
    SConcaveFn f = random_sc(rng, b, 0), g = random_sc(rng, b, 0);
    auto c = ConvolveParams::with_t(2, 0, 0.5);
    c.lambda_samples = 17;
    GridFn hb = lps_sup_convolution(f, g, c);
    GridFn hr = brute_force_lps(f.density(), g.density(), c, LambdaMode::sup);
    CHECK(sup_diff(hb, hr) <= 2 * b.spacing(0) * std::max(lip(f.density()), lip(g.density())));
}

TEST_CASE("base route on 2-D indicator bases stays an indicator") {
    // square [-1,1]^2 with the square [-0.5,0.5]^2 at p = 1, t = 1/2: the square [-0.75,0.75]^2
    Box b = Box::cube(2, -2, 2, 65);
    for (double s : {kInf, 0.0}) {
        SConcaveFn f, g;
        f.s = g.s = s;
        f.base = GridFn(b, Kind::base);
        g.base = f.base;
        f.base.fill([](auto x) { return std::max(std::fabs(x[0]), std::fabs(x[1])) <= 1 + 1e-9 ? 0.0 : kInf; });
        g.base.fill([](auto x) { return std::max(std::fabs(x[0]), std::fabs(x[1])) <= 0.5 + 1e-9 ? 0.0 : kInf; });
        GridFn h = lps_sup_convolution(f, g, ConvolveParams::with_t(1, s, 0.5));
        for (std::size_t i = 0; i < h.size(); ++i) {
            auto x = h.node(i);
            const double r = std::max(std::fabs(x[0]), std::fabs(x[1]));
            if (std::fabs(r - 0.75) < 0.07) continue;
            CHECK(h[i] == (r < 0.75 ? 1.0 : 0.0));
        }
    }
}

TEST_CASE("commutativity and homogeneity") {
    Box b = Box::cube(1, -4, 4, 129);
    std::mt19937_64 rng(6);
    for (double p : {2.0, 0.6}) {
        SConcaveFn f = random_sc(rng, b, 0.5), g = random_sc(rng, b, 0.5);
        ConvolveParams c, d;
        c.p = d.p = p;
        c.s = d.s = 0.5;
        c.alpha = 0.8;
        c.beta = 1.7;
        d.alpha = 1.7;
        d.beta = 0.8;
        c.lambda_samples = d.lambda_samples = 65;
        GridFn h1 = p >= 1 ? lps_sup_convolution(f, g, c) : lps_infsup_convolution(f, g, c);
        GridFn h2 = p >= 1 ? lps_sup_convolution(g, f, d) : lps_infsup_convolution(g, f, d);
        CHECK(sup_diff(h1, h2) <= 1e-9);
    }
    // (alpha f) ⊕ (beta g) = (alpha+beta) × [normalized combination]
    SConcaveFn f = random_sc(rng, b, 0.5), g = random_sc(rng, b, 0.5);
    ConvolveParams c;
    c.p = 2;
    c.s = 0.5;
    c.alpha = 0.8;
    c.beta = 1.7;
    GridFn lhs = lps_sup_convolution(f, g, c);
    auto cn = ConvolveParams::with_t(2, 0.5, 1.7 / 2.5);
    GridFn rhs = scale_ps(2.5, lps_sup_convolution(f, g, cn), 2, 0.5);
    for (std::size_t i = 0; i < lhs.size(); ++i)
        if (std::fabs(lhs.node(i)[0]) < 3) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(5e-3).scale(1));
}

TEST_CASE("non-associativity") {
    Box b = Box::cube(1, -4, 4, 129);
    std::mt19937_64 rng(12);
    bool differs = false;
    for (int k = 0; k < 5 && !differs; ++k) {
        SConcaveFn f = random_sc(rng, b, 0), g = random_sc(rng, b, 0), h = random_sc(rng, b, 0);
        ConvolveParams c;
        c.p = 2;
        c.s = 0;
        c.alpha = c.beta = 1;
        SConcaveFn fg{0, {}, 1}, gh{0, {}, 1};
        GridFn d1 = lps_sup_convolution(f, g, c), d2 = lps_sup_convolution(g, h, c);
        fg.base = d1;
        gh.base = d2;
        fg.base.kind = gh.base.kind = Kind::base;
        for (auto& v : fg.base.values) v = v > 0 ? -std::log(v) : kInf;
        for (auto& v : gh.base.values) v = v > 0 ? -std::log(v) : kInf;
        GridFn left = lps_sup_convolution(fg, h, c), right = lps_sup_convolution(f, gh, c);
        differs = sup_diff(left, right) > 1e-3;
    }
    CHECK(differs);
}

TEST_CASE("inf-sup-convolution of interval indicators") {
    Box b = Box::cube(1, -8, 8, 257);
    GridFn A = indicator(b, -1, 1);
    for (double p : {0.3, 0.5, 0.8}) {
        ConvolveParams c;
        c.p = p;
        c.s = kInf;
        c.alpha = c.beta = 1;
        c.refine = false;
        GridFn h = lps_infsup_convolution(A, A, c);
        const double r = std::pow(2.0, 1 / p);
        for (std::size_t i = 0; i < h.size(); ++i) {
            double x = std::fabs(h.node(i)[0]);
            if (std::fabs(x - r) < 2 * h.spacing[0]) continue;
            CHECK(h[i] == doctest::Approx(x < r ? 1.0 : 0.0));
        }
    }
    GridFn off = indicator(b, 0.5, 1.5);
    ConvolveParams c;
    c.p = 0.5;
    CHECK_THROWS_AS(lps_infsup_convolution(off, A, c), DomainError);
}

TEST_CASE("min inner mean against a triple loop") {
    Box b = Box::cube(1, -2, 2, 65);
    std::mt19937_64 rng(5);
    SConcaveFn f = random_sc(rng, b, 1), g = random_sc(rng, b, 1);
    ConvolveParams c;
    c.p = 0.5;
    c.s = -kInf;
    c.alpha = 0.5;
    c.beta = 0.5;
    c.lambda_samples = 9;
    c.refine = false;
    GridFn h = lps_infsup_convolution(f.density(), g.density(), c);
    GridFn r = brute_force_lps(f.density(), g.density(), c, LambdaMode::inf);
    CHECK(sup_diff(h, r) <= 1e-12);
    CHECK_THROWS_AS(brute_force_lps(indicator(Box::cube(1, -1, 1, 257), 0, 0.5), f.density(), c, LambdaMode::inf),
                    UsageError);
}
