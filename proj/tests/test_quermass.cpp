#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "lpsum/quermass.hpp"
#include "lpsum/sets.hpp"
#include "lpsum/verify.hpp"

using namespace lps;

namespace {

constexpr double kPi = std::numbers::pi;

SConcaveFn quadratic_fn(const Box& b, double c, double s = 0) {
    SConcaveFn f;
    f.s = s;
    f.base = GridFn(b, Kind::base);
    f.base.fill([&](auto x) { return (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2 * c); });
    return f;
}

GridFn disk(const Box& b, double r) {
    GridFn f(b, Kind::density);
    f.fill([&](auto x) { return x[0] * x[0] + x[1] * x[1] <= r * r ? 1.0 : 0.0; });
    return f;
}

std::vector<Point2> regular(int m, double r) {
    std::vector<Point2> P;
    for (int i = 0; i < m; ++i) P.push_back({r * std::cos(2 * kPi * i / m), r * std::sin(2 * kPi * i / m)});
    return P;
}

}  // namespace

TEST_CASE("Grassmannian samples") {
    for (auto [n, k] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
        auto hs = sample_grassmannian(n, k, 50, 9);
        REQUIRE(hs.size() == 50);
        for (const auto& H : hs) CHECK(H.orthonormality_error() < 1e-12);
        auto again = sample_grassmannian(n, k, 50, 9);
        CHECK(again[17].frame[0][0] == hs[17].frame[0][0]);
        auto back = subspaces_from_table(subspaces_to_table(hs));
        REQUIRE(back.size() == hs.size());
        for (int c = 0; c < k; ++c)
            for (int a = 0; a < n; ++a) CHECK(back[3].frame[c][a] == doctest::Approx(hs[3].frame[c][a]).epsilon(1e-12));
    }
    // lines in the plane: the angle is uniform, so |cos| averages to 2/pi
    auto hs = sample_grassmannian(2, 1, 4000, 2);
    double m = 0;
    for (const auto& H : hs) m += std::fabs(H.frame[0][0]) / hs.size();
    CHECK(m == doctest::Approx(2 / kPi).epsilon(0.03));
}

TEST_CASE("constants") {
    CHECK(unit_ball_volume(2) == doctest::Approx(kPi));
    CHECK(unit_ball_volume(3) == doctest::Approx(4 * kPi / 3));
    CHECK(c_const(2, 1) == doctest::Approx(kPi / 2));
    CHECK(c_const(3, 0) == doctest::Approx(1));
}

TEST_CASE("quermassintegrals of a disk") {
    Box b = Box::cube(2, -4, 4, 257);
    const double h = b.spacing(0);
    for (double r : {1.0, 2.5}) {
        GridFn D = disk(b, r);
        // W_1 of a disk is c_{2,1} times its width: pi r
        CHECK(quermass_fn(D, 1, 32, 5) == doctest::Approx(kPi * r).epsilon(2 * h / r));
        CHECK(quermass_fn(D, 0, 1, 5) == doctest::Approx(total_mass(D)));
    }
    // a rotation-invariant density has zero Monte Carlo spread
    auto hs = sample_grassmannian(2, 1, 16, 1);
    McEstimate e = quermass_fn(disk(b, 2), 1, hs);
    CHECK(e.stderr_ < 2 * h);
}

TEST_CASE("projections of functions") {
    Box b = Box::cube(2, -4, 4, 129);
    GridFn f(b, Kind::density);
    f.fill([](auto x) { return std::exp(-0.5 * (x[0] * x[0] + 4 * x[1] * x[1])); });
    Subspace H = sample_grassmannian(2, 1, 1, 3)[0];
    GridFn P = project_fn(f, H);
    for (double z : {-1.0, 0.0, 0.7}) {
        // the minimum of x^2 + 4y^2 over the line z e + R e_perp is 4 z^2 / (4c^2 + s^2)
        const double c = H.frame[0][0], s = H.frame[0][1];
        const double expect = std::exp(-0.5 * z * z * 4 / (4 * c * c + s * s));
        CHECK(grid_eval(P, z) == doctest::Approx(expect).epsilon(0.02));
    }
    GridFn u = quadratic_fn(b, 1).base;
    GridFn uh = project_base(u, H);
    CHECK(grid_eval(uh, 1.0) == doctest::Approx(0.5).epsilon(1e-3));
    GridFn sec = section_fn(f, H);
    CHECK(grid_eval(sec, 0.0) == doctest::Approx(1));
}

TEST_CASE("projection identities") {
    auto hs = sample_grassmannian(2, 1, 2, 8);
    // full-support log-concave inputs: no density jumps for the interpolants to disagree on
    Box b = Box::cube(2, -8, 8, 513);
    for (int i = 0; i < 2; ++i) {
        auto rng = trial_rng(31, i);
        SConcaveFn f = random_s_concave(rng, b, 0, 16, 16), g = random_s_concave(rng, b, 0, 16, 16);
        auto rep = verify_projection_identities(f, g, 2, 0, hs[i]);
        INFO(rep.to_csv());
        CHECK(rep.passed());
    }
    // compact supports: the node-level identities stay exact
    Box c = Box::cube(2, -4, 4, 129);
    auto rng = trial_rng(32, 0);
    SConcaveFn f = random_s_concave(rng, c, 1, 8, 8), g = random_s_concave(rng, c, 1, 8, 8);
    auto rep = verify_projection_identities(f, g, 2, 1, hs[0]);
    for (const auto& t : rep.trials)
        if (t.params.rfind("power", 0) == 0 || t.params.rfind("base-route", 0) == 0) CHECK(t.slack >= -1e-12);
    CHECK_THROWS_AS(verify_projection_identities(f, g, 2, 0, hs[0]), UsageError);
}

TEST_CASE("first variation of the projected base") {
    // u = |x|^2/2 projects to z^2/2 on every line; psi = c |y|^2 / 2
    ScalarField u = [](const Vec3& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); };
    ScalarField psi = [](const Vec3& y) { return 1.5 * (y[0] * y[0] + y[1] * y[1]); };
    Subspace H = sample_grassmannian(2, 1, 1, 4)[0];
    for (double z : {0.3, 1.0, 2.0}) {
        CHECK(variation_projected_base(u, psi, H, {z, 0, 0}, 1) == doctest::Approx(-1.5 * z * z).epsilon(1e-4));
        // p = 2: -(1/2) psi^2 phi^{-1} with phi = z^2/2
        const double ps = 1.5 * z * z, ph = 0.5 * z * z;
        CHECK(variation_projected_base(u, psi, H, {z, 0, 0}, 2) == doctest::Approx(-0.5 * ps * ps / ph).epsilon(1e-4));
    }
}

TEST_CASE("mixed quermassintegrals: difference quotients against the integral") {
    Box b = Box::cube(2, -6, 6, 97);
    SConcaveFn f = quadratic_fn(b, 1), g = quadratic_fn(b, 2);
    // log-concave first variation: int psi(grad u) e^{-u} = c/2 int |x|^2 e^{-|x|^2/2} = 2 pi c
    auto full = std::vector<Subspace>{};
    MixedResult I = mixed_quermass_integral(f.base, g.base, OmegaWeight::omega(0), 1, 0, full);
    CHECK(I.value == doctest::Approx(4 * kPi).epsilon(0.01));
    MixedResult D = mixed_quermass_fd(f, g, 1, 0, {0.02, 0.01, 0.005}, full);
    CHECK(D.value == doctest::Approx(4 * kPi).epsilon(0.01));

    auto hs = sample_grassmannian(2, 1, 8, 6);
    MixedResult I1 = mixed_quermass_integral(f.base, g.base, OmegaWeight::omega(0), 2, 1, hs);
    // u_H = z^2/2 and psi_H = z^2 on every line, so at p = 1 the value is c_{2,1} int z^2 e^{-z^2/2}
    MixedResult J = mixed_quermass_integral(f.base, g.base, OmegaWeight::omega(0), 1, 1, hs);
    CHECK(J.value == doctest::Approx(kPi / 2 * std::sqrt(2 * kPi)).epsilon(0.01));
    MixedResult D1 = mixed_quermass_fd(f, g, 2, 1, {0.02, 0.01, 0.005}, hs);
    CHECK(D1.value == doctest::Approx(I1.value).epsilon(0.05));
    // with the true Blaschke-Petkantschin constant the R^n form is n/(n-j) times the Grassmannian one
    CHECK(I1.literal / I1.value == doctest::Approx(2).epsilon(0.02));

    MixedS m = mixed_quermass_s(f, g, 2, 1, hs);
    CHECK(m.normalized == doctest::Approx(2 * m.raw.value));
    CHECK(m.corollary == doctest::Approx(m.raw.value));
    CHECK_THROWS_AS(mixed_quermass_integral(f.base, g.base, OmegaWeight::omega(0), 0.5, 0, full), UsageError);
}

TEST_CASE("mixed quermassintegrals at s = 1") {
    // u = |x|^2/2, psi = c|y|^2/2 with c = 1/2: psi(grad u) integrated over {u < 1} is pi c;
    // the truncation of v at 1 leaves psi unchanged on slopes |y| <= 2
    Box b = Box::cube(2, -3, 3, 193);
    SConcaveFn f = quadratic_fn(b, 1, 1), g = quadratic_fn(b, 0.5, 1);
    const double exact = kPi / 2;
    CHECK(mixed_quermass_s(f, g, 1, 0, {}).raw.value == doctest::Approx(exact).epsilon(0.02));
    CHECK(mixed_quermass_fd(f, g, 1, 0, {0.02, 0.01, 0.005}, {}).value == doctest::Approx(exact).epsilon(0.03));
}

TEST_CASE("L_p mixed areas of polygons") {
    std::vector<Point2> sq{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    CHECK(lp_mixed_area(sq, sq, 1) == doctest::Approx(4).epsilon(1e-6));
    CHECK(lp_mixed_area(sq, sq, 2) == doctest::Approx(4).epsilon(1e-6));
    auto circ = regular(720, 1);
    CHECK(lp_mixed_area(circ, circ, 3) == doctest::Approx(polygon_area(circ)).epsilon(1e-4));
    // V_1(K, B) is half the perimeter
    auto rng = std::mt19937_64(4);
    auto K = random_polygon(rng, 1, 2);
    CHECK(lp_mixed_area(K, circ, 1) == doctest::Approx(0.5 * polygon_perimeter(K)).epsilon(1e-3));
}

TEST_CASE("Blaschke-Petkantschin with the stated constant") {
    // the identity holds with n omega_n / ((n-j) omega_{n-j}); c_{n,j} = omega_n / omega_{n-j} misses n/(n-j)
    Box b = Box::cube(2, -5, 5, 129);
    GridFn F(b, Kind::density);
    F.fill([](auto x) { return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])); });
    auto rep = blaschke_petkantschin_check(F, 1, 64, 3);
    CHECK_FALSE(rep.passed());
    CHECK(rep.trials[0].lhs / rep.trials[0].rhs == doctest::Approx(2).epsilon(0.01));
    CHECK(blaschke_petkantschin_check(F, 0, 1, 3).passed());
}
