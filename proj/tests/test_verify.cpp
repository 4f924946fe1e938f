#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "lpsum/convolve.hpp"
#include "lpsum/verify.hpp"

using namespace lps;

namespace {

GridFn gaussian(const Box& b, double sigma, double amp = 1) {
    GridFn f(b, Kind::density);
    f.fill([&](auto x) { return amp * std::exp(-(x[0] * x[0] + x[1] * x[1]) / (2 * sigma * sigma)); });
    return f;
}

GridFn interval(const Box& b, double lo, double hi) {
    GridFn f(b, Kind::density);
    f.fill([&](auto x) { return (x[0] >= lo - 1e-9 && x[0] <= hi + 1e-9) ? 1.0 : 0.0; });
    return f;
}

Subspace line(double theta) {
    Subspace H;
    H.n = 2;
    H.k = 1;
    H.frame[0] = {std::cos(theta), std::sin(theta), 0};
    H.perp[0] = {-std::sin(theta), std::cos(theta), 0};
    return H;
}

}  // namespace

TEST_CASE("layer cake: omega_tilde of the volume is the total mass") {
    for (int dim : {1, 2}) {
        Box b = dim == 1 ? Box::cube(1, -6, 6, 1201) : Box::cube(2, -5, 5, 161);
        GridFn f = gaussian(b, 1.1, 1.7);
        double m = total_mass(f);
        CHECK(omega_tilde(SetFunctional::volume(dim), f, 256) == doctest::Approx(m).epsilon(1e-2));
    }
    // a weighted mass with density 1 is the volume
    Box b = Box::cube(2, -5, 5, 161);
    GridFn f = gaussian(b, 1.0);
    auto Om = SetFunctional::weighted_mass([](const Vec3&) { return 1.0; }, 0.5);
    CHECK(omega_tilde(Om, f, 128) == doctest::Approx(omega_tilde(SetFunctional::volume(2), f, 128)).epsilon(1e-9));
}

TEST_CASE("super-level sets") {
    Box b = Box::cube(1, -4, 4, 801);
    GridFn f = gaussian(b, 1.0);
    GridSet A = superlevel_set(f, std::exp(-0.5));
    CHECK(std::fabs(mask_volume(A) - 2.0) <= 2 * b.spacing(0));
    CHECK(mask_volume(superlevel_set(f, 0)) == doctest::Approx(8.0 + b.spacing(0)).epsilon(1e-9));
    CHECK(mask_volume(superlevel_set(f, 2)) == 0);
}

TEST_CASE("quermass functional of a disk") {
    Box b = Box::cube(2, -4, 4, 257);
    GridSet D(b, Kind::density);
    D.fill([](auto x) { return x[0] * x[0] + x[1] * x[1] <= 4 ? 1.0 : 0.0; });
    auto W1 = SetFunctional::quermass(2, 1, 16, 3);
    // W_1 of a disk of radius 2 is c_{2,1} times its width 4
    CHECK(W1(D) == doctest::Approx(c_const(2, 1) * 4).epsilon(2 * b.spacing(0) / 4));
    CHECK(SetFunctional::quermass(2, 0, 4, 3)(D) == doctest::Approx(mask_volume(D)));
}

TEST_CASE("L_p-BBL suites pass on small samples") {
    for (double s : {kInf, 1.0, 0.0, -0.25}) {
        for (double p : {1.0, 2.0}) {
            auto rep = verify_lp_bbl(4, p, s, 0.3, 1, 7);
            INFO("s=" << s << " p=" << p << " " << rep.summary());
            CHECK(rep.trials.size() == 4);
            CHECK(rep.passed());
        }
    }
    auto rep2 = verify_lp_bbl(2, 2, 0.0, 0.5, 2, 7);
    INFO(rep2.summary());
    CHECK(rep2.passed());
    auto polys = verify_lp_bbl(6, 3, kInf, 0.5, 2, 7);
    CHECK(polys.passed());
    CHECK(verify_classic_bbl(4, 0.5, 0.5, 1, 3).passed());
    CHECK_THROWS_AS(verify_classic_bbl(1, -2, 0.5, 1), UsageError);
}

TEST_CASE("below -1/n the for-all-lambda reading is reported") {
    auto rep = verify_lp_bbl(3, 2, -2.0, 0.5, 1, 5);
    CHECK(rep.trials.size() == 3);
    CHECK_FALSE(rep.notes.empty());
}

TEST_CASE("L_p-BBL is scale covariant") {
    // dilating both inputs by r multiplies I(h), I(f), I(g) by r, so the relative slack is unchanged
    auto ratio = [](double r) {
        Box b = Box::cube(1, -8 * r, 8 * r, 1025);
        GridFn f(b, Kind::density), g(b, Kind::density);
        f.fill([&](auto x) { return std::exp(-0.5 * std::pow(x[0] / r - 0.4, 2)); });
        g.fill([&](auto x) { double y = x[0] / r + 0.3; return std::exp(-y * y / 0.8 - std::fabs(y)); });
        GridFn h = lps_sup_convolution(f, g, ConvolveParams::with_t(2, 0, 0.4));
        double rhs = ms_mean({0, 0.6, 0.4}, total_mass(f), total_mass(g));
        return total_mass(h) / rhs;
    };
    double base = ratio(1);
    CHECK(base >= 1 - 1e-6);
    for (double r : {0.5, 2.0}) CHECK(ratio(r) == doctest::Approx(base).epsilon(1e-6));
}

TEST_CASE("Omega-BBL with volume and quermass functionals") {
    auto vol = verify_omega_bbl(2, SetFunctional::volume(2), 1, 0.5, 1, 0.5, 2, 11);
    INFO(vol.summary());
    CHECK(vol.passed());
    auto W1 = verify_omega_bbl(2, SetFunctional::quermass(2, 1, 32, 4), 1, 1, 1, 0.5, 2, 11);
    INFO(W1.summary());
    CHECK(W1.passed());
}

TEST_CASE("one-dimensional L_{p,gamma}-BBL") {
    for (double gamma : {1.0, 0.5, 0.0, -0.5}) {
        for (double p : {1.0, 2.0}) {
            auto rep = verify_1d_lpgamma_bbl(4, p, 1, gamma, 0.5, 13);
            INFO("gamma=" << gamma << " p=" << p << " " << rep.summary());
            CHECK(rep.passed());
        }
    }
    // alpha != 1 goes through quadrature for I(f)
    CHECK(verify_1d_lpgamma_bbl(3, 1, 0.5, 1, 0.3, 17).passed());
    CHECK(verify_1d_lpgamma_bbl(3, 2, 0, 1, 0.5, 17).passed());
}

TEST_CASE("quermass BBL") {
    auto rep = verify_quermass_bbl(2, 1, 1, 1, 0.5, 1, 19);
    INFO(rep.summary());
    CHECK(rep.passed());
}

TEST_CASE("L_{p,s}-concavity sampler") {
    Box b = Box::cube(1, -4, 4, 801);
    // intervals containing the origin are L_{p,inf}-concave; those off the origin are not for p > 1
    CHECK(is_lps_concave(interval(b, -1, 2), 2, kInf, 400, 1).passed());
    auto off = is_lps_concave(interval(b, 1, 2), 2, kInf, 400, 1);
    CHECK_FALSE(off.passed());
    CHECK(off.min_slack() < -0.5);

    // log-concave with f(0) >= 1
    GridFn g = gaussian(b, 1.0, 1.5);
    CHECK(is_lps_concave(g, 2, 0, 400, 2).passed());

    ScalarField cap = [](const Vec3& x) { return std::max(0.0, 1 - x[0] * x[0] - x[1] * x[1]); };
    CHECK(is_lps_concave(cap, 2, Box::cube(2, -1.2, 1.2, 2), 1, 1, 400, 3).passed());
    // a cap is not 2-concave
    CHECK_FALSE(is_lps_concave(cap, 2, Box::cube(2, -1.2, 1.2, 2), 1, 2, 2000, 3).passed());
}

TEST_CASE("L_{p,s,gamma}-concavity on the half line") {
    // x -> x with gamma = s = 1 is an equality case
    auto id = is_lpsgamma_concave_1d([](double x) { return x; }, 5, 2, 1, 1, 400, 1);
    CHECK(id.passed());
    CHECK(id.min_slack() <= 1e-9);
    CHECK(is_lpsgamma_concave_1d([](double) { return 1.0; }, 5, 2, 0.5, 0.5, 400, 1).passed());
    // x^2 is not 1-concave in the 1-mean of its argument
    CHECK_FALSE(is_lpsgamma_concave_1d([](double x) { return x * x; }, 5, 1, 1, 1, 400, 1).passed());
}

TEST_CASE("convolution concavity") {
    CHECK(convolution_exponent(kInf, kInf, 2) == doctest::Approx(0.5));
    CHECK(convolution_exponent(1, 1, 1) == doctest::Approx(1.0 / 3));
    CHECK(convolution_exponent(0, 0, 1) == 0);
    CHECK(convolution_exponent(0, 1, 1) == 0);
    for (auto [s, beta] : {std::pair{kInf, kInf}, {0.0, 0.0}, {1.0, 1.0}}) {
        auto rep = verify_convolution_concavity(3, 1, s, beta, 23, 200);
        INFO("s=" << s << " beta=" << beta << " " << rep.summary());
        CHECK(rep.passed());
    }
}

TEST_CASE("section concavity") {
    std::vector<Point2> sq{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    ScalarField one = [](const Vec3&) { return 1.0; };
    auto rep = verify_section_concavity(sq, one, kInf, line(0.3), 1, 1, 300, 1);
    INFO(rep.summary());
    CHECK(rep.suite == "section-concavity");
    CHECK(rep.passed());

    std::vector<Point2> tri{{-1, -0.5}, {1.5, -0.8}, {0.2, 1.4}};
    ScalarField gauss = [](const Vec3& x) { return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])); };
    CHECK(verify_section_concavity(tri, gauss, 0, line(1.1), 1, 1, 300, 2).passed());
    CHECK_THROWS(verify_section_concavity(sq, one, kInf, Subspace::full(2), 1, 1));
}

TEST_CASE("reports serialize") {
    auto rep = verify_lp_bbl(2, 1, kInf, 0.5, 1, 3);
    std::string csv = rep.to_csv();
    CHECK(csv.find("seed") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 3);
}
