#pragma once

#include <functional>
#include <random>

#include "lpsum/core.hpp"
#include "lpsum/quermass.hpp"
#include "lpsum/report.hpp"
#include "lpsum/sets.hpp"

namespace lps {

// ---- instance generators

// Convex base with u(0) = 0: a quadratic plus hinges that vanish on a neighbourhood of the origin,
// restricted to a random convex domain of radius in [rmin, rmax] around the origin.
GridFn random_convex_base(std::mt19937_64& rng, const Box& b, double rmin, double rmax, double qmin = 0.5,
                          double qmax = 2);
// Omega_s of such a base; s = +inf gives the indicator of the domain.
SConcaveFn random_s_concave(std::mt19937_64& rng, const Box& b, double s, double rmin, double rmax);

// ---- super-level machinery

GridSet superlevel_set(const GridFn& f, double r);

struct SetFunctional {
    enum class Tag { volume, quermass, weighted_mass };
    Tag tag = Tag::volume;
    int j = 0;
    double alpha = 1;  // concavity exponent it is certified for
    std::vector<Subspace> hs;
    ScalarField density;

    double operator()(const GridSet& A) const;

    static SetFunctional volume(int dim);
    // W_j of masks by Monte Carlo over a fixed subspace sample; alpha = 1/(n-j).
    static SetFunctional quermass(int dim, int j, int count, std::uint64_t seed);
    static SetFunctional weighted_mass(ScalarField density, double alpha);
};

// Midpoint rule over levels r in (0, max f].
double omega_tilde(const SetFunctional& Om, const GridFn& f, int levels = 64);

// ---- inequality suites

// s = kInf runs indicators of random polygons (intervals in 1-D) against the exact L_p sum.
VerificationReport verify_lp_bbl(int trials, double p, double s, double t, int dim, std::uint64_t seed = 1);
VerificationReport verify_classic_bbl(int trials, double s, double t, int dim, std::uint64_t seed = 1);
VerificationReport verify_omega_bbl(int trials, const SetFunctional& Om, double p, double alpha, double gamma, double t,
                                    int dim = 2, std::uint64_t seed = 1);
VerificationReport verify_1d_lpgamma_bbl(int trials, double p, double alpha, double gamma, double t = 0.5,
                                         std::uint64_t seed = 1);
VerificationReport verify_quermass_bbl(int trials, double p, double alpha, double gamma, double t, int j,
                                       std::uint64_t seed = 1);

// ---- concavity classes

enum class ConcavityVariant { standard, quasi };

// Samples (x, y, lambda, t) and checks f(Cx + Dy) >= M_s^{(C,D)}(f(x), f(y)); s = -inf is the min,
// s = 0 the weighted geometric mean. quasi checks min{C^s f(x), D^s f(y)} instead.
VerificationReport is_lps_concave(const GridFn& f, double p, double s, int samples, std::uint64_t seed = 1,
                                  ConcavityVariant variant = ConcavityVariant::standard);
// Callable form on R^n (dim <= 3), points drawn from the box.
VerificationReport is_lps_concave(const ScalarField& f, int dim, const Box& sample_box, double p, double s,
                                  int samples, std::uint64_t seed = 1,
                                  ConcavityVariant variant = ConcavityVariant::standard);
// f on (0, inf): f(M_gamma^{(C,D)}-argument) >= M_s^{(C,D)}(f(x), f(y)) with the gamma-mean of x, y.
VerificationReport is_lpsgamma_concave_1d(const std::function<double(double)>& f, double xmax, double p, double s,
                                          double gamma, int samples, std::uint64_t seed = 1);

// gamma_0 = (1/s + 1/beta + n)^{-1}.
double convolution_exponent(double s, double beta_exp, int n);
VerificationReport verify_convolution_concavity(int trials, double p, double s, double beta_exp,
                                                std::uint64_t seed = 1, int samples = 400);

// Section mass x -> mu(K ∩ (x + H)) over H-perp coordinates; K a polygon, density on R^2.
VerificationReport verify_section_concavity(const std::vector<Point2>& K, const ScalarField& density, double s,
                                            const Subspace& H, double p, int j, int samples = 400,
                                            std::uint64_t seed = 1);

}  // namespace lps
