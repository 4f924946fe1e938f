#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lpsum/core.hpp"
#include "lpsum/report.hpp"

namespace lps {

using Vec3 = std::array<double, 3>;

struct Subspace {
    int n = 2;
    int k = 1;
    std::array<Vec3, 3> frame{};  // frame[c] is the c-th orthonormal column, c < k
    std::array<Vec3, 3> perp{};   // orthonormal complement, n - k columns

    Vec3 embed(const Vec3& z) const;   // sum_c z_c frame[c]
    Vec3 coords(const Vec3& x) const;  // frame^T x
    double orthonormality_error() const;
    static Subspace full(int n);
};

// Haar sampling by orthonormalizing Gaussian frames; deterministic given the seed.
std::vector<Subspace> sample_grassmannian(int n, int k, int count, std::uint64_t seed);
// One row per subspace: n k followed by the frame entries column by column.
std::string subspaces_to_table(const std::vector<Subspace>& hs);
std::vector<Subspace> subspaces_from_table(const std::string& text);

double unit_ball_volume(int n);
// omega_n / omega_{n-j}.
double c_const(int n, int j);

struct OmegaWeight {
    enum class Tag { omega_s, custom };
    Tag tag = Tag::omega_s;
    double s = 0;
    // custom: decreasing profile sampled at increasing r, linear in between, last value beyond
    std::vector<double> r, value;

    double operator()(double x) const;
    double prime(double x) const;
    static OmegaWeight omega(double s);
    static OmegaWeight sampled(std::vector<double> r, std::vector<double> value);
};

// Grid on H: k axes of the ambient spacing, covering the ambient box in every direction.
Box subspace_box(const GridFn& f, const Subspace& H);

// (P_H f)(z) = sup over the H-perp lattice of f(z + y).
GridFn project_fn(const GridFn& f, const Subspace& H);
// (P~_H u)(z) = inf over the same lattice of u(z + y).
GridFn project_base(const GridFn& u, const Subspace& H);
// Restriction x -> F(x) for x in H, on the H grid.
GridFn section_fn(const GridFn& f, const Subspace& H);

struct McEstimate {
    double value = 0;
    double stderr_ = 0;             // standard error of the mean, already scaled
    std::vector<double> samples;    // scaled per-subspace values
};

McEstimate quermass_fn(const GridFn& f, int j, const std::vector<Subspace>& hs);
double quermass_fn(const GridFn& f, int j, int subspace_count, std::uint64_t seed);

double omega_total_mass(const GridFn& u, const OmegaWeight& Om);
McEstimate omega_quermass(const GridFn& u, const OmegaWeight& Om, int j, const std::vector<Subspace>& hs);

using ScalarField = std::function<double(const Vec3&)>;

// u_H(z) = inf over H-perp of u, for smooth u given as a callable; z in H coordinates.
double projected_base_at(const ScalarField& u, const Subspace& H, const Vec3& z, double radius = 8);

// -(1/p) psi_H(grad u_H(x))^p phi_H(grad u_H(x))^{1-p}, x in H coordinates.
// phi_H at the gradient uses the conjugate identity <x, grad> - u_H(x).
double variation_projected_base(const ScalarField& u, const ScalarField& psi, const Subspace& H, const Vec3& x,
                                double p, double h = 1e-4);
// Same on grid data: central differences of project_base(u, H), psi on its dual grid.
double variation_projected_base(const GridFn& u, const GridFn& psi, const Subspace& H, const Vec3& x, double p);

struct MixedResult {
    double value = 0;      // Grassmannian form, the first variation of the Omega-quermassintegral
    double stderr_ = 0;
    double literal = 0;    // -(1/p) int_{R^n} (...) / |x|^j, no c_{n,j}; origin cell excluded
    double excluded = 0;   // bound on the mass of the excluded cell
    double gate_error = 0; // worst relative error of the conjugate identity at interior nodes
    bool finite = true;
    std::string diagnostics;
};

// Difference quotients of W_j(f ⋆ eps·g) along eps_schedule, Richardson-extrapolated.
// The same subspace sample is used at every eps.
MixedResult mixed_quermass_fd(const SConcaveFn& f, const SConcaveFn& g, double p, int j,
                              const std::vector<double>& eps_schedule, const std::vector<Subspace>& hs);
MixedResult mixed_quermass_integral(const GridFn& u, const GridFn& v, const OmegaWeight& Om, double p, int j,
                                    const std::vector<Subspace>& hs);

struct MixedS {
    MixedResult raw;        // 𝕎^{Omega_s}_{p,j}
    double normalized = 0;  // p/(n-j) 𝕎
    double corollary = 0;   // 1/(n-j) 𝕎, prefactor placement as displayed for s != 0
};
MixedS mixed_quermass_s(const SConcaveFn& f, const SConcaveFn& g, double p, int j, const std::vector<Subspace>& hs);

// int F against c_{n,j} E_H int_H F |x|^j; notes carry the ratio and the per-H variance.
VerificationReport blaschke_petkantschin_check(const GridFn& F, int j, int samples, std::uint64_t seed,
                                               double tolerance = 0.02);

// Power, scalar, sup-convolution and base-sum commutation with projection on H.
VerificationReport verify_projection_identities(const SConcaveFn& f, const SConcaveFn& g, double p, double s,
                                                const Subspace& H);

}  // namespace lps
