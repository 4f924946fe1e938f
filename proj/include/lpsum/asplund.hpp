#pragma once

#include "lpsum/core.hpp"
#include "lpsum/report.hpp"

namespace lps {

// Discrete convexity along axes and coordinate-plane diagonals (finite triples only).
bool discretely_convex(const GridFn& u, double tol = 1e-12);

// Midpoint s-concavity along the same lines.
bool discretely_s_concave(const GridFn& f, double s, double tol = 1e-9);

// Base of f: (1 - f^s)/s on {f > 0}, -log f at s = 0, +inf off the support.
// f is normalized by f(o); materially nonconvex data is replaced by its convex envelope,
// with the deviation stored in meta["convexify_dev"].
SConcaveFn to_base(const GridFn& f, double s);
GridFn from_base(const SConcaveFn& f);

// For s > 0 the base is +inf wherever it exceeds 1/s (f vanishes there).
SConcaveFn canonical(const SConcaveFn& f);

// (1 - s[(alpha ⊠_p u) ⊞_p (beta ⊠_p v)])_+^{1/s}, p >= 1.
SConcaveFn lps_asplund_sum_pge1(const SConcaveFn& f, const SConcaveFn& g, double p, double alpha, double beta);
// A[(alpha h_f^p + beta h_g^p)^{1/p}]_s, 0 < p < 1.
SConcaveFn lps_asplund_sum_plt1(const SConcaveFn& f, const SConcaveFn& g, double p, double alpha, double beta);

// Pointwise comparison of the L_{p,s} convolution with the Asplund sum at weights (1-t, t).
// Equality is asserted at s = 0, p >= 1; otherwise the regime's one-sided inequality.
VerificationReport compare_convolution_vs_asplund(const SConcaveFn& f, const SConcaveFn& g, double p, double s,
                                                  double t, std::uint64_t seed = 0);

}  // namespace lps
