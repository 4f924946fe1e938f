#pragma once

#include <vector>

#include "lpsum/core.hpp"

namespace lps {

// Axis-aligned bounding box of the finite nodes of a base function.
struct Extent {
    int dim = 1;
    std::array<double, 3> lo{0, 0, 0};
    std::array<double, 3> hi{0, 0, 0};
};

Extent finite_extent(const GridFn& u);
// Extent of dom[(alpha ⊠_p u) ⊞_p (beta ⊠_p v)] per axis, given extents that contain the origin.
Extent lp_extent(double alpha, const Extent& eu, double beta, const Extent& ev, double p);
// Sets w to +inf outside the extent (with a half-cell allowance).
void mask_outside(GridFn& w, const Extent& e);

// Symmetric slope box [-Y,Y] per axis, Y = 1.1 * max |discrete gradient|, odd node count.
// 1-D default: at least 2Y / h + 1 nodes.
Box dual_box(const GridFn& u, int n = 0);
Box dual_box(const GridFn& u, const GridFn& v, int n = 0);

// One-dimensional discrete conjugate: out[j] = max_i (x_i y_j - f_i), f on a uniform grid.
// Lower hull plus a monotone sweep; ties resolve to the lowest index. Returns -inf on all-inf input.
void conj_line(double x0, double dx, int n, const double* f, double y0, double dy, int m, double* out,
               std::vector<int>& hull);

GridFn legendre_transform(const GridFn& u, const Box& dual);
GridFn legendre_transform(const GridFn& u);

// Discrete conjugate evaluated at one slope point by direct maximization.
double legendre_at(const GridFn& m, const std::array<double, 3>& z);

// (u*)*: the closed convex envelope of u, +inf outside the hull of dom u.
GridFn biconjugate(const GridFn& u);

// (u* + v*)*, on the box of u unless another box is given.
GridFn inf_convolution(const GridFn& u, const GridFn& v);
GridFn inf_convolution(const GridFn& u, const GridFn& v, const Box& out);

// Dual-side p-combination (alpha phi^p + beta psi^p)^{1/p}; phi, psi on the same dual grid.
GridFn lp_dual_sum(double alpha, const GridFn& phi, double beta, const GridFn& psi, double p);

// [(alpha ⊠_p u) ⊞_p (beta ⊠_p v)] = {(alpha (u*)^p + beta (v*)^p)^{1/p}}*, p >= 1.
GridFn lp_base_sum(double alpha, const GridFn& u, double beta, const GridFn& v, double p);
GridFn lp_base_sum(double alpha, const GridFn& u, double beta, const GridFn& v, double p, const Box& out);

// h_f = (u_f)*.
GridFn support_fn(const SConcaveFn& f);
GridFn support_fn(const SConcaveFn& f, const Box& dual);

// Marks +inf where the sup defining w* is attained only on the faces of the grid of w,
// i.e. where the slope box is too small to resolve the value. Returns the count.
int mask_saturated(GridFn& wstar, const GridFn& w);

// A[w]_s = (1 - s w*)_+^{1/s}, evaluated on the given primal box.
SConcaveFn s_aleksandrov(const GridFn& w, double s, const Box& primal);
SConcaveFn s_aleksandrov(const GridFn& w, double s);

namespace ref {
// Serial reference of the transform kernel.
GridFn legendre_transform(const GridFn& u, const Box& dual);
// O(N M) direct double loop.
GridFn legendre_brute(const GridFn& u, const Box& dual);
}  // namespace ref

}  // namespace lps
