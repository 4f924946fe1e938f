#pragma once

#include <random>
#include <string>
#include <vector>

#include "lpsum/core.hpp"
#include "lpsum/report.hpp"

namespace lps {

// Indicator GridFn[density] with values exactly 0 or 1.
using GridSet = GridFn;

using Point2 = std::array<double, 2>;

struct SupportFn {
    int dim = 2;
    std::vector<std::array<double, 3>> dirs;  // unit vectors
    std::vector<double> h;

    // Uniform angular grid on S^1.
    static SupportFn circle_grid(int count);
    // Uniform random directions on S^2.
    static SupportFn sphere_random(int count, std::uint64_t seed);

    // Two-column table: angle (2-D) or unit vector components, then value.
    std::string to_table() const;
    static SupportFn from_table(const std::string& text);
};

SupportFn support_of_polytope(const std::vector<Point2>& vertices, int directions = 720);
SupportFn support_of_polytope(const std::vector<Point2>& vertices, const SupportFn& dirs);
// (alpha h_K^p + beta h_L^p)^{1/p}, direction by direction.
SupportFn firey_sum_bodies(const SupportFn& K, const SupportFn& L, double p, double alpha, double beta);

// Grid mask of the intersection of the half-spaces <x,u> <= h(u).
GridSet wulff_shape(const SupportFn& h, const Box& b);
// Exact polygon of the same intersection (2-D).
std::vector<Point2> wulff_polygon(const SupportFn& h);

// Convex polygon helpers (counter-clockwise vertex lists).
std::vector<Point2> convex_hull(std::vector<Point2> pts);
double polygon_area(const std::vector<Point2>& poly);
double polygon_perimeter(const std::vector<Point2>& poly);
bool polygon_contains(const std::vector<Point2>& poly, const Point2& x, double tol = 1e-12);
// Random convex polygon with the origin in its interior, vertex radii in [rmin, rmax].
std::vector<Point2> random_polygon(std::mt19937_64& rng, double rmin, double rmax, int vertices = 7);
GridSet polygon_mask(const std::vector<Point2>& poly, const Box& b);
// (1-t)-style L_p combination of polygons through support functions, exact clipping.
std::vector<Point2> lp_polygon_sum(const std::vector<Point2>& K, const std::vector<Point2>& L, double p, double alpha,
                                   double beta, int directions = 720);
// V_p(K, L) = (p/2) d/de area(K +_p e L) at e = 0, by Richardson-extrapolated difference quotients.
double lp_mixed_area(const std::vector<Point2>& K, const std::vector<Point2>& L, double p, double eps = 1e-2);

// Mask arithmetic.
double mask_volume(const GridSet& A);
GridSet mask_dilate(const GridSet& A, double c);  // c A, resampled on the box of A
GridSet minkowski_sum(const GridSet& A, const GridSet& B, double a, double b);  // a A + b B on the box of A
GridSet mask_union(const GridSet& A, const GridSet& B);
GridSet mask_intersection(const GridSet& A, const GridSet& B);
double symmetric_difference_volume(const GridSet& A, const GridSet& B);
// Directed max-min scans over boundary cells, both ways.
double hausdorff(const GridSet& A, const GridSet& B);
bool origin_interior(const GridSet& A);

// Union over the lambda grid of alpha^{1/p}(1-lambda)^{1/q} A + beta^{1/p} lambda^{1/q} B, p >= 1.
GridSet lp_minkowski_sets(const GridSet& A, const GridSet& B, double p, double alpha, double beta,
                          int lambda_samples = 65);
// Intersection over the lambda grid of the same combinations, 0 < p < 1.
GridSet lp_minkowski_sets_sub1(const GridSet& A, const GridSet& B, double p, double alpha, double beta,
                               int lambda_samples = 65);

// Wulff shape of the Firey sum against the intersection route, Hausdorff <= 2 cell diagonals.
VerificationReport check_coincide(const std::vector<Point2>& K, const std::vector<Point2>& L, double p,
                                  const Box& b, double alpha = 1, double beta = 1, int lambda_samples = 65);

}  // namespace lps
