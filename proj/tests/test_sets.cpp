#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "lpsum/sets.hpp"

using namespace lps;

namespace {

std::vector<Point2> square(double r) { return {{-r, -r}, {r, -r}, {r, r}, {-r, r}}; }

const Box kBox = Box::cube(2, -4, 4, 129);

}  // namespace

TEST_CASE("polygon helpers") {
    auto hull = convex_hull({{1, 1}, {-1, -1}, {0, 0}, {1, -1}, {-1, 1}, {0.5, 0.2}});
    REQUIRE(hull.size() == 4);
    CHECK(polygon_area(hull) == doctest::Approx(4));
    CHECK(polygon_perimeter(hull) == doctest::Approx(8));
    CHECK(polygon_contains(hull, {0.9, -0.9}));
    CHECK_FALSE(polygon_contains(hull, {1.1, 0}));

    auto rng = std::mt19937_64(3);
    for (int k = 0; k < 20; ++k) {
        auto P = random_polygon(rng, 1, 3);
        CHECK(polygon_area(P) > 0);
        CHECK(polygon_contains(P, {0, 0}));
    }
}

TEST_CASE("polygon masks measure the area") {
    const double cell = kBox.spacing(0);
    for (double r : {0.7, 1.5, 2.9}) {
        GridSet m = polygon_mask(square(r), kBox);
        CHECK(std::fabs(mask_volume(m) - 4 * r * r) <= cell * 8 * r);
        CHECK(origin_interior(m));
    }
    GridSet off = polygon_mask({{1, 1}, {2, 1}, {2, 2}, {1, 2}}, kBox);
    CHECK_FALSE(origin_interior(off));
}

TEST_CASE("support functions and Wulff shapes") {
    SupportFn h = support_of_polytope(square(1), 720);
    for (std::size_t i = 0; i < h.dirs.size(); ++i)
        CHECK(h.h[i] == doctest::Approx(std::fabs(h.dirs[i][0]) + std::fabs(h.dirs[i][1])));
    CHECK(polygon_area(wulff_polygon(h)) == doctest::Approx(4).epsilon(1e-9));

    SupportFn two = firey_sum_bodies(h, h, 1, 1, 1);
    CHECK(polygon_area(wulff_polygon(two)) == doctest::Approx(16).epsilon(1e-9));

    SupportFn back = SupportFn::from_table(h.to_table());
    REQUIRE(back.h.size() == h.h.size());
    for (std::size_t i = 0; i < h.h.size(); ++i) CHECK(back.h[i] == doctest::Approx(h.h[i]).epsilon(1e-12));

    GridSet w = wulff_shape(h, kBox);
    CHECK(symmetric_difference_volume(w, polygon_mask(square(1), kBox)) <= 8 * kBox.spacing(0));
}

TEST_CASE("L_p polygon sums") {
    CHECK(polygon_area(lp_polygon_sum(square(1), square(1), 1, 1, 1)) == doctest::Approx(16).epsilon(1e-9));
    // a body averaged with itself is itself for every p
    for (double p : {1.0, 2.0, 3.0})
        CHECK(polygon_area(lp_polygon_sum(square(1), square(1), p, 0.5, 0.5)) == doctest::Approx(4).epsilon(1e-4));
    // h_K + h_L >= (h_K^2 + h_L^2)^{1/2} >= (h_K + h_L)/sqrt 2
    auto R = std::vector<Point2>{{0, -1.2}, {1.2, 0}, {0, 1.2}, {-1.2, 0}};
    double a1 = polygon_area(lp_polygon_sum(square(1), R, 1, 1, 1));
    double a2 = polygon_area(lp_polygon_sum(square(1), R, 2, 1, 1));
    CHECK(a2 < a1);
    CHECK(a2 > 0.5 * a1);
}

TEST_CASE("mask Minkowski sums") {
    GridSet A = polygon_mask(square(1), kBox), B = polygon_mask(square(0.5), kBox);
    GridSet S = minkowski_sum(A, B, 1, 1);
    CHECK(symmetric_difference_volume(S, polygon_mask(square(1.5), kBox)) <= 3 * kBox.spacing(0) * 12);
    GridSet D = mask_dilate(A, 2);
    CHECK(symmetric_difference_volume(D, polygon_mask(square(2), kBox)) <= 3 * kBox.spacing(0) * 16);
    CHECK(mask_volume(mask_union(A, B)) == doctest::Approx(mask_volume(A)));
    CHECK(mask_volume(mask_intersection(A, B)) == doctest::Approx(mask_volume(B)));
    GridSet empty(kBox, Kind::density, 0.0);
    CHECK_THROWS_AS(minkowski_sum(A, empty, 1, 1), UsageError);
}

TEST_CASE("Hausdorff distance of masks") {
    GridSet A = polygon_mask(square(1), kBox);
    GridSet B = polygon_mask({{-1, -1}, {1.5, -1}, {1.5, 1}, {-1, 1}}, kBox);
    CHECK(hausdorff(A, B) == doctest::Approx(0.5).epsilon(0.15));
    CHECK(hausdorff(A, A) == 0);
}

TEST_CASE("L_p set sums match the polygon sum") {
    auto rng = std::mt19937_64(11);
    for (double p : {1.0, 2.0, 3.0}) {
        auto K = random_polygon(rng, 0.8, 1.8), L = random_polygon(rng, 0.8, 1.8);
        auto P = lp_polygon_sum(K, L, p, 0.5, 0.5);
        GridSet S = lp_minkowski_sets(polygon_mask(K, kBox), polygon_mask(L, kBox), p, 0.5, 0.5);
        INFO("p=" << p);
        CHECK(symmetric_difference_volume(S, polygon_mask(P, kBox)) <= 3 * kBox.spacing(0) * polygon_perimeter(P));
    }
}

TEST_CASE("0 < p < 1 routes coincide") {
    auto rng = std::mt19937_64(5);
    for (double p : {0.3, 0.5, 0.7}) {
        auto K = random_polygon(rng, 1, 2), L = random_polygon(rng, 1, 2);
        auto rep = check_coincide(K, L, p, kBox, 0.5, 0.5);
        INFO("p=" << p << " hausdorff=" << rep.trials.back().rhs);
        CHECK(rep.passed());
    }
    GridSet off = polygon_mask({{1, 1}, {2, 1}, {2, 2}, {1, 2}}, kBox);
    CHECK_THROWS_AS(lp_minkowski_sets_sub1(off, off, 0.5, 1, 1), DomainError);
}
