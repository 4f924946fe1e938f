#include "lpsum/sets.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "lpsum/convolve.hpp"

namespace lps {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

void require_2d(const GridFn& A, const char* what) {
    if (A.dim > 2) throw UsageError(std::string(what) + " supports 1-D and 2-D masks");
}

// Runs of ones per row, as node index ranges [lo, hi].
using Runs = std::vector<std::vector<std::pair<int, int>>>;

Runs row_runs(const GridSet& A) {
    const int nx = A.shape[0], ny = A.dim > 1 ? A.shape[1] : 1;
    Runs r(ny);
    for (int j = 0; j < ny; ++j) {
        int i = 0;
        while (i < nx) {
            if (A[A.ravel(i, j)] > 0.5) {
                int k = i;
                while (k + 1 < nx && A[A.ravel(k + 1, j)] > 0.5) ++k;
                r[j].push_back({i, k});
                i = k + 1;
            } else {
                ++i;
            }
        }
    }
    return r;
}

bool same_grid(const GridFn& a, const GridFn& b) {
    return a.dim == b.dim && a.shape == b.shape && a.origin == b.origin && a.spacing == b.spacing;
}

std::vector<std::array<double, 3>> boundary_nodes(const GridSet& A) {
    std::vector<std::array<double, 3>> out;
    for (std::size_t i = 0; i < A.size(); ++i) {
        if (A[i] < 0.5) continue;
        auto ijk = A.unravel(i);
        bool edge = false;
        for (int a = 0; a < A.dim && !edge; ++a)
            for (int d : {-1, 1}) {
                auto nb = ijk;
                nb[a] += d;
                if (nb[a] < 0 || nb[a] >= A.shape[a] || A[A.ravel(nb[0], nb[1], nb[2])] < 0.5) {
                    edge = true;
                    break;
                }
            }
        if (edge) out.push_back(A.node(i));
    }
    return out;
}

double directed(const std::vector<std::array<double, 3>>& a, const std::vector<std::array<double, 3>>& b) {
    double worst = 0;
    for (const auto& x : a) {
        double best = kInf;
        for (const auto& y : b) {
            double d = 0;
            for (int k = 0; k < 3; ++k) d += (x[k] - y[k]) * (x[k] - y[k]);
            best = std::min(best, d);
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

}  // namespace

SupportFn SupportFn::circle_grid(int count) {
    SupportFn s;
    s.dim = 2;
    for (int i = 0; i < count; ++i) {
        double a = 2 * std::numbers::pi * i / count;
        s.dirs.push_back({std::cos(a), std::sin(a), 0});
    }
    s.h.assign(count, 1.0);
    return s;
}

SupportFn SupportFn::sphere_random(int count, std::uint64_t seed) {
    SupportFn s;
    s.dim = 3;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N;
    for (int i = 0; i < count; ++i) {
        std::array<double, 3> v{N(rng), N(rng), N(rng)};
        double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        s.dirs.push_back({v[0] / r, v[1] / r, v[2] / r});
    }
    s.h.assign(count, 1.0);
    return s;
}

std::string SupportFn::to_table() const {
    std::ostringstream out;
    char buf[128];
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        if (dim == 2)
            std::snprintf(buf, sizeof buf, "%.17g %.17g\n", std::atan2(dirs[i][1], dirs[i][0]), h[i]);
        else
            std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", dirs[i][0], dirs[i][1], dirs[i][2], h[i]);
        out << buf;
    }
    return out.str();
}

SupportFn SupportFn::from_table(const std::string& text) {
    SupportFn s;
    std::istringstream in(text);
    std::string line;
    int cols = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<double> v;
        double x;
        while (ls >> x) v.push_back(x);
        if (cols == 0) cols = (int)v.size();
        if ((int)v.size() != cols || (cols != 2 && cols != 4)) throw UsageError("malformed support table row: " + line);
        if (cols == 2) {
            s.dim = 2;
            s.dirs.push_back({std::cos(v[0]), std::sin(v[0]), 0});
            s.h.push_back(v[1]);
        } else {
            s.dim = 3;
            s.dirs.push_back({v[0], v[1], v[2]});
            s.h.push_back(v[3]);
        }
    }
    if (s.dirs.empty()) throw UsageError("empty support table");
    return s;
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point2> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

double polygon_area(const std::vector<Point2>& poly) {
    double a = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % poly.size()];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * std::fabs(a);
}

double polygon_perimeter(const std::vector<Point2>& poly) {
    double l = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % poly.size()];
        l += std::hypot(q[0] - p[0], q[1] - p[1]);
    }
    return l;
}

bool polygon_contains(const std::vector<Point2>& poly, const Point2& x, double tol) {
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (cross(poly[i], poly[(i + 1) % poly.size()], x) < -tol) return false;
    return true;
}

std::vector<Point2> random_polygon(std::mt19937_64& rng, double rmin, double rmax, int vertices) {
    if (vertices < 4) throw UsageError("random_polygon needs at least 4 vertices");
    std::uniform_real_distribution<double> J(-0.3, 0.3), R(rmin, rmax), O(0, 1);
    const double off = O(rng);
    std::vector<Point2> pts;
    for (int i = 0; i < vertices; ++i) {
        double a = 2 * std::numbers::pi * (i + off + J(rng)) / vertices;
        double r = R(rng);
        pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    return convex_hull(pts);
}

SupportFn support_of_polytope(const std::vector<Point2>& vertices, const SupportFn& dirs) {
    auto hull = convex_hull(vertices);
    if (hull.size() < 3 || polygon_area(hull) < 1e-14) throw DomainError("degenerate polytope");
    SupportFn s = dirs;
    for (std::size_t i = 0; i < s.dirs.size(); ++i) {
        double m = -kInf;
        for (const auto& v : hull) m = std::max(m, s.dirs[i][0] * v[0] + s.dirs[i][1] * v[1]);
        s.h[i] = m;
    }
    return s;
}

SupportFn support_of_polytope(const std::vector<Point2>& vertices, int directions) {
    return support_of_polytope(vertices, SupportFn::circle_grid(directions));
}

SupportFn firey_sum_bodies(const SupportFn& K, const SupportFn& L, double p, double alpha, double beta) {
    if (K.dirs.size() != L.dirs.size()) throw UsageError("support functions on different direction sets");
    if (!(p > 0)) throw UsageError("firey_sum_bodies needs p > 0");
    SupportFn s = K;
    for (std::size_t i = 0; i < s.h.size(); ++i) {
        if (!(K.h[i] > 0 && L.h[i] > 0)) throw DomainError("support function must be positive");
        s.h[i] = std::pow(alpha * std::pow(K.h[i], p) + beta * std::pow(L.h[i], p), 1 / p);
    }
    return s;
}

std::vector<Point2> wulff_polygon(const SupportFn& h) {
    if (h.dim != 2) throw UsageError("wulff_polygon is 2-D");
    double R = 0;
    for (double v : h.h) {
        if (!(v > 0)) throw DomainError("support values must be positive");
        R = std::max(R, v);
    }
    R *= 4;
    std::vector<Point2> poly{{-R, -R}, {R, -R}, {R, R}, {-R, R}};
    for (std::size_t k = 0; k < h.dirs.size(); ++k) {
        const double ux = h.dirs[k][0], uy = h.dirs[k][1], c = h.h[k];
        std::vector<Point2> next;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Point2& a = poly[i];
            const Point2& b = poly[(i + 1) % poly.size()];
            double da = ux * a[0] + uy * a[1] - c, db = ux * b[0] + uy * b[1] - c;
            if (da <= 0) next.push_back(a);
            if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
                double t = da / (da - db);
                next.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
            }
        }
        poly.swap(next);
    }
    return poly;
}

GridSet polygon_mask(const std::vector<Point2>& poly, const Box& b) {
    if (b.dim != 2) throw UsageError("polygon_mask is 2-D");
    GridSet m(b, Kind::density);
    m.fill([&](auto x) { return polygon_contains(poly, {x[0], x[1]}, 1e-12) ? 1.0 : 0.0; });
    return m;
}

GridSet wulff_shape(const SupportFn& h, const Box& b) {
    if (h.dim == 2 && b.dim == 2) return polygon_mask(wulff_polygon(h), b);
    if (h.dim != b.dim) throw UsageError("support function and box dimensions differ");
    GridSet m(b, Kind::density);
    m.fill([&](auto x) {
        for (std::size_t k = 0; k < h.dirs.size(); ++k) {
            double d = 0;
            for (int a = 0; a < h.dim; ++a) d += h.dirs[k][a] * x[a];
            if (d > h.h[k] + 1e-12) return 0.0;
        }
        return 1.0;
    });
    return m;
}

std::vector<Point2> lp_polygon_sum(const std::vector<Point2>& K, const std::vector<Point2>& L, double p, double alpha,
                                   double beta, int directions) {
    auto dirs = SupportFn::circle_grid(directions);
    return wulff_polygon(firey_sum_bodies(support_of_polytope(K, dirs), support_of_polytope(L, dirs), p, alpha, beta));
}

double lp_mixed_area(const std::vector<Point2>& K, const std::vector<Point2>& L, double p, double eps) {
    if (p < 1) throw UsageError("L_p mixed area needs p >= 1");
    if (!(eps > 0)) throw UsageError("eps must be positive");
    const double a0 = polygon_area(lp_polygon_sum(K, L, p, 1, 0));
    auto quot = [&](double e) { return (polygon_area(lp_polygon_sum(K, L, p, 1, e)) - a0) / e; };
    // quotients at e, e/2, e/4 are linear in e to leading order; two Richardson levels
    const double d1 = quot(eps), d2 = quot(eps / 2), d3 = quot(eps / 4);
    const double r1 = 2 * d2 - d1, r2 = 2 * d3 - d2;
    return 0.5 * p * ((4 * r2 - r1) / 3);
}

double mask_volume(const GridSet& A) {
    double n = 0;
    for (double v : A.values) n += v > 0.5 ? 1 : 0;
    return n * A.cell_volume();
}

GridSet mask_dilate(const GridSet& A, double c) {
    if (!(c > 0)) throw UsageError("mask_dilate needs c > 0");
    GridSet r = A;
    for (std::size_t i = 0; i < r.size(); ++i) {
        auto x = A.node(i);
        std::array<int, 3> ijk{0, 0, 0};
        bool inside = true;
        for (int a = 0; a < A.dim; ++a) {
            ijk[a] = (int)std::lround((x[a] / c - A.origin[a]) / A.spacing[a]);
            if (ijk[a] < 0 || ijk[a] >= A.shape[a]) inside = false;
        }
        r[i] = inside ? A[A.ravel(ijk[0], ijk[1], ijk[2])] : 0.0;
    }
    return r;
}

GridSet minkowski_sum(const GridSet& A, const GridSet& B, double a, double b) {
    require_2d(A, "minkowski_sum");
    if (A.dim != B.dim) throw UsageError("mask dimensions differ");
    if (!(a >= 0 && b >= 0)) throw UsageError("minkowski_sum needs nonnegative weights");
    GridSet out(A.box(), Kind::density);
    const Runs ra = row_runs(A), rb = row_runs(B);
    const int nyo = A.dim > 1 ? A.shape[1] : 1;
    const double ho = A.spacing[0];
    auto mark = [&](int jo, double lo, double hi) {
        int i0 = std::max(0, (int)std::ceil((lo - out.origin[0]) / ho - 1e-9));
        int i1 = std::min(out.shape[0] - 1, (int)std::floor((hi - out.origin[0]) / ho + 1e-9));
        for (int i = i0; i <= i1; ++i) out[out.ravel(i, jo)] = 1.0;
    };
    if (a == 0 || b == 0) {
        // a single scaled copy: sum with the degenerate set {0}
        const GridSet& S = a == 0 ? B : A;
        const double c = a == 0 ? b : a;
        bool any = false;
        for (double v : S.values) any |= v > 0.5;
        if (!any) throw UsageError("empty mask");
        if (c == 0) {
            out[out.nearest_origin_index()] = 1.0;
            return out;
        }
        GridSet res(A.box(), Kind::density);
        for (std::size_t i = 0; i < res.size(); ++i) {
            auto x = res.node(i);
            for (int k = 0; k < 3; ++k) x[k] /= c;
            std::array<int, 3> ijk{0, 0, 0};
            bool inside = true;
            for (int k = 0; k < S.dim; ++k) {
                ijk[k] = (int)std::lround((x[k] - S.origin[k]) / S.spacing[k]);
                if (ijk[k] < 0 || ijk[k] >= S.shape[k]) inside = false;
            }
            res[i] = inside ? S[S.ravel(ijk[0], ijk[1], ijk[2])] : 0.0;
        }
        return res;
    }
    bool anyA = false, anyB = false;
    for (auto& r : ra) anyA |= !r.empty();
    for (auto& r : rb) anyB |= !r.empty();
    if (!anyA || !anyB) throw UsageError("empty mask");
    auto pair_rows = [&](int jo, int ja, int jb) {
        for (const auto& sa : ra[ja])
            for (const auto& sb : rb[jb])
                mark(jo, a * A.coord(0, sa.first) + b * B.coord(0, sb.first),
                     a * A.coord(0, sa.second) + b * B.coord(0, sb.second));
    };
    for (int jo = 0; jo < nyo; ++jo) {
        if (A.dim == 1) {
            pair_rows(jo, 0, 0);
            continue;
        }
        const double zy = out.coord(1, jo);
        // walk the rows of both sets; a scaled copy with coarse rows would otherwise leave gaps
        for (std::size_t jb = 0; jb < rb.size(); ++jb) {
            if (rb[jb].empty()) continue;
            const int ja = (int)std::lround(((zy - b * B.coord(1, (int)jb)) / a - A.origin[1]) / A.spacing[1]);
            if (ja >= 0 && ja < (int)ra.size()) pair_rows(jo, ja, (int)jb);
        }
        for (std::size_t ja = 0; ja < ra.size(); ++ja) {
            if (ra[ja].empty()) continue;
            const int jb = (int)std::lround(((zy - a * A.coord(1, (int)ja)) / b - B.origin[1]) / B.spacing[1]);
            if (jb >= 0 && jb < (int)rb.size()) pair_rows(jo, (int)ja, jb);
        }
    }
    return out;
}

GridSet mask_union(const GridSet& A, const GridSet& B) {
    if (!same_grid(A, B)) throw UsageError("masks on different grids");
    GridSet r = A;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (A[i] > 0.5 || B[i] > 0.5) ? 1.0 : 0.0;
    return r;
}

GridSet mask_intersection(const GridSet& A, const GridSet& B) {
    if (!same_grid(A, B)) throw UsageError("masks on different grids");
    GridSet r = A;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (A[i] > 0.5 && B[i] > 0.5) ? 1.0 : 0.0;
    return r;
}

double symmetric_difference_volume(const GridSet& A, const GridSet& B) {
    if (!same_grid(A, B)) throw UsageError("masks on different grids");
    double n = 0;
    for (std::size_t i = 0; i < A.size(); ++i) n += ((A[i] > 0.5) != (B[i] > 0.5)) ? 1 : 0;
    return n * A.cell_volume();
}

double hausdorff(const GridSet& A, const GridSet& B) {
    auto a = boundary_nodes(A), b = boundary_nodes(B);
    if (a.empty() || b.empty()) return kInf;
    return std::max(directed(a, b), directed(b, a));
}

bool origin_interior(const GridSet& A) {
    auto c = A.unravel(A.nearest_origin_index());
    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = (A.dim > 1 ? -1 : 0); dy <= (A.dim > 1 ? 1 : 0); ++dy)
            for (int dz = (A.dim > 2 ? -1 : 0); dz <= (A.dim > 2 ? 1 : 0); ++dz) {
                int i = c[0] + dx, j = c[1] + dy, k = c[2] + dz;
                if (i < 0 || j < 0 || k < 0 || i >= A.shape[0] || j >= A.shape[1] || k >= A.shape[2]) return false;
                if (A[A.ravel(i, j, k)] < 0.5) return false;
            }
    return true;
}

GridSet lp_minkowski_sets(const GridSet& A, const GridSet& B, double p, double alpha, double beta,
                          int lambda_samples) {
    if (p < 1) throw UsageError("lp_minkowski_sets needs p >= 1");
    if (p == 1) return minkowski_sum(A, B, alpha, beta);
    std::vector<double> lams = lambda_grid(lambda_samples);
    lams.insert(lams.begin(), 0.0);
    lams.push_back(1.0);
    GridSet r = minkowski_sum(A, B, std::pow(alpha, 1 / p), 0);
    for (double l : lams) {
        auto [a, b] = lambda_weights(p, alpha, beta, l);
        r = mask_union(r, minkowski_sum(A, B, a, b));
    }
    return r;
}

GridSet lp_minkowski_sets_sub1(const GridSet& A, const GridSet& B, double p, double alpha, double beta,
                               int lambda_samples) {
    if (!(p > 0 && p < 1)) throw UsageError("lp_minkowski_sets_sub1 needs 0 < p < 1");
    if (!origin_interior(A) || !origin_interior(B)) throw DomainError("origin must be interior to both sets");
    GridSet r;
    bool first = true;
    for (double l : lambda_grid(lambda_samples)) {
        auto [a, b] = lambda_weights(p, alpha, beta, l);
        GridSet s = minkowski_sum(A, B, a, b);
        r = first ? s : mask_intersection(r, s);
        first = false;
    }
    return r;
}

VerificationReport check_coincide(const std::vector<Point2>& K, const std::vector<Point2>& L, double p,
                                  const Box& b, double alpha, double beta, int lambda_samples) {
    VerificationReport rep;
    rep.suite = "coincide";
    auto dirs = SupportFn::circle_grid(720);
    GridSet wulff = wulff_shape(firey_sum_bodies(support_of_polytope(K, dirs), support_of_polytope(L, dirs), p, alpha,
                                                 beta),
                                b);
    GridSet inter = lp_minkowski_sets_sub1(polygon_mask(K, b), polygon_mask(L, b), p, alpha, beta, lambda_samples);
    const double diag = std::hypot(b.spacing(0), b.spacing(1));
    const double d = hausdorff(wulff, inter);
    char buf[96];
    std::snprintf(buf, sizeof buf, "p=%g alpha=%g beta=%g", p, alpha, beta);
    rep.add(0, buf, 2 * diag, d);
    rep.notes.push_back("lhs = 2 cell diagonals, rhs = Hausdorff distance");
    return rep;
}

}  // namespace lps
