#pragma once

// Shared helpers for projections: sampling lattices along H-perp and per-node evaluation on H grids.

#include <algorithm>
#include <cmath>

#include "lpsum/quermass.hpp"

namespace lps::detail {

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline bool is_identity(const Subspace& H) {
    if (H.k != H.n) return false;
    for (int c = 0; c < H.k; ++c)
        for (int a = 0; a < 3; ++a)
            if (H.frame[c][a] != (a == c ? 1.0 : 0.0)) return false;
    return true;
}

// Lattice parameters w = m h along the perp directions, clipped to the box of f.
struct PerpLattice {
    int m = 0;          // perp dimension
    double h = 1;
    int half = 0;       // m index range [-half, half]
};

inline PerpLattice perp_lattice(const GridFn& f, const Subspace& H) {
    PerpLattice L;
    L.m = H.n - H.k;
    L.h = f.spacing[0];
    double R2 = 0;
    for (int a = 0; a < f.dim; ++a) {
        L.h = std::min(L.h, f.spacing[a]);
        double e = std::max(std::fabs(f.origin[a]), std::fabs(f.coord(a, f.shape[a] - 1)));
        R2 += e * e;
    }
    L.half = (int)std::ceil(std::sqrt(R2) / L.h);
    return L;
}

// Parameter interval of x + w d that stays inside the box of f (with a small allowance).
inline bool clip_line(const GridFn& f, const Vec3& x, const Vec3& d, double& lo, double& hi) {
    lo = -kInf;
    hi = kInf;
    for (int a = 0; a < f.dim; ++a) {
        const double b0 = f.origin[a] - 1e-9, b1 = f.coord(a, f.shape[a] - 1) + 1e-9;
        if (std::fabs(d[a]) < 1e-15) {
            if (x[a] < b0 || x[a] > b1) return false;
            continue;
        }
        double t0 = (b0 - x[a]) / d[a], t1 = (b1 - x[a]) / d[a];
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
    }
    return lo <= hi;
}

// Sup (or inf) of grid_eval(f, x + perp lattice) with the last perp coordinate clipped to the box.
template <class Better, class Eval>
double lattice_extremum(const GridFn& f, const Subspace& H, const PerpLattice& L, const Vec3& x, double init,
                        Better better, Eval eval) {
    double best = init;
    auto scan_last = [&](const Vec3& base) {
        const Vec3& d = H.perp[L.m - 1];
        double lo, hi;
        if (!clip_line(f, base, d, lo, hi)) return;
        int m0 = (int)std::ceil(lo / L.h), m1 = (int)std::floor(hi / L.h);
        for (int m = m0; m <= m1; ++m) {
            const double w = m * L.h;
            double v = eval(Vec3{base[0] + w * d[0], base[1] + w * d[1], base[2] + w * d[2]});
            if (better(v, best)) best = v;
        }
    };
    if (L.m == 0) return eval(x);
    if (L.m == 1) {
        scan_last(x);
    } else {
        const Vec3& d0 = H.perp[0];
        for (int m = -L.half; m <= L.half; ++m) {
            const double w = m * L.h;
            scan_last({x[0] + w * d0[0], x[1] + w * d0[1], x[2] + w * d0[2]});
        }
    }
    return best;
}

template <class Fn>
GridFn on_subspace_grid(const GridFn& f, const Subspace& H, Kind kind, Fn fn) {
    GridFn out(subspace_box(f, H), kind);
    const long long n = (long long)out.size();
#pragma omp parallel for schedule(dynamic, 16) if (threads() > 1)
    for (long long i = 0; i < n; ++i) {
        auto z = out.node((std::size_t)i);
        out[(std::size_t)i] = fn(H.embed(z));
    }
    return out;
}

// Mean and standard error of per-subspace samples.
inline McEstimate mc_finish(std::vector<double> samples) {
    McEstimate e;
    e.samples = std::move(samples);
    const double m = (double)e.samples.size();
    double mean = 0;
    for (double v : e.samples) mean += v;
    mean /= m;
    double var = 0;
    for (double v : e.samples) var += (v - mean) * (v - mean);
    e.value = mean;
    e.stderr_ = m > 1 ? std::sqrt(var / (m - 1) / m) : 0.0;
    return e;
}

}  // namespace lps::detail
