#include "lpsum/core.hpp"

#include <algorithm>
#include <numeric>

#include <omp.h>

namespace lps {

namespace {
int g_threads = 1;
}

void set_threads(int n) {
    g_threads = std::max(1, n);
    omp_set_num_threads(g_threads);
}
int threads() { return g_threads; }

Box Box::cube(int dim, double lo, double hi, int n) {
    Box b;
    b.dim = dim;
    for (int a = 0; a < 3; ++a) {
        b.lo[a] = a < dim ? lo : 0.0;
        b.hi[a] = a < dim ? hi : 0.0;
        b.n[a] = a < dim ? n : 1;
    }
    return b;
}

Box default_box(int dim) {
    switch (dim) {
        case 1: return Box::cube(1, -8, 8, 1025);
        case 2: return Box::cube(2, -4, 4, 257);
        case 3: return Box::cube(3, -3, 3, 65);
    }
    throw UsageError("dim must be 1, 2 or 3");
}

GridFn::GridFn(const Box& b, Kind k, double fillv) : dim(b.dim), kind(k) {
    if (dim < 1 || dim > 3) throw UsageError("dim must be 1, 2 or 3");
    std::size_t total = 1;
    for (int a = 0; a < 3; ++a) {
        if (a < dim) {
            if (b.n[a] < 2) throw UsageError("grid shape must be >= 2 per axis");
            origin[a] = b.lo[a];
            spacing[a] = b.spacing(a);
            if (!(spacing[a] > 0)) throw UsageError("grid spacing must be positive");
            shape[a] = b.n[a];
        } else {
            origin[a] = 0;
            spacing[a] = 1;
            shape[a] = 1;
        }
        total *= shape[a];
    }
    values.assign(total, fillv);
}

Box GridFn::box() const {
    Box b;
    b.dim = dim;
    for (int a = 0; a < 3; ++a) {
        b.lo[a] = origin[a];
        b.hi[a] = a < dim ? origin[a] + spacing[a] * (shape[a] - 1) : origin[a];
        b.n[a] = shape[a];
    }
    return b;
}

std::array<int, 3> GridFn::unravel(std::size_t idx) const {
    std::array<int, 3> ijk{0, 0, 0};
    ijk[2] = static_cast<int>(idx % shape[2]);
    idx /= shape[2];
    ijk[1] = static_cast<int>(idx % shape[1]);
    ijk[0] = static_cast<int>(idx / shape[1]);
    return ijk;
}

std::size_t GridFn::ravel(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * shape[1] + j) * shape[2] + k;
}

std::array<double, 3> GridFn::node(std::size_t idx) const {
    auto ijk = unravel(idx);
    std::array<double, 3> x{0, 0, 0};
    for (int a = 0; a < dim; ++a) x[a] = coord(a, ijk[a]);
    return x;
}

std::size_t GridFn::nearest_origin_index() const {
    std::array<int, 3> ijk{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
        long r = std::lround(-origin[a] / spacing[a]);
        ijk[a] = static_cast<int>(std::clamp<long>(r, 0, shape[a] - 1));
    }
    return ravel(ijk[0], ijk[1], ijk[2]);
}

double GridFn::cell_volume() const {
    double v = 1;
    for (int a = 0; a < dim; ++a) v *= spacing[a];
    return v;
}

void GridFn::validate() const {
    std::size_t total = 1;
    for (int a = 0; a < 3; ++a) {
        if (a < dim && shape[a] < 2) throw UsageError("grid shape must be >= 2 per axis");
        if (a < dim && !(spacing[a] > 0)) throw UsageError("grid spacing must be positive");
        total *= shape[a];
    }
    if (total != values.size()) throw UsageError("grid values length does not match shape");
    bool any_finite = false;
    for (double v : values) {
        if (std::isnan(v) || v == -kInf) throw DomainError("grid value is NaN or -inf");
        if (kind == Kind::density && (is_inf(v) || v < 0)) throw DomainError("density values must be finite and >= 0");
        if (!is_inf(v)) any_finite = true;
    }
    if (!any_finite) throw DomainError("grid function is identically +inf");
}

double ms_mean(const MeanParams& m, double a, double b) {
    if (a * b <= 0) return 0.0;
    const double s = m.s;
    if (s == kInf) return std::max(a, b);
    if (s == -kInf) return std::min(a, b);
    if (m.alpha == 0) return s_is_zero(s) ? std::pow(b, m.beta) : std::pow(m.beta * std::pow(b, s), 1.0 / s);
    if (m.beta == 0) return s_is_zero(s) ? std::pow(a, m.alpha) : std::pow(m.alpha * std::pow(a, s), 1.0 / s);
    if (s_is_zero(s)) return std::exp(m.alpha * std::log(a) + m.beta * std::log(b));
    return std::pow(m.alpha * std::pow(a, s) + m.beta * std::pow(b, s), 1.0 / s);
}

LpCoeffs lp_coeffs(double p, double t, double lambda) {
    if (p == 0) throw UsageError("p must be nonzero");
    if (t < 0 || t > 1 || lambda < 0 || lambda > 1) throw UsageError("t and lambda must lie in [0,1]");
    LpCoeffs c;
    c.p = p;
    c.t = t;
    c.lambda = lambda;
    const double iq = inv_q(p);
    c.q = iq == 0 ? kInf : 1.0 / iq;
    if (iq < 0 && (lambda == 0 || lambda == 1))
        throw DomainError("lambda endpoints are singular for 0<p<1");
    auto prod = [](double x, double y) { return (x == 0 || y == 0) ? 0.0 : x * y; };
    c.C = prod(std::pow(1 - t, 1 / p), std::pow(1 - lambda, iq));
    c.D = prod(std::pow(t, 1 / p), std::pow(lambda, iq));
    return c;
}

double extremal_coeff_combination(double p, double t, double a, double b, Extremum mode) {
    const bool ok = mode == Extremum::sup ? (p >= 1 || p < 0) : (p > 0 && p < 1);
    if (!ok) throw UsageError("extremum mode does not match the p regime");
    const double sign = mode == Extremum::sup ? 1.0 : -1.0;
    // Open interval for 0<p<1, where the endpoint coefficients blow up.
    const double lo = p > 0 && p < 1 ? 1e-12 : 0.0, hi = 1.0 - lo;
    auto F = [&](double lam) {
        auto c = lp_coeffs(p, t, lam);
        double v = 0;
        if (c.C != 0) v += c.C * a;
        if (c.D != 0) v += c.D * b;
        return sign * v;
    };
    constexpr int kScan = 129;
    int best = 0;
    double bestv = -kInf;
    for (int i = 0; i < kScan; ++i) {
        double lam = lo + (hi - lo) * i / (kScan - 1);
        double v = F(lam);
        if (v > bestv) { bestv = v; best = i; }
    }
    double cl = lo + (hi - lo) * std::max(0, best - 1) / (kScan - 1);
    double ch = lo + (hi - lo) * std::min(kScan - 1, best + 1) / (kScan - 1);
    double v = golden_max(F, cl, ch, nullptr, 200);
    return sign * std::max(v, bestv);
}

double total_mass(const GridFn& f) {
    if (f.kind != Kind::density) throw UsageError("total_mass needs a density");
    // Trapezoid weights factor per axis; summed in fixed row-major order.
    double sum = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto ijk = f.unravel(i);
        double w = 1;
        for (int a = 0; a < f.dim; ++a)
            if (ijk[a] == 0 || ijk[a] == f.shape[a] - 1) w *= 0.5;
        sum += w * f[i];
    }
    return sum * f.cell_volume();
}

double grid_eval(const GridFn& f, const std::array<double, 3>& x) {
    const double outside = f.kind == Kind::base ? kInf : 0.0;
    int i0[3] = {0, 0, 0};
    double fr[3] = {0, 0, 0};
    for (int a = 0; a < f.dim; ++a) {
        double r = (x[a] - f.origin[a]) / f.spacing[a];
        const double last = f.shape[a] - 1;
        if (r < -1e-9 || r > last + 1e-9) return outside;
        r = std::clamp(r, 0.0, last);
        int i = static_cast<int>(std::floor(r));
        if (i >= f.shape[a] - 1) i = f.shape[a] - 2;
        i0[a] = i;
        fr[a] = r - i;
        if (fr[a] < 1e-12) fr[a] = 0;
        if (fr[a] > 1 - 1e-12) { fr[a] = 0; i0[a] = i + 1; }
    }
    double acc = 0;
    const int corners = 1 << f.dim;
    for (int c = 0; c < corners; ++c) {
        double w = 1;
        int ijk[3] = {0, 0, 0};
        for (int a = 0; a < f.dim; ++a) {
            int bit = (c >> a) & 1;
            w *= bit ? fr[a] : 1 - fr[a];
            ijk[a] = i0[a] + bit;
        }
        if (w == 0) continue;
        double v = f[f.ravel(ijk[0], ijk[1], ijk[2])];
        if (is_inf(v)) return kInf;
        acc += w * v;
    }
    return acc;
}

GridFn resample(const GridFn& f, const Box& b) {
    GridFn out(b, f.kind);
    out.meta = f.meta;
    if (out.box().lo == f.box().lo && out.box().hi == f.box().hi && out.shape == f.shape) {
        out.values = f.values;
        return out;
    }
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = grid_eval(f, out.node(i));
    return out;
}

double omega_s(double s, double r) {
    if (is_inf(r)) return 0.0;
    if (s_is_zero(s)) return std::exp(-r);
    double b = 1 - s * r;
    if (b <= 0) return 0.0;
    return std::pow(b, 1 / s);
}

double omega_s_prime(double s, double r) {
    if (is_inf(r)) return 0.0;
    if (s_is_zero(s)) return -std::exp(-r);
    double b = 1 - s * r;
    if (b <= 0) return 0.0;
    return -std::pow(b, 1 / s - 1);
}

double omega_s_inv(double s, double f) {
    if (f <= 0) return kInf;
    if (s_is_zero(s)) return -std::log(f);
    return (1 - std::pow(f, s)) / s;
}

GridFn SConcaveFn::density() const {
    GridFn f = base;
    f.kind = Kind::density;
    for (double& v : f.values) v = amplitude * omega_s(s, v);
    f.meta["s"] = s;
    return f;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace lps
