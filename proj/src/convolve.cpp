#include "lpsum/convolve.hpp"

#include <algorithm>

#include "lpsum/legendre.hpp"

namespace lps {

std::vector<double> lambda_grid(int n) {
    if (n < 3) throw UsageError("lambda_samples must be >= 3");
    std::vector<double> l(n);
    const double lo = 1.0 / 128, hi = 1 - lo;
    for (int i = 0; i < n; ++i) l[i] = lo + (hi - lo) * i / (n - 1);
    return l;
}

std::pair<double, double> lambda_weights(double p, double alpha, double beta, double lambda) {
    const double iq = inv_q(p);
    double a = alpha > 0 ? std::pow(alpha, 1 / p) * std::pow(1 - lambda, iq) : 0.0;
    double b = beta > 0 ? std::pow(beta, 1 / p) * std::pow(lambda, iq) : 0.0;
    return {a, b};
}

GridFn scale_s(double alpha, const GridFn& f, double s) {
    if (!(alpha > 0)) throw UsageError("scale_s needs alpha > 0");
    GridFn out = f;
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto x = f.node(i);
        for (int a = 0; a < f.dim; ++a) x[a] /= alpha;
        double v = alpha == 1 ? f[i] : grid_eval(f, x);
        if (s == kInf || s == -kInf) out[i] = v;
        else if (s_is_zero(s)) out[i] = v > 0 ? std::pow(v, alpha) : 0.0;
        else out[i] = std::pow(alpha, 1 / s) * v;
    }
    return out;
}

GridFn scale_ps(double alpha, const GridFn& f, double p, double s, S0Route route) {
    if (alpha < 0) throw UsageError("scale_ps needs alpha >= 0");
    if (alpha == 0) {
        GridFn out(f.box(), Kind::density);
        out[out.nearest_origin_index()] = 1;
        return out;
    }
    const double r = std::pow(alpha, 1 / p);
    if (s_is_zero(s) && route == S0Route::literal) return scale_s(r, f, kInf);
    return scale_s(r, f, s);
}

namespace {

struct Support {
    std::vector<std::array<double, 3>> x;
    std::vector<double> v;
};

Support positive_nodes(const GridFn& f) {
    Support s;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] > 0) {
            s.x.push_back(f.node(i));
            s.v.push_back(f[i]);
        }
    return s;
}

double fmax(const GridFn& f) { return *std::max_element(f.values.begin(), f.values.end()); }

double weighted_at(const GridFn& f, const Support& pf, const GridFn& g, const Support& pg, double s, double a,
                   double b, const std::array<double, 3>& z) {
    const MeanParams m{s, a, b};
    const int dim = f.dim;
    double best = 0;
    if (a <= 0 && b <= 0) return 0;
    if (b <= 0) {
        std::array<double, 3> x = z;
        for (int k = 0; k < dim; ++k) x[k] /= a;
        return ms_mean(m, grid_eval(f, x), fmax(g));
    }
    if (a <= 0) {
        std::array<double, 3> y = z;
        for (int k = 0; k < dim; ++k) y[k] /= b;
        return ms_mean(m, fmax(f), grid_eval(g, y));
    }
    std::array<double, 3> q{0, 0, 0};
    for (std::size_t i = 0; i < pf.v.size(); ++i) {
        for (int k = 0; k < dim; ++k) q[k] = (z[k] - a * pf.x[i][k]) / b;
        double gv = grid_eval(g, q);
        if (gv > 0) best = std::max(best, ms_mean(m, pf.v[i], gv));
    }
    for (std::size_t i = 0; i < pg.v.size(); ++i) {
        for (int k = 0; k < dim; ++k) q[k] = (z[k] - b * pg.x[i][k]) / a;
        double fv = grid_eval(f, q);
        if (fv > 0) best = std::max(best, ms_mean(m, fv, pg.v[i]));
    }
    return best;
}

GridFn weighted_grid(const GridFn& f, const Support& pf, const GridFn& g, const Support& pg, double s, double a,
                     double b, const Box& out, bool parallel) {
    GridFn h(out, Kind::density);
    const long n = (long)h.size();
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (long i = 0; i < n; ++i) h[i] = weighted_at(f, pf, g, pg, s, a, b, h.node(i));
    return h;
}

void check_dims(const GridFn& f, const GridFn& g) {
    if (f.dim != g.dim) throw UsageError("inputs have different dimensions");
    if (f.kind != Kind::density || g.kind != Kind::density) throw UsageError("convolution inputs must be densities");
}

void check_origin_interior(const GridFn& f) {
    auto o = f.nearest_origin_index();
    auto ijk = f.unravel(o);
    if (!(f[o] > 0)) throw DomainError("origin is not interior to the support");
    for (int a = 0; a < f.dim; ++a)
        for (int d : {-1, 1}) {
            auto q = ijk;
            q[a] += d;
            if (q[a] < 0 || q[a] >= f.shape[a] || !(f[f.ravel(q[0], q[1], q[2])] > 0))
                throw DomainError("origin is not interior to the support");
        }
}

// Generic lambda extremization over density inputs.
GridFn lambda_extremum(const GridFn& f, const GridFn& g, const ConvolveParams& c, LambdaMode mode, bool refine) {
    check_dims(f, g);
    const Box out = c.out ? *c.out : f.box();
    const bool parallel = threads() > 1;
    Support pf = positive_nodes(f), pg = positive_nodes(g);
    if (c.p == 1) {
        return weighted_grid(f, pf, g, pg, c.s, c.alpha, c.beta, out, parallel);
    }
    auto lams = lambda_grid(c.lambda_samples);
    const double sign = mode == LambdaMode::sup ? 1.0 : -1.0;
    GridFn best(out, Kind::density, mode == LambdaMode::sup ? -kInf : kInf);
    std::vector<int> arg(best.size(), 0);
    for (int k = 0; k < (int)lams.size(); ++k) {
        auto [a, b] = lambda_weights(c.p, c.alpha, c.beta, lams[k]);
        GridFn h = weighted_grid(f, pf, g, pg, c.s, a, b, out, parallel);
        for (std::size_t i = 0; i < h.size(); ++i)
            if (sign * h[i] > sign * best[i]) {
                best[i] = h[i];
                arg[i] = k;
            }
    }
    if (refine) {
        const long n = (long)best.size();
        const int last = (int)lams.size() - 1;
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
        for (long i = 0; i < n; ++i) {
            if (mode == LambdaMode::sup && best[i] <= 0) continue;
            auto z = best.node(i);
            auto F = [&](double lam) {
                auto [a, b] = lambda_weights(c.p, c.alpha, c.beta, lam);
                return sign * weighted_at(f, pf, g, pg, c.s, a, b, z);
            };
            double v = golden_max(F, lams[std::max(0, arg[i] - 1)], lams[std::min(last, arg[i] + 1)], nullptr, 40);
            if (v > sign * best[i]) best[i] = sign * v;
        }
    }
    return best;
}

// Base-function data shared by all lambda slices.
struct BasePrep {
    double s = 0;
    GridFn phi, psi;
    Extent eu, ev;
    bool indicators = false;  // both bases 0/inf: the combined base is 0/inf too
};

bool is_indicator_base(const GridFn& u) {
    for (double v : u.values)
        if (!(v == 0 || is_inf(v))) return false;
    return true;
}

GridFn truncated(const GridFn& u, double s) {
    GridFn t = u;
    if (s > 0 && s != kInf)
        for (double& v : t.values)
            if (v > 1 / s) v = kInf;
    return t;
}

BasePrep prepare(const SConcaveFn& f, const SConcaveFn& g) {
    if (f.s != g.s) throw UsageError("inputs carry different s");
    if (f.base.dim != g.base.dim) throw UsageError("inputs have different dimensions");
    if (f.amplitude != 1 || g.amplitude != 1) throw UsageError("base route needs normalized inputs");
    const double s = f.s;
    if (s == -kInf) throw UsageError("base route is undefined at s = -inf");
    if (s == kInf && !(is_indicator_base(f.base) && is_indicator_base(g.base)))
        throw UsageError("base route at s = +inf needs indicator bases");
    BasePrep P;
    P.s = s;
    GridFn u = truncated(f.base, s), v = truncated(g.base, s);
    Box d = dual_box(u, v);
    P.phi = legendre_transform(u, d);
    P.psi = legendre_transform(v, d);
    P.eu = finite_extent(u);
    P.ev = finite_extent(v);
    P.indicators = is_indicator_base(u) && is_indicator_base(v);
    return P;
}

// On a truncated dual box w outside the combined hull is small and positive rather than +inf.
double indicator_w(double w) { return w <= 1e-9 ? 0.0 : kInf; }

double density_from_w(double s, double a, double b, double w) {
    if (is_inf(w)) return 0.0;
    if (s == kInf) return 1.0;
    if (s_is_zero(s)) return std::exp(-w);
    double x = a + b - s * w;
    if (x <= 0) return 0.0;
    return std::pow(x, 1 / s);
}

GridFn base_slice(const BasePrep& P, double a, double b, const Box& out) {
    GridFn m = lp_dual_sum(a, P.phi, b, P.psi, 1);
    GridFn w = legendre_transform(m, out);
    mask_outside(w, lp_extent(a, P.eu, b, P.ev, 1));
    GridFn h(out, Kind::density);
    for (std::size_t i = 0; i < h.size(); ++i)
        h[i] = density_from_w(P.s, a, b, P.indicators ? indicator_w(w[i]) : w[i]);
    return h;
}

double base_at(const BasePrep& P, double a, double b, const std::array<double, 3>& z) {
    Extent e = lp_extent(a, P.eu, b, P.ev, 1);
    for (int k = 0; k < P.phi.dim; ++k) {
        double tol = 1e-12 * (1 + std::fabs(z[k]));
        if (z[k] < e.lo[k] - tol || z[k] > e.hi[k] + tol) return 0.0;
    }
    double best = -kInf;
    for (std::size_t i = 0; i < P.phi.size(); ++i) {
        auto y = P.phi.node(i);
        double v = -(a * P.phi[i] + b * P.psi[i]);
        for (int k = 0; k < P.phi.dim; ++k) v += y[k] * z[k];
        best = std::max(best, v);
    }
    return density_from_w(P.s, a, b, P.indicators ? indicator_w(best) : best);
}

GridFn base_lambda_extremum(const SConcaveFn& f, const SConcaveFn& g, const ConvolveParams& c, LambdaMode mode) {
    if (std::fabs(c.s - f.s) > 1e-15) throw UsageError("params.s differs from the inputs' s");
    BasePrep P = prepare(f, g);
    const Box out = c.out ? *c.out : f.base.box();
    if (c.p == 1) return base_slice(P, c.alpha, c.beta, out);
    auto lams = lambda_grid(c.lambda_samples);
    const double sign = mode == LambdaMode::sup ? 1.0 : -1.0;
    GridFn best(out, Kind::density, mode == LambdaMode::sup ? -kInf : kInf);
    std::vector<int> arg(best.size(), 0);
    for (int k = 0; k < (int)lams.size(); ++k) {
        auto [a, b] = lambda_weights(c.p, c.alpha, c.beta, lams[k]);
        GridFn h = base_slice(P, a, b, out);
        for (std::size_t i = 0; i < h.size(); ++i)
            if (sign * h[i] > sign * best[i]) {
                best[i] = h[i];
                arg[i] = k;
            }
    }
    // Per-node refinement costs one dual sweep per evaluation; done in 1-D only.
    if (c.refine && out.dim == 1) {
        const long n = (long)best.size();
        const int last = (int)lams.size() - 1;
#pragma omp parallel for schedule(dynamic, 8) if (threads() > 1)
        for (long i = 0; i < n; ++i) {
            if (mode == LambdaMode::sup && best[i] <= 0) continue;
            auto z = best.node(i);
            auto F = [&](double lam) {
                auto [a, b] = lambda_weights(c.p, c.alpha, c.beta, lam);
                return sign * base_at(P, a, b, z);
            };
            double v = golden_max(F, lams[std::max(0, arg[i] - 1)], lams[std::min(last, arg[i] + 1)], nullptr, 40);
            if (v > sign * best[i]) best[i] = sign * v;
        }
    }
    return best;
}

}  // namespace

GridFn sup_convolution_s(const GridFn& f, const GridFn& g, double s, double a, double b) {
    return sup_convolution_s(f, g, s, a, b, f.box());
}

GridFn sup_convolution_s(const GridFn& f, const GridFn& g, double s, double a, double b, const Box& out) {
    check_dims(f, g);
    return weighted_grid(f, positive_nodes(f), g, positive_nodes(g), s, a, b, out, threads() > 1);
}

double sup_convolution_at(const GridFn& f, const GridFn& g, double s, double a, double b,
                          const std::array<double, 3>& z) {
    check_dims(f, g);
    return weighted_at(f, positive_nodes(f), g, positive_nodes(g), s, a, b, z);
}

namespace ref {
GridFn sup_convolution_s(const GridFn& f, const GridFn& g, double s, double a, double b, const Box& out) {
    check_dims(f, g);
    return weighted_grid(f, positive_nodes(f), g, positive_nodes(g), s, a, b, out, false);
}
}  // namespace ref

GridFn lps_sup_convolution(const GridFn& f, const GridFn& g, const ConvolveParams& c) {
    if (c.p < 1) throw UsageError("supremal-convolution needs p >= 1");
    return lambda_extremum(f, g, c, LambdaMode::sup, c.refine);
}

GridFn lps_sup_convolution(const SConcaveFn& f, const SConcaveFn& g, const ConvolveParams& c) {
    if (c.p < 1) throw UsageError("supremal-convolution needs p >= 1");
    return base_lambda_extremum(f, g, c, LambdaMode::sup);
}

GridFn lps_infsup_convolution(const GridFn& f, const GridFn& g, const ConvolveParams& c) {
    if (!(c.p > 0 && c.p < 1)) throw UsageError("inf-sup-convolution needs 0 < p < 1");
    check_origin_interior(f);
    check_origin_interior(g);
    return lambda_extremum(f, g, c, LambdaMode::inf, c.refine);
}

GridFn lps_infsup_convolution(const SConcaveFn& f, const SConcaveFn& g, const ConvolveParams& c) {
    if (!(c.p > 0 && c.p < 1)) throw UsageError("inf-sup-convolution needs 0 < p < 1");
    check_origin_interior(f.density());
    check_origin_interior(g.density());
    return base_lambda_extremum(f, g, c, LambdaMode::inf);
}

GridFn weighted_base_conv(const SConcaveFn& f, const SConcaveFn& g, double a, double b, const Box& out) {
    return base_slice(prepare(f, g), a, b, out);
}

GridFn brute_force_lps(const GridFn& f, const GridFn& g, const ConvolveParams& c, LambdaMode mode) {
    check_dims(f, g);
    const int cap = f.dim == 1 ? 129 : 33;
    for (int a = 0; a < f.dim; ++a)
        if (f.shape[a] > cap || g.shape[a] > cap) throw UsageError("grid too large for the brute-force oracle");
    const Box out = c.out ? *c.out : f.box();
    for (int a = 0; a < out.dim; ++a)
        if (out.n[a] > cap) throw UsageError("grid too large for the brute-force oracle");
    auto lams = c.p == 1 ? std::vector<double>{0.5} : lambda_grid(c.lambda_samples);
    GridFn h(out, Kind::density, mode == LambdaMode::sup ? 0.0 : kInf);
    for (double lam : lams) {
        auto [a, b] = c.p == 1 ? std::pair<double, double>{c.alpha, c.beta}
                               : lambda_weights(c.p, c.alpha, c.beta, lam);
        const MeanParams m{c.s, a, b};
        for (std::size_t iz = 0; iz < h.size(); ++iz) {
            auto z = h.node(iz);
            double v = 0;
            for (std::size_t ix = 0; ix < f.size(); ++ix) {
                if (!(f[ix] > 0)) continue;
                auto x = f.node(ix);
                std::array<double, 3> y{0, 0, 0};
                for (int k = 0; k < f.dim; ++k) y[k] = (z[k] - a * x[k]) / b;
                v = std::max(v, ms_mean(m, f[ix], grid_eval(g, y)));
            }
            for (std::size_t iy = 0; iy < g.size(); ++iy) {
                if (!(g[iy] > 0)) continue;
                auto y = g.node(iy);
                std::array<double, 3> x{0, 0, 0};
                for (int k = 0; k < f.dim; ++k) x[k] = (z[k] - b * y[k]) / a;
                v = std::max(v, ms_mean(m, grid_eval(f, x), g[iy]));
            }
            h[iz] = mode == LambdaMode::sup ? std::max(h[iz], v) : std::min(h[iz], v);
        }
    }
    return h;
}

}  // namespace lps
