#include <algorithm>
#include <cstdio>
#include <numbers>

#include "lattice.hpp"
#include "lpsum/asplund.hpp"
#include "lpsum/legendre.hpp"
#include "lpsum/quermass.hpp"

namespace lps {

using namespace detail;

namespace {

// -(1/p) psi^p phi^{1-p}, with the 0 * inf convention at psi = 0.
double variation_term(double psi, double phi, double p) {
    if (p == 1) return -psi;
    if (psi <= 0) return 0;
    if (!(phi > 0)) throw DomainError("phi_H vanishes where psi_H does not");
    return -std::pow(psi, p) * std::pow(phi, 1 - p) / p;
}

// Polynomial extrapolation to eps = 0 through (eps_i, d_i).
double extrapolate_zero(const std::vector<double>& eps, const std::vector<double>& d) {
    double r = 0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        double w = 1;
        for (std::size_t k = 0; k < eps.size(); ++k)
            if (k != i) w *= eps[k] / (eps[k] - eps[i]);
        r += w * d[i];
    }
    return r;
}

double cell_volume_of(const GridFn& g) {
    double v = 1;
    for (int a = 0; a < g.dim; ++a) v *= g.spacing[a];
    return v;
}

double max_abs_slope(const GridFn& w) {
    double m = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (is_inf(w[i])) continue;
        auto ijk = w.unravel(i);
        for (int a = 0; a < w.dim; ++a) {
            if (ijk[a] + 1 >= w.shape[a]) continue;
            auto nb = ijk;
            ++nb[a];
            const double b = w[w.ravel(nb[0], nb[1], nb[2])];
            if (!is_inf(b)) m = std::max(m, std::fabs(b - w[i]) / w.spacing[a]);
        }
    }
    return m;
}

struct IntegralParts {
    double grassmann = 0;  // int_H Omega'(u_H) psi_H^p phi_H^{1-p} dx over interior nodes
    double gate = 0;
};

IntegralParts integrate_on_h(const GridFn& uh, const GridFn& psi, const OmegaWeight& Om, double p, const Subspace& H,
                             bool gate) {
    IntegralParts out;
    const int k = uh.dim;
    GridFn phih;
    if (gate) phih = legendre_transform(uh);
    const double cv = cell_volume_of(uh);
    for (std::size_t i = 0; i < uh.size(); ++i) {
        if (is_inf(uh[i])) continue;
        auto ijk = uh.unravel(i);
        Vec3 g{0, 0, 0};
        bool ok = true;
        for (int c = 0; c < k && ok; ++c) {
            if (ijk[c] == 0 || ijk[c] + 1 >= uh.shape[c]) {
                ok = false;
                break;
            }
            auto lo = ijk, hi = ijk;
            --lo[c];
            ++hi[c];
            double a = uh[uh.ravel(lo[0], lo[1], lo[2])], b = uh[uh.ravel(hi[0], hi[1], hi[2])];
            // one-sided next to the edge of the domain
            if (is_inf(a) && is_inf(b)) ok = false;
            else if (is_inf(a)) g[c] = (b - uh[i]) / uh.spacing[c];
            else if (is_inf(b)) g[c] = (uh[i] - a) / uh.spacing[c];
            else g[c] = (b - a) / (2 * uh.spacing[c]);
        }
        if (!ok) continue;
        const double dOm = Om.prime(uh[i]);
        if (dOm == 0) continue;
        auto x = uh.node(i);
        double phi = -uh[i];
        for (int c = 0; c < k; ++c) phi += x[c] * g[c];
        const double ps = grid_eval(psi, H.embed(g));
        if (is_inf(ps)) throw DomainError("gradient outside the dual grid of psi");
        if (gate) {
            double pg = grid_eval(phih, g);
            if (!is_inf(pg)) out.gate = std::max(out.gate, std::fabs(pg - phi) / (1 + std::fabs(phi)));
        }
        out.grassmann += dOm * (-p * variation_term(ps, phi, p));
    }
    out.grassmann *= cv;
    return out;
}

// R^2 form for j = 1: every node x != 0 is integrated on its own line span(x), weight 1/|x|.
double literal_2d_j1(const GridFn& u, const GridFn& psi, const OmegaWeight& Om, double p, double& excluded) {
    double sum = 0, near0 = 0;
    const double h = u.spacing[0];
    const long long n = (long long)u.size();
#pragma omp parallel for reduction(+ : sum) reduction(max : near0) schedule(dynamic, 64) if (threads() > 1)
    for (long long idx = 0; idx < n; ++idx) {
        auto x = u.node((std::size_t)idx);
        const double r = std::hypot(x[0], x[1]);
        if (r < 0.5 * h) continue;  // origin cell
        Subspace H;
        H.n = 2;
        H.k = 1;
        H.frame[0] = {x[0] / r, x[1] / r, 0};
        H.perp[0] = {-x[1] / r, x[0] / r, 0};
        PerpLattice L = perp_lattice(u, H);
        auto uh = [&](double t) {
            return lattice_extremum(u, H, L, H.embed({t, 0, 0}), kInf, [](double v, double b) { return v < b; },
                                    [&](const Vec3& y) { return grid_eval(u, y); });
        };
        const double u0 = uh(r), um = uh(r - h), up = uh(r + h);
        if (is_inf(u0) || is_inf(um) || is_inf(up)) continue;
        const double dOm = Om.prime(u0);
        if (dOm == 0) continue;
        const double g = (up - um) / (2 * h);
        const double phi = r * g - u0;
        const double ps = grid_eval(psi, H.embed({g, 0, 0}));
        if (is_inf(ps)) continue;
        const double F = dOm * (-p * variation_term(ps, phi, p));
        sum += F / r;
        if (r < 1.5 * h) near0 = std::max(near0, std::fabs(F));
    }
    // int over the origin cell of 1/|x| is 4 h log(1 + sqrt 2)
    excluded = near0 * 4 * h * std::log(1 + std::sqrt(2.0));
    return sum * h * h;
}

}  // namespace

double variation_projected_base(const ScalarField& u, const ScalarField& psi, const Subspace& H, const Vec3& x,
                                double p, double h) {
    Vec3 g{0, 0, 0};
    for (int c = 0; c < H.k; ++c) {
        Vec3 a = x, b = x;
        a[c] -= h;
        b[c] += h;
        g[c] = (projected_base_at(u, H, b) - projected_base_at(u, H, a)) / (2 * h);
    }
    double phi = -projected_base_at(u, H, x);
    for (int c = 0; c < H.k; ++c) phi += x[c] * g[c];
    return variation_term(psi(H.embed(g)), phi, p);
}

double variation_projected_base(const GridFn& u, const GridFn& psi, const Subspace& H, const Vec3& x, double p) {
    GridFn uh = project_base(u, H);
    Vec3 g{0, 0, 0};
    for (int c = 0; c < H.k; ++c) {
        Vec3 a = x, b = x;
        a[c] -= uh.spacing[c];
        b[c] += uh.spacing[c];
        double ua = grid_eval(uh, a), ub = grid_eval(uh, b);
        if (is_inf(ua) || is_inf(ub)) throw DomainError("x is not interior to the projected domain");
        g[c] = (ub - ua) / (2 * uh.spacing[c]);
    }
    double phi = -grid_eval(uh, x);
    for (int c = 0; c < H.k; ++c) phi += x[c] * g[c];
    return variation_term(grid_eval(psi, H.embed(g)), phi, p);
}

MixedResult mixed_quermass_integral(const GridFn& u, const GridFn& v, const OmegaWeight& Om, double p, int j,
                                    const std::vector<Subspace>& hs) {
    if (p < 1) throw UsageError("mixed quermassintegrals need p >= 1");
    const int n = u.dim;
    if (j < 0 || j >= n) throw UsageError("need 0 <= j <= n-1");
    MixedResult res;
    const double c = c_const(n, j);
    std::vector<double> samples;
    std::vector<Subspace> use = j == 0 ? std::vector<Subspace>{Subspace::full(n)} : hs;
    std::vector<GridFn> uhs;
    double G = 0;  // bound on |grad u_H|: H grids reach past the ambient box, where u_H is steeper
    for (const auto& H : use) {
        if (H.k != n - j) throw UsageError("subspace dimension must be n - j");
        uhs.push_back(project_base(u, H));
        G = std::max(G, std::sqrt((double)H.k) * max_abs_slope(uhs.back()));
    }
    Box d = dual_box(u, v);
    for (int a = 0; a < n; ++a) {
        const double y = std::max(d.hi[a], 1.1 * G);
        d.n[a] = 2 * (int)std::ceil((d.n[a] - 1) / 2.0 * y / d.hi[a]) + 1;
        d.lo[a] = -y;
        d.hi[a] = y;
    }
    const GridFn psi = legendre_transform(v, d);
    for (std::size_t i = 0; i < use.size(); ++i) {
        const GridFn& uh = uhs[i];
        IntegralParts part = integrate_on_h(uh, psi, Om, p, use[i], true);
        res.gate_error = std::max(res.gate_error, part.gate);
        samples.push_back(-c * part.grassmann / p);
    }
    McEstimate e = mc_finish(samples);
    res.value = e.value;
    res.stderr_ = e.stderr_;
    res.finite = std::isfinite(res.value);
    if (j == 0) {
        res.literal = res.value;
    } else if (n == 2 && j == 1) {
        double ex = 0;
        res.literal = -literal_2d_j1(u, psi, Om, p, ex) / p;
        res.excluded = ex / p;
    } else {
        res.literal = std::nan("");
        res.diagnostics = "literal R^n form evaluated for n = 2 only";
    }
    if (!res.finite) res.diagnostics += "non-finite integral; ";
    return res;
}

MixedResult mixed_quermass_fd(const SConcaveFn& f, const SConcaveFn& g, double p, int j,
                              const std::vector<double>& eps_schedule, const std::vector<Subspace>& hs) {
    if (f.s != g.s) throw UsageError("inputs carry different s");
    if (p < 1) throw UsageError("mixed quermassintegrals need p >= 1");
    if (eps_schedule.empty()) throw UsageError("empty eps schedule");
    const int n = f.base.dim;
    if (j < 0 || j >= n) throw UsageError("need 0 <= j <= n-1");
    const SConcaveFn a = canonical(f), b = canonical(g);
    const OmegaWeight Om = OmegaWeight::omega(f.s);
    const Box box = a.base.box();
    std::vector<Subspace> use = j == 0 ? std::vector<Subspace>{Subspace::full(n)} : hs;
    const double c = c_const(n, j);

    auto per_h = [&](const GridFn& base) {
        std::vector<double> w;
        for (const auto& H : use) w.push_back(c * omega_total_mass(project_base(base, H), Om));
        return w;
    };
    const std::vector<double> w0 = per_h(lp_base_sum(1, a.base, 0, b.base, p, box));
    std::vector<std::vector<double>> q(use.size());
    for (double e : eps_schedule) {
        const std::vector<double> we = per_h(lp_base_sum(1, a.base, e, b.base, p, box));
        for (std::size_t i = 0; i < use.size(); ++i) q[i].push_back((we[i] - w0[i]) / e);
    }
    std::vector<double> samples, last;
    for (std::size_t i = 0; i < use.size(); ++i) {
        samples.push_back(extrapolate_zero(eps_schedule, q[i]));
        last.push_back(q[i].back());
    }
    MixedResult res;
    McEstimate e = mc_finish(samples);
    res.value = e.value;
    res.stderr_ = e.stderr_;
    res.literal = std::nan("");
    res.finite = std::isfinite(res.value);
    const double lastm = mc_finish(last).value;
    if (std::fabs(lastm - res.value) > 0.05 * std::fabs(res.value))
        res.diagnostics = "convergence warning: smallest-eps quotient differs from the extrapolation by more than 5%";
    return res;
}

MixedS mixed_quermass_s(const SConcaveFn& f, const SConcaveFn& g, double p, int j, const std::vector<Subspace>& hs) {
    if (f.s != g.s) throw UsageError("inputs carry different s");
    MixedS r;
    const SConcaveFn a = canonical(f), b = canonical(g);
    r.raw = mixed_quermass_integral(a.base, b.base, OmegaWeight::omega(f.s), p, j, hs);
    const int n = f.base.dim;
    r.normalized = p / (n - j) * r.raw.value;
    r.corollary = r.raw.value / (n - j);
    return r;
}

VerificationReport blaschke_petkantschin_check(const GridFn& F, int j, int samples, std::uint64_t seed,
                                               double tolerance) {
    const int n = F.dim;
    if (j < 0 || j >= n) throw UsageError("need 0 <= j <= n-1");
    VerificationReport rep;
    rep.suite = "blaschke-petkantschin";
    rep.tolerance = tolerance;
    rep.relative = true;
    const double lhs = total_mass(F);
    std::vector<double> inner;
    auto hs = sample_grassmannian(n, n - j, j == 0 ? 1 : samples, seed);
    for (const auto& H : hs) {
        GridFn sec = section_fn(F, H);
        for (std::size_t i = 0; i < sec.size(); ++i) {
            auto z = sec.node(i);
            sec[i] *= std::pow(std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]), j);
        }
        inner.push_back(total_mass(sec));
    }
    McEstimate e = mc_finish(inner);
    const double rhs = c_const(n, j) * e.value;
    char buf[128];
    std::snprintf(buf, sizeof buf, "n=%d j=%d subspaces=%d", n, j, (int)hs.size());
    rep.add_slack(seed, buf, lhs, rhs, -std::fabs(lhs - rhs) / std::fabs(lhs));
    const double sd = e.stderr_ * std::sqrt((double)inner.size());
    std::snprintf(buf, sizeof buf, "ratio lhs/rhs = %.6f; n/(n-j) = %.6f", lhs / rhs, double(n) / (n - j));
    rep.notes.push_back(buf);
    std::snprintf(buf, sizeof buf, "per-subspace sd = %.3e, relative stderr = %.3e", sd,
                  e.stderr_ / std::max(e.value, 1e-300));
    rep.notes.push_back(buf);
    return rep;
}

}  // namespace lps
