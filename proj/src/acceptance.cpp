#include "lpsum/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "lpsum/asplund.hpp"
#include "lpsum/convolve.hpp"
#include "lpsum/legendre.hpp"
#include "lpsum/quermass.hpp"
#include "lpsum/sets.hpp"
#include "lpsum/verify.hpp"

namespace lps {

std::string CriterionResult::verdict() const {
    if (pass) return expected_failure.empty() ? "PASS" : "PASS (unexpected: " + expected_failure + ")";
    return expected_failure.empty() ? "FAIL" : "FAIL (expected: " + expected_failure + ")";
}

std::string format_result(const CriterionResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "criterion %2d  %-44s ", r.id, r.title.c_str());
    std::string s = head + r.verdict();
    if (!r.detail.empty()) s += "  | " + r.detail;
    for (const auto& i : r.info) s += "\n    info: " + i;
    return s;
}

namespace {

constexpr double kPi = std::numbers::pi;

struct Ctx {
    std::uint64_t seed;
    double scale;
    int trials(int n) const { return std::max(1, (int)std::lround(n * scale)); }
    std::uint64_t sub(int id) const { return seed * 1000003ULL + (std::uint64_t)id; }
};

std::string fmt(const char* f, auto... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

CriterionResult criterion(int id, std::string title) {
    CriterionResult r;
    r.id = id;
    r.title = std::move(title);
    return r;
}

double uni(std::mt19937_64& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

// a x^2/2 + b x^4 + c log cosh(d (x - m)) + e x
GridFn smooth_convex_1d(std::mt19937_64& rng, const Box& box) {
    const double a = uni(rng, 0.5, 2), b = uni(rng, 0, 0.1), c = uni(rng, 0, 1), d = uni(rng, 0.5, 2),
                 m = uni(rng, -1, 1), e = uni(rng, -0.5, 0.5);
    GridFn u(box, Kind::base);
    u.fill([&](auto x) {
        const double t = x[0];
        return 0.5 * a * t * t + b * t * t * t * t + c * std::log(std::cosh(d * (t - m))) + e * t;
    });
    return u;
}

// u(x) = x^T A x / 2 + delta log cosh(<a, x>) on R^2: convex, u(0) = 0 = min u.
struct SmoothBase2 {
    double A[2][2];
    double delta;
    double a[2];

    static SmoothBase2 random(std::mt19937_64& rng) {
        SmoothBase2 u;
        const double l1 = uni(rng, 0.5, 2), l2 = uni(rng, 0.5, 2), th = uni(rng, 0, kPi);
        const double c = std::cos(th), s = std::sin(th);
        u.A[0][0] = l1 * c * c + l2 * s * s;
        u.A[1][1] = l1 * s * s + l2 * c * c;
        u.A[0][1] = u.A[1][0] = (l1 - l2) * c * s;
        u.delta = uni(rng, 0, 0.5);
        const double ph = uni(rng, 0, 2 * kPi), r = uni(rng, 0.5, 1.5);
        u.a[0] = r * std::cos(ph);
        u.a[1] = r * std::sin(ph);
        return u;
    }
    double operator()(double x, double y) const {
        return 0.5 * (A[0][0] * x * x + 2 * A[0][1] * x * y + A[1][1] * y * y) +
               delta * std::log(std::cosh(a[0] * x + a[1] * y));
    }
    // u*(w) by Newton on grad u(x) = w.
    double conj(double w0, double w1) const {
        const double det = A[0][0] * A[1][1] - A[0][1] * A[0][1];
        double x = (A[1][1] * w0 - A[0][1] * w1) / det, y = (A[0][0] * w1 - A[0][1] * w0) / det;
        for (int it = 0; it < 60; ++it) {
            const double q = a[0] * x + a[1] * y, th = std::tanh(q), se = 1 - th * th;
            const double g0 = A[0][0] * x + A[0][1] * y + delta * th * a[0] - w0;
            const double g1 = A[0][1] * x + A[1][1] * y + delta * th * a[1] - w1;
            const double h00 = A[0][0] + delta * se * a[0] * a[0], h01 = A[0][1] + delta * se * a[0] * a[1],
                         h11 = A[1][1] + delta * se * a[1] * a[1];
            const double d = h00 * h11 - h01 * h01;
            const double dx = (h11 * g0 - h01 * g1) / d, dy = (h00 * g1 - h01 * g0) / d;
            x -= dx;
            y -= dy;
            if (std::fabs(dx) + std::fabs(dy) < 1e-15 * (1 + std::fabs(x) + std::fabs(y))) break;
        }
        return x * w0 + y * w1 - (*this)(x, y);
    }
    GridFn grid(const Box& b) const {
        GridFn g(b, Kind::base);
        g.fill([&](auto x) { return (*this)(x[0], x[1]); });
        return g;
    }
};

// (u ⊞_p eps ⊠_p v)_H(z) through the dual: sup_y [z y - (phi(y e)^p + eps psi(y e)^p)^{1/p}],
// psi(w) = w^T B w / 2.
double perturbed_projected_base(const SmoothBase2& u, const double B[2][2], const Subspace& H, double z, double p,
                                double eps) {
    const double e0 = H.frame[0][0], e1 = H.frame[0][1];
    const double bee = B[0][0] * e0 * e0 + 2 * B[0][1] * e0 * e1 + B[1][1] * e1 * e1;
    auto F = [&](double y) {
        const double ph = std::max(0.0, u.conj(y * e0, y * e1)), ps = 0.5 * bee * y * y;
        const double m = p == 1 ? ph + eps * ps : std::pow(std::pow(ph, p) + eps * std::pow(ps, p), 1 / p);
        return z * y - m;
    };
    return golden_max(F, -40, 40, nullptr, 300);
}


// Verdict of a criterion made of labelled parts, some of which are known not to hold.
struct Parts {
    std::vector<std::string> failed, expected_failed;
    void add(bool ok, const std::string& label, bool expected_to_fail = false) {
        if (ok) return;
        (expected_to_fail ? expected_failed : failed).push_back(label);
    }
    void settle(CriterionResult& r, const std::string& reason) const {
        r.pass = failed.empty() && expected_failed.empty();
        if (failed.empty() && !expected_failed.empty()) r.expected_failure = reason;
        if (!failed.empty()) {
            std::string f;
            for (const auto& x : failed) f += (f.empty() ? "" : ", ") + x;
            r.info.push_back("failing: " + f);
        }
    }
};

CriterionResult legendre_involution(const Ctx& c) {
    auto r = criterion(1, "Legendre involution");
    Box b = Box::cube(1, -4, 4, 1025);
    std::mt19937_64 rng(c.sub(1));
    double worst = 0;
    for (int k = 0; k < c.trials(100); ++k) {
        GridFn u = smooth_convex_1d(rng, b);
        GridFn w = biconjugate(u);
        for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::fabs(w[i] - u[i]));
    }
    GridFn q(b, Kind::base);
    q.fill([](auto x) { return 0.5 * x[0] * x[0]; });
    GridFn qs = legendre_transform(q);
    double self = 0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const double y = qs.node(i)[0];
        if (std::fabs(y) <= 4) self = std::max(self, std::fabs(qs[i] - 0.5 * y * y));
    }
    r.pass = worst <= 1e-3 && self <= 1e-4;
    r.detail = fmt("max |u** - u| = %.2e (tol 1e-3), quadratic self-duality %.2e (tol 1e-4)", worst, self);
    return r;
}

// min over i + j = k + c of u_i + v_j, both on the same symmetric grid with c the centre index.
GridFn min_plus_oracle(const GridFn& u, const GridFn& v) {
    const int n = u.shape[0], c = (n - 1) / 2;
    GridFn w = u;
    for (int k = 0; k < n; ++k) {
        double m = kInf;
        for (int i = 0; i < n; ++i) {
            const int j = k + c - i;
            if (j >= 0 && j < n) m = std::min(m, ext_add(u[i], v[j]));
        }
        w[k] = m;
    }
    return w;
}

CriterionResult inf_convolution_oracle(const Ctx& c) {
    auto r = criterion(2, "inf-convolution vs double loop");
    Box b = Box::cube(1, -4, 4, 257);
    std::mt19937_64 rng(c.sub(2));
    double worst = 0;
    std::size_t compared = 0, support_mismatch = 0;
    for (int k = 0; k < c.trials(50); ++k) {
        GridFn u = random_convex_base(rng, b, 0.5, 2), v = random_convex_base(rng, b, 0.5, 2);
        GridFn w = inf_convolution(u, v), o = min_plus_oracle(u, v);
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (is_inf(w[i]) != is_inf(o[i])) ++support_mismatch;
            if (is_inf(w[i]) || is_inf(o[i])) continue;
            worst = std::max(worst, std::fabs(w[i] - o[i]));
            ++compared;
        }
    }
    r.pass = worst <= 1e-3;
    r.detail = fmt("sup error %.2e over %zu finite nodes (tol 1e-3)", worst, compared);
    r.info.push_back(fmt("%zu nodes finite on one side only (domain-edge cells)", support_mismatch));
    return r;
}

CriterionResult closed_forms(const Ctx& c) {
    auto r = criterion(3, "extremal coefficient closed forms");
    std::mt19937_64 rng(c.sub(3));
    struct Regime {
        const char* name;
        double plo, phi;
        Extremum mode;
    };
    const Regime regimes[] = {{"p>=1 sup", 1, 5, Extremum::sup},
                              {"p<0 sup", -3, -0.1, Extremum::sup},
                              {"0<p<1 inf", 0.1, 0.95, Extremum::inf}};
    Parts parts;
    for (const auto& g : regimes) {
        double worst = 0;
        for (int k = 0; k < c.trials(1000); ++k) {
            const double p = uni(rng, g.plo, g.phi), t = uni(rng, 0.05, 0.95), a = uni(rng, 0.1, 10),
                         bb = uni(rng, 0.1, 10);
            const double mean = std::pow((1 - t) * std::pow(a, p) + t * std::pow(bb, p), 1 / p);
            worst = std::max(worst, std::fabs(extremal_coeff_combination(p, t, a, bb, g.mode) - mean));
        }
        const bool negative = g.plo < 0;
        parts.add(worst <= 1e-9, g.name, negative);
        r.detail += fmt("%s%s %.1e", r.detail.empty() ? "" : ", ", g.name, worst);
    }
    // what the p<0 sup is instead
    double endpoint = 0;
    for (int k = 0; k < c.trials(1000); ++k) {
        const double p = uni(rng, -3, -0.1), t = uni(rng, 0.05, 0.95), a = uni(rng, 0.1, 10), bb = uni(rng, 0.1, 10);
        const double e = std::max(std::pow(1 - t, 1 / p) * a, std::pow(t, 1 / p) * bb);
        endpoint = std::max(endpoint, std::fabs(extremal_coeff_combination(p, t, a, bb, Extremum::sup) / e - 1));
    }
    r.info.push_back(fmt("p<0 sup vs max{(1-t)^{1/p} a, t^{1/p} b}: worst relative error %.1e", endpoint));
    r.detail += " (tol 1e-9)";
    parts.settle(r, "for p<0 the sup over lambda sits at an endpoint, max{(1-t)^{1/p} a, t^{1/p} b}, not the p-mean");
    return r;
}

SConcaveFn indicator(const GridSet& m, double s) {
    SConcaveFn f;
    f.s = s;
    f.base = GridFn(m.box(), Kind::base);
    for (std::size_t i = 0; i < m.size(); ++i) f.base[i] = m[i] > 0.5 ? 0.0 : kInf;
    return f;
}

CriterionResult indicator_law(const Ctx& c) {
    auto r = criterion(4, "indicator law");
    Box b = Box::cube(2, -4, 4, 129);
    const double cell = b.spacing(0);
    std::mt19937_64 rng(c.sub(4));
    double worst = 0;  // symmetric difference over its allowance
    int runs = 0;
    for (int k = 0; k < c.trials(20); ++k) {
        auto K = random_polygon(rng, 0.8, 1.8), L = random_polygon(rng, 0.8, 1.8);
        GridSet mK = polygon_mask(K, b), mL = polygon_mask(L, b);
        for (double p : {1.0, 2.0, 3.0}) {
            auto P = lp_polygon_sum(K, L, p, 0.5, 0.5);
            GridSet exact = polygon_mask(P, b);
            for (double s : {kInf, 0.0}) {
                GridFn h = lps_sup_convolution(indicator(mK, s), indicator(mL, s), ConvolveParams::with_t(p, s, 0.5));
                GridSet m = h;
                for (double& v : m.values) v = v >= 0.5 ? 1.0 : 0.0;
                worst = std::max(worst, symmetric_difference_volume(m, exact) / (3 * cell * polygon_perimeter(P)));
                ++runs;
            }
        }
    }
    r.pass = worst <= 1;
    r.detail = fmt("%d runs (s in {inf, 0}), worst symmetric difference %.2f of 3 cell perimeter", runs, worst);
    return r;
}

CriterionResult coincidence(const Ctx& c) {
    auto r = criterion(5, "0<p<1 Wulff vs intersection route");
    Box b = Box::cube(2, -4, 4, 129);
    std::mt19937_64 rng(c.sub(5));
    double worst = 0;
    int runs = 0, fails = 0;
    for (double p : {0.3, 0.5, 0.7}) {
        for (int k = 0; k < c.trials(20); ++k) {
            auto K = random_polygon(rng, 1, 2), L = random_polygon(rng, 1, 2);
            auto rep = check_coincide(K, L, p, b, 0.5, 0.5);
            worst = std::max(worst, rep.trials.back().rhs / rep.trials.back().lhs);
            fails += !rep.passed();
            ++runs;
        }
    }
    r.pass = fails == 0;
    r.detail = fmt("%d pairs, worst Hausdorff %.2f cell diagonals (tol 2)", runs, 2 * worst);
    return r;
}

CriterionResult convolution_vs_asplund(const Ctx& c) {
    auto r = criterion(6, "convolution vs Asplund sum");
    Box b = Box::cube(1, -6, 6, 257);
    struct Regime {
        double p, s;
        bool expected_fail, info_only;
    };
    const Regime regimes[] = {{1, 0, false, false},  {2, 0, false, false},   {2, 0.5, false, false},
                              {2, -0.5, true, false}, {0.5, 0.5, false, false}, {0.5, -0.5, false, false},
                              {1, -0.5, false, true}};
    Parts parts;
    for (const auto& g : regimes) {
        std::mt19937_64 rng(c.sub(6) + (std::uint64_t)(100 * g.p + 10 * (g.s + 1)));
        double worst = kInf;
        bool ok = true;
        for (int k = 0; k < c.trials(50); ++k) {
            SConcaveFn f = random_s_concave(rng, b, g.s, 1, 3), h = random_s_concave(rng, b, g.s, 1, 3);
            auto rep = compare_convolution_vs_asplund(f, h, g.p, g.s, 0.4, k);
            worst = std::min(worst, rep.min_slack());
            ok = ok && rep.passed();
        }
        const std::string label = fmt("(p,s)=(%g,%g)", g.p, g.s);
        const std::string line = fmt("%s min slack %.2e %s", label.c_str(), worst, ok ? "ok" : "violated");
        if (g.info_only) {
            r.info.push_back(line);
            continue;
        }
        parts.add(ok, label, g.expected_fail);
        r.detail += (r.detail.empty() ? "" : "; ") + line;
    }
    parts.settle(r, "p>1, s<0: at 0 the convolution is at least (C+D)^{1/s} > 1 = Asplund sum, since C+D < 1");
    return r;
}

CriterionResult lp_bbl(const Ctx& c) {
    auto r = criterion(7, "L_p-BBL");
    int settings = 0, trials = 0;
    double worst1 = kInf, worst2 = kInf;
    Parts parts;
    for (int n : {1, 2}) {
        for (double s : {-1.0 / (2 * n), 0.0, 0.5, 1.0, kInf, -2.0 / n}) {
            for (double p : {1.0, 2.0}) {
                for (double t : {0.3, 0.5}) {
                    auto rep = verify_lp_bbl(c.trials(200), p, s, t, n, c.sub(7) + (std::uint64_t)settings);
                    ++settings;
                    trials += (int)rep.trials.size();
                    (n == 1 ? worst1 : worst2) = std::min(n == 1 ? worst1 : worst2, rep.min_slack());
                    parts.add(rep.passed(), fmt("n=%d s=%g p=%g t=%g", n, s, p, t));
                }
            }
        }
    }
    parts.settle(r, "");
    r.detail = fmt("%d settings, %d trials; min relative slack 1-D %.2e (tol 1e-6), 2-D %.2e (tol 1e-3)", settings,
                   trials, worst1, worst2);
    return r;
}


CriterionResult omega_bbl(const Ctx& c) {
    auto r = criterion(8, "Omega-BBL and 1-D L_{p,gamma}-BBL");
    Parts parts;
    auto vol = verify_omega_bbl(c.trials(50), SetFunctional::volume(2), 1, 0.5, 1, 0.5, 2, c.sub(8));
    auto W1 = verify_omega_bbl(c.trials(50), SetFunctional::quermass(2, 1, 32, c.sub(8) + 1), 1, 1, 1, 0.5, 2,
                               c.sub(8) + 2);
    parts.add(vol.passed(), "volume");
    parts.add(W1.passed(), "quermass_1");
    r.detail = fmt("volume min slack %.2e, quermass_1 %.2e", vol.min_slack(), W1.min_slack());
    int k = 0;
    for (double gamma : {0.0, 1.0, 0.5, -0.5}) {
        auto rep = verify_1d_lpgamma_bbl(c.trials(100), 2, 1, gamma, 0.5, c.sub(8) + 10 + (std::uint64_t)k++);
        parts.add(rep.passed(), fmt("gamma=%g", gamma));
        r.detail += fmt("; gamma=%g %.2e", gamma, rep.min_slack());
    }
    r.detail += " (tol 1e-6)";
    parts.settle(r, "");
    return r;
}

CriterionResult convolution_concavity(const Ctx& c) {
    auto r = criterion(9, "convolution concavity");
    Parts parts;
    int k = 0;
    for (auto [s, beta] : {std::pair{kInf, kInf}, {0.0, 0.0}, {1.0, 1.0}}) {
        auto rep = verify_convolution_concavity(c.trials(50), 1, s, beta, c.sub(9) + (std::uint64_t)k++, 400);
        const std::string label = fmt("(s,beta)=(%g,%g)", s, beta);
        parts.add(rep.passed(), label);
        r.detail += fmt("%s%s %.2e", r.detail.empty() ? "" : ", ", label.c_str(), rep.min_slack());
    }
    r.detail += " (tol 1e-9)";
    parts.settle(r, "");
    return r;
}

CriterionResult projection_identities(const Ctx& c) {
    auto r = criterion(10, "projection identities");
    const int count = c.trials(20);
    auto hs = sample_grassmannian(2, 1, count, c.sub(10));
    Box b = Box::cube(2, -8, 8, 513);
    double worst = kInf;
    int fails = 0;
    for (int i = 0; i < count; ++i) {
        auto rng = trial_rng(c.sub(10), (std::uint64_t)i);
        SConcaveFn f = random_s_concave(rng, b, 0, 16, 16), g = random_s_concave(rng, b, 0, 16, 16);
        auto rep = verify_projection_identities(f, g, 2, 0, hs[i]);
        worst = std::min(worst, rep.min_slack());
        fails += !rep.passed();
    }
    r.pass = fails == 0;
    r.detail = fmt("s=0, p=2, %d subspaces: %d failing, min slack %.2e (tol 1e-3)", count, fails, worst);

    // compactly supported s=1 instances: node identities exact, interpolated ones limited by the support kink
    Box cb = Box::cube(2, -4, 4, 257);
    double exact = 0, interp = 0;
    int nonfinite = 0;
    for (int i = 0; i < std::min(count, 4); ++i) {
        auto rng = trial_rng(c.sub(10) + 1, (std::uint64_t)i);
        SConcaveFn f = random_s_concave(rng, cb, 1, 2, 3), g = random_s_concave(rng, cb, 1, 2, 3);
        auto rep = verify_projection_identities(f, g, 2, 1, hs[i]);
        for (const auto& t : rep.trials) {
            if (!std::isfinite(t.slack)) {
                ++nonfinite;
                continue;
            }
            const bool node = t.params.rfind("power", 0) == 0 || t.params.rfind("base-route", 0) == 0;
            (node ? exact : interp) = std::min(node ? exact : interp, t.slack);
        }
    }
    r.info.push_back(fmt("s=1: node identities min slack %.2e, interpolated identities %.2e, %d non-finite", exact,
                         interp, nonfinite));
    return r;
}

CriterionResult variation_vs_fd(const Ctx& c) {
    auto r = criterion(11, "first variation vs Richardson differences");
    std::mt19937_64 rng(c.sub(11));
    double worst = 0;
    int points = 0;
    const int instances = c.trials(10);
    for (int k = 0; k < instances; ++k) {
        SmoothBase2 u = SmoothBase2::random(rng);
        const SmoothBase2 v = SmoothBase2::random(rng);
        const double B[2][2] = {{v.A[0][0], v.A[0][1]}, {v.A[1][0], v.A[1][1]}};
        u.delta = std::min(u.delta, 0.3);
        const Subspace H = sample_grassmannian(2, 1, 1, c.sub(11) + (std::uint64_t)k)[0];
        const double p = 1 + k % 2;
        ScalarField uf = [&](const Vec3& x) { return u(x[0], x[1]); };
        ScalarField psi = [&](const Vec3& y) {
            return 0.5 * (B[0][0] * y[0] * y[0] + 2 * B[0][1] * y[0] * y[1] + B[1][1] * y[1] * y[1]);
        };
        for (int i = 0; i < 10; ++i) {
            const double z = (i % 2 ? -1 : 1) * uni(rng, 0.2, 2);
            const double w0 = perturbed_projected_base(u, B, H, z, p, 0);
            auto d = [&](double e) { return (perturbed_projected_base(u, B, H, z, p, e) - w0) / e; };
            const double e = 1e-2;
            const double fd = d(e) / 3 - 2 * d(e / 2) + 8 * d(e / 4) / 3;
            const double closed = variation_projected_base(uf, psi, H, {z, 0, 0}, p);
            worst = std::max(worst, std::fabs(closed - fd) / std::fabs(fd));
            ++points;
        }
    }
    r.pass = worst <= 1e-3;
    r.detail = fmt("%d points on %d instances, worst relative error %.2e (tol 1e-3)", points, instances, worst);
    return r;
}

CriterionResult mixed_consistency(const Ctx& c) {
    auto r = criterion(12, "mixed quermassintegral: differences vs integral");
    std::mt19937_64 rng(c.sub(12));
    Box b = Box::cube(2, -6, 6, 97);
    const auto hs = sample_grassmannian(2, 1, 8, c.sub(12));
    Parts parts;
    double worst = 0;  // |fd - integral| over its allowance
    const int instances = c.trials(10);
    for (int k = 0; k < instances; ++k) {
        const int j = k % 2;
        const double p = 1 + (k / 2) % 2, s = (k / 4) % 2;
        // s=1 supports lie in radius 2; the truncation edge needs the finer grid
        const Box bs = s == 0 ? b : Box::cube(2, -3, 3, 193);
        SConcaveFn f{s, SmoothBase2::random(rng).grid(bs), 1}, g{s, SmoothBase2::random(rng).grid(bs), 1};
        const auto& sub = j == 0 ? std::vector<Subspace>{} : hs;
        MixedResult D = mixed_quermass_fd(f, g, p, j, {0.02, 0.01, 0.005}, sub);
        // both routes on the canonical bases (truncated at 1/s for s > 0)
        MixedResult I = mixed_quermass_s(f, g, p, j, sub).raw;
        const double allow = std::max(0.05 * std::fabs(I.value), 3 * std::max(D.stderr_, I.stderr_));
        const double q = std::fabs(D.value - I.value) / allow;
        worst = std::max(worst, q);
        parts.add(q <= 1 && D.finite && I.finite, fmt("j=%d p=%g s=%g", j, p, s));
    }
    r.detail = fmt("%d instances, worst |fd - integral| %.2f of max(5%%, 3 sigma)", instances, worst);

    // u = |x|^2/2, psi = |y|^2: 2 pi c with c = 2
    SConcaveFn f{0, GridFn(b, Kind::base), 1}, g{0, GridFn(b, Kind::base), 1};
    f.base.fill([](auto x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); });
    g.base.fill([](auto x) { return 0.25 * (x[0] * x[0] + x[1] * x[1]); });
    const double exact = 4 * kPi;
    const double vi = mixed_quermass_integral(f.base, g.base, OmegaWeight::omega(0), 1, 0, {}).value;
    const double vf = mixed_quermass_fd(f, g, 1, 0, {0.02, 0.01, 0.005}, {}).value;
    const double ge = std::max(std::fabs(vi / exact - 1), std::fabs(vf / exact - 1));
    parts.add(ge <= 0.01, "Gaussian analytic value");
    r.detail += fmt("; Gaussian: integral %.4f, differences %.4f, exact 4 pi (rel err %.1e, tol 1e-2)", vi, vf, ge);
    parts.settle(r, "");
    return r;
}

std::vector<Point2> regular(int m, double rad) {
    std::vector<Point2> P;
    for (int i = 0; i < m; ++i) P.push_back({rad * std::cos(2 * kPi * i / m), rad * std::sin(2 * kPi * i / m)});
    return P;
}

CriterionResult body_recovery(const Ctx&) {
    auto r = criterion(13, "L_p mixed areas of bodies");
    const std::vector<Point2> sq{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    const auto disk = regular(720, 1);
    double worst = 0;
    for (double p : {1.0, 2.0, 3.0}) {
        worst = std::max(worst, std::fabs(lp_mixed_area(disk, disk, p) / kPi - 1));
        worst = std::max(worst, std::fabs(lp_mixed_area(sq, sq, p) / 4 - 1));
    }
    const double v1 = lp_mixed_area(sq, sq, 1);
    r.pass = worst <= 0.01 && std::fabs(v1 / 4 - 1) <= 0.02;
    r.detail = fmt("V_p(K,K) vs area worst rel err %.1e (tol 1e-2), V_1(square,square) = %.6f (target 4, tol 2%%)",
                   worst, v1);
    r.info.push_back("disk is a 720-gon; its area differs from pi by 4e-5");
    return r;
}

CriterionResult blaschke_petkantschin(const Ctx& c) {
    auto r = criterion(14, "Blaschke-Petkantschin");
    Parts parts;
    for (int n : {2, 3}) {
        Box b = n == 2 ? Box::cube(2, -5, 5, 129) : Box::cube(3, -5, 5, 65);
        GridFn F(b, Kind::density);
        F.fill([](auto x) { return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])); });
        auto rep = blaschke_petkantschin_check(F, 1, c.trials(4096) , c.sub(14) + (std::uint64_t)n);
        const double ratio = rep.trials[0].lhs / rep.trials[0].rhs, predicted = n / (n - 1.0);
        // the miss is expected only when it is exactly the n/(n-j) factor
        parts.add(rep.passed(), fmt("n=%d", n), std::fabs(ratio / predicted - 1) <= 0.02);
        r.detail += fmt("%sn=%d lhs/rhs %.4f", r.detail.empty() ? "" : ", ", n, ratio);
    }
    r.detail += " (tol 2%)";
    parts.settle(r, "the constant omega_n/omega_{n-j} misses a factor n/(n-j); the ratios are 2 and 3/2");
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
    using Fn = CriterionResult (*)(const Ctx&);
    static const Fn all[] = {legendre_involution, inf_convolution_oracle, closed_forms,      indicator_law,
                             coincidence,         convolution_vs_asplund, lp_bbl,            omega_bbl,
                             convolution_concavity, projection_identities, variation_vs_fd, mixed_consistency,
                             body_recovery,       blaschke_petkantschin};
    const Ctx ctx{opt.seed, opt.trial_scale};
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 14; ++id) {
        if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
        CriterionResult res;
        try {
            res = all[id - 1](ctx);
        } catch (const std::exception& e) {
            res.id = id;
            res.title = "criterion " + std::to_string(id);
            res.detail = std::string("error: ") + e.what();
        }
        if (opt.on_result) opt.on_result(res);
        out.push_back(std::move(res));
    }
    return out;
}

}  // namespace lps
