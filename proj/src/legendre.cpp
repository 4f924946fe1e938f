#include "lpsum/legendre.hpp"

#include <algorithm>

namespace lps {

Extent finite_extent(const GridFn& u) {
    Extent e;
    e.dim = u.dim;
    for (int a = 0; a < 3; ++a) {
        e.lo[a] = kInf;
        e.hi[a] = -kInf;
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (is_inf(u[i])) continue;
        auto x = u.node(i);
        for (int a = 0; a < u.dim; ++a) {
            e.lo[a] = std::min(e.lo[a], x[a]);
            e.hi[a] = std::max(e.hi[a], x[a]);
        }
    }
    if (e.lo[0] > e.hi[0]) throw DomainError("base function is identically +inf");
    for (int a = u.dim; a < 3; ++a) e.lo[a] = e.hi[a] = 0;
    return e;
}

Extent lp_extent(double alpha, const Extent& eu, double beta, const Extent& ev, double p) {
    Extent e;
    e.dim = eu.dim;
    auto pm = [&](double x, double y) {
        x = std::fabs(x);
        y = std::fabs(y);
        double acc = 0;
        if (alpha > 0 && x > 0) acc += alpha * std::pow(x, p);
        if (beta > 0 && y > 0) acc += beta * std::pow(y, p);
        return std::pow(acc, 1 / p);
    };
    for (int a = 0; a < eu.dim; ++a) {
        e.lo[a] = -pm(std::min(eu.lo[a], 0.0), std::min(ev.lo[a], 0.0));
        e.hi[a] = pm(std::max(eu.hi[a], 0.0), std::max(ev.hi[a], 0.0));
    }
    return e;
}

void mask_outside(GridFn& w, const Extent& e) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        auto x = w.node(i);
        for (int a = 0; a < w.dim; ++a) {
            double tol = 0.5 * w.spacing[a];
            if (x[a] < e.lo[a] - tol || x[a] > e.hi[a] + tol) {
                w[i] = kInf;
                break;
            }
        }
    }
}

namespace {

double max_slope(const GridFn& u, int axis) {
    double g = 0;
    std::array<int, 3> step{0, 0, 0};
    step[axis] = 1;
    for (std::size_t i = 0; i < u.size(); ++i) {
        auto ijk = u.unravel(i);
        if (ijk[axis] + 1 >= u.shape[axis]) continue;
        double a = u[i], b = u[u.ravel(ijk[0] + step[0], ijk[1] + step[1], ijk[2] + step[2])];
        if (is_inf(a) || is_inf(b)) continue;
        g = std::max(g, std::fabs(b - a) / u.spacing[axis]);
    }
    return g;
}

int odd(int n) { return n % 2 == 0 ? n + 1 : n; }

}  // namespace

Box dual_box(const GridFn& u, int n) {
    Box b;
    b.dim = u.dim;
    for (int a = 0; a < 3; ++a) {
        if (a >= u.dim) {
            b.lo[a] = b.hi[a] = 0;
            b.n[a] = 1;
            continue;
        }
        double y = 1.1 * max_slope(u, a);
        if (!(y > 0)) y = 1.0;
        b.lo[a] = -y;
        b.hi[a] = y;
        int m = n > 0 ? n : u.shape[a];
        // 1-D transforms are linear time, so keep the slope spacing no coarser than the primal spacing
        if (n <= 0 && u.dim == 1) m = std::max(m, (int)std::min(65537.0, std::ceil(2 * y / u.spacing[a]) + 1));
        b.n[a] = odd(m);
    }
    return b;
}

Box dual_box(const GridFn& u, const GridFn& v, int n) {
    Box bu = dual_box(u, n), bv = dual_box(v, n);
    for (int a = 0; a < u.dim; ++a) {
        bu.lo[a] = std::min(bu.lo[a], bv.lo[a]);
        bu.hi[a] = std::max(bu.hi[a], bv.hi[a]);
        bu.n[a] = std::max(bu.n[a], bv.n[a]);
    }
    return bu;
}

void conj_line(double x0, double dx, int n, const double* f, double y0, double dy, int m, double* out,
               std::vector<int>& hull) {
    hull.clear();
    for (int i = 0; i < n; ++i) {
        if (is_inf(f[i])) continue;
        const double xi = x0 + dx * i;
        while (hull.size() >= 2) {
            int a = hull[hull.size() - 2], b = hull.back();
            double xa = x0 + dx * a, xb = x0 + dx * b;
            // drop b when it lies on or above the chord a-i
            if ((f[b] - f[a]) * (xi - xa) >= (f[i] - f[a]) * (xb - xa)) hull.pop_back();
            else break;
        }
        hull.push_back(i);
    }
    if (hull.empty()) {
        for (int j = 0; j < m; ++j) out[j] = -kInf;
        return;
    }
    std::size_t k = 0;
    for (int j = 0; j < m; ++j) {
        const double y = y0 + dy * j;
        double cur = (x0 + dx * hull[k]) * y - f[hull[k]];
        while (k + 1 < hull.size()) {
            double nxt = (x0 + dx * hull[k + 1]) * y - f[hull[k + 1]];
            if (nxt > cur) {
                cur = nxt;
                ++k;
            } else {
                break;
            }
        }
        out[j] = cur;
    }
}

namespace {

// One axis pass of the factorized transform. in has shape `shape`; the output replaces
// shape[axis] with the dual count.
std::vector<double> axis_pass(const std::vector<double>& in, std::array<int, 3> shape, int axis, double x0,
                              double dx, double y0, double dy, int m, bool negate, bool parallel) {
    std::array<int, 3> oshape = shape;
    oshape[axis] = m;
    std::array<std::size_t, 3> is{(std::size_t)shape[1] * shape[2], (std::size_t)shape[2], 1};
    std::array<std::size_t, 3> os{(std::size_t)oshape[1] * oshape[2], (std::size_t)oshape[2], 1};
    int o1 = axis == 0 ? 1 : 0, o2 = axis == 2 ? 1 : 2;
    const long lines = (long)shape[o1] * shape[o2];
    const int n = shape[axis];
    std::vector<double> out((std::size_t)oshape[0] * oshape[1] * oshape[2]);
#pragma omp parallel if (parallel)
    {
        std::vector<double> buf(n), res(m);
        std::vector<int> hull;
        hull.reserve(n);
#pragma omp for schedule(static)
        for (long l = 0; l < lines; ++l) {
            int a = (int)(l / shape[o2]), b = (int)(l % shape[o2]);
            std::size_t ib = a * is[o1] + b * is[o2], ob = a * os[o1] + b * os[o2];
            for (int i = 0; i < n; ++i) buf[i] = in[ib + i * is[axis]];
            conj_line(x0, dx, n, buf.data(), y0, dy, m, res.data(), hull);
            for (int j = 0; j < m; ++j) out[ob + j * os[axis]] = negate ? -res[j] : res[j];
        }
    }
    return out;
}

GridFn transform_impl(const GridFn& u, const Box& dual, bool parallel) {
    if (dual.dim != u.dim) throw UsageError("dual grid dimension mismatch");
    bool any = false;
    for (double v : u.values) any = any || !is_inf(v);
    if (!any) throw DomainError("legendre_transform of an identically +inf function");
    GridFn out(dual, Kind::base);
    std::vector<double> cur = u.values;
    std::array<int, 3> shape = u.shape;
    for (int axis = u.dim - 1; axis >= 0; --axis) {
        const bool last = axis == 0;
        cur = axis_pass(cur, shape, axis, u.origin[axis], u.spacing[axis], out.origin[axis], out.spacing[axis],
                        out.shape[axis], !last, parallel);
        shape[axis] = out.shape[axis];
    }
    out.values = std::move(cur);
    Box ub = u.box();
    for (int a = 0; a < u.dim; ++a) {
        out.meta["primal_lo" + std::to_string(a)] = ub.lo[a];
        out.meta["primal_hi" + std::to_string(a)] = ub.hi[a];
    }
    return out;
}

}  // namespace

GridFn legendre_transform(const GridFn& u, const Box& dual) { return transform_impl(u, dual, threads() > 1); }
GridFn legendre_transform(const GridFn& u) { return legendre_transform(u, dual_box(u)); }

namespace ref {
GridFn legendre_transform(const GridFn& u, const Box& dual) { return transform_impl(u, dual, false); }

GridFn legendre_brute(const GridFn& u, const Box& dual) {
    GridFn out(dual, Kind::base);
    for (std::size_t j = 0; j < out.size(); ++j) {
        auto y = out.node(j);
        double best = -kInf;
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (is_inf(u[i])) continue;
            auto x = u.node(i);
            double v = -u[i];
            for (int a = 0; a < u.dim; ++a) v += x[a] * y[a];
            best = std::max(best, v);
        }
        out[j] = best;
    }
    return out;
}
}  // namespace ref

double legendre_at(const GridFn& m, const std::array<double, 3>& z) {
    double best = -kInf;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (is_inf(m[i])) continue;
        auto y = m.node(i);
        double v = -m[i];
        for (int a = 0; a < m.dim; ++a) v += y[a] * z[a];
        if (v > best) best = v;
    }
    return best;
}

namespace {

GridFn conjugate_back(const GridFn& m, const Box& out, const Extent& dom) {
    GridFn w = legendre_transform(m, out);
    mask_outside(w, dom);
    return w;
}

}  // namespace

GridFn biconjugate(const GridFn& u) {
    GridFn phi = legendre_transform(u);
    return conjugate_back(phi, u.box(), finite_extent(u));
}

GridFn inf_convolution(const GridFn& u, const GridFn& v) { return inf_convolution(u, v, u.box()); }

GridFn inf_convolution(const GridFn& u, const GridFn& v, const Box& out) {
    Box d = dual_box(u, v);
    GridFn phi = legendre_transform(u, d), psi = legendre_transform(v, d);
    GridFn m = phi;
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = phi[i] + psi[i];
    Extent eu = finite_extent(u), ev = finite_extent(v), e;
    e.dim = u.dim;
    for (int a = 0; a < u.dim; ++a) {
        e.lo[a] = eu.lo[a] + ev.lo[a];
        e.hi[a] = eu.hi[a] + ev.hi[a];
    }
    return conjugate_back(m, out, e);
}

GridFn lp_dual_sum(double alpha, const GridFn& phi, double beta, const GridFn& psi, double p) {
    if (phi.size() != psi.size()) throw UsageError("dual grids differ");
    GridFn m = phi;
    for (std::size_t i = 0; i < m.size(); ++i) {
        double a = phi[i], b = psi[i];
        if ((alpha > 0 && a < -1e-9) || (beta > 0 && b < -1e-9))
            throw DomainError("negative dual value in L_p base sum");
        a = std::max(a, 0.0);
        b = std::max(b, 0.0);
        if (p == 1) {
            m[i] = alpha * a + beta * b;
        } else {
            double acc = 0;
            if (alpha > 0 && a > 0) acc += alpha * std::pow(a, p);
            if (beta > 0 && b > 0) acc += beta * std::pow(b, p);
            m[i] = std::pow(acc, 1 / p);
        }
    }
    return m;
}

GridFn lp_base_sum(double alpha, const GridFn& u, double beta, const GridFn& v, double p) {
    return lp_base_sum(alpha, u, beta, v, p, u.box());
}

GridFn lp_base_sum(double alpha, const GridFn& u, double beta, const GridFn& v, double p, const Box& out) {
    if (p < 1) throw UsageError("lp_base_sum needs p >= 1");
    if (alpha < 0 || beta < 0 || alpha + beta <= 0) throw UsageError("weights must be >= 0, not both 0");
    Box d = dual_box(u, v);
    GridFn phi = legendre_transform(u, d), psi = legendre_transform(v, d);
    GridFn m = lp_dual_sum(alpha, phi, beta, psi, p);
    return conjugate_back(m, out, lp_extent(alpha, finite_extent(u), beta, finite_extent(v), p));
}

GridFn support_fn(const SConcaveFn& f) { return legendre_transform(f.base); }
GridFn support_fn(const SConcaveFn& f, const Box& dual) { return legendre_transform(f.base, dual); }

namespace {

Box drop_axis(const Box& b, int axis) {
    Box r;
    r.dim = b.dim - 1;
    int k = 0;
    for (int a = 0; a < b.dim; ++a) {
        if (a == axis) continue;
        r.lo[k] = b.lo[a];
        r.hi[k] = b.hi[a];
        r.n[k] = b.n[a];
        ++k;
    }
    for (; k < 3; ++k) {
        r.lo[k] = r.hi[k] = 0;
        r.n[k] = 1;
    }
    return r;
}

GridFn face_slice(const GridFn& w, int axis, int idx) {
    GridFn f(drop_axis(w.box(), axis), Kind::base);
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto sub = f.unravel(i);
        std::array<int, 3> ijk{0, 0, 0};
        int k = 0;
        for (int a = 0; a < w.dim; ++a) ijk[a] = a == axis ? idx : sub[k++];
        f[i] = w[w.ravel(ijk[0], ijk[1], ijk[2])];
    }
    return f;
}

}  // namespace

int mask_saturated(GridFn& wstar, const GridFn& w) {
    // Compare the sup over interior nodes with the sup over the box faces.
    GridFn inner = w;
    for (std::size_t i = 0; i < inner.size(); ++i) {
        auto ijk = inner.unravel(i);
        for (int a = 0; a < w.dim; ++a)
            if (ijk[a] == 0 || ijk[a] == w.shape[a] - 1) inner[i] = kInf;
    }
    bool any = false;
    for (double v : inner.values) any = any || !is_inf(v);
    if (!any) return 0;
    GridFn I = legendre_transform(inner, wstar.box());
    GridFn B(wstar.box(), Kind::base, -kInf);
    for (int a = 0; a < w.dim; ++a) {
        for (int side = 0; side < 2; ++side) {
            const int idx = side ? w.shape[a] - 1 : 0;
            const double yb = w.coord(a, idx);
            if (w.dim == 1) {
                double wv = w[idx];
                if (is_inf(wv)) continue;
                for (std::size_t i = 0; i < B.size(); ++i) B[i] = std::max(B[i], B.node(i)[0] * yb - wv);
                continue;
            }
            GridFn face = face_slice(w, a, idx);
            bool fin = false;
            for (double v : face.values) fin = fin || !is_inf(v);
            if (!fin) continue;
            GridFn fc = legendre_transform(face, drop_axis(wstar.box(), a));
            for (std::size_t i = 0; i < B.size(); ++i) {
                auto ijk = B.unravel(i);
                std::array<int, 3> sub{0, 0, 0};
                int k = 0;
                for (int b = 0; b < w.dim; ++b)
                    if (b != a) sub[k++] = ijk[b];
                B[i] = std::max(B[i], B.node(i)[a] * yb + fc[fc.ravel(sub[0], sub[1], sub[2])]);
            }
        }
    }
    int count = 0;
    for (std::size_t i = 0; i < wstar.size(); ++i) {
        if (B[i] > I[i] + 1e-12 * (1 + std::fabs(I[i]))) {
            wstar[i] = kInf;
            ++count;
        }
    }
    return count;
}

SConcaveFn s_aleksandrov(const GridFn& w, double s, const Box& primal) {
    SConcaveFn f;
    f.s = s;
    f.base = legendre_transform(w, primal);
    f.base.meta["saturated"] = mask_saturated(f.base, w);
    // w* may dip below zero by rounding where w(o) = 0
    for (double& v : f.base.values)
        if (!is_inf(v) && v < 0 && v > -1e-9) v = 0;
    f.base.meta["s"] = s;
    return f;
}

SConcaveFn s_aleksandrov(const GridFn& w, double s) { return s_aleksandrov(w, s, dual_box(w)); }

}  // namespace lps
