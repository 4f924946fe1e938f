#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace lps {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSZero = 1e-6;  // |s| below this uses the log-domain forms

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Extended reals are doubles with +inf as the only non-finite value.
inline bool is_inf(double v) { return v == kInf; }
inline double ext_add(double a, double b) { return (is_inf(a) || is_inf(b)) ? kInf : a + b; }
inline bool s_is_zero(double s) { return std::fabs(s) < kSZero; }

// Number of OpenMP threads used by the parallel kernels. 1 = serial.
void set_threads(int n);
int threads();

enum class Kind { density, base };

struct Box {
    int dim = 1;
    std::array<double, 3> lo{0, 0, 0};
    std::array<double, 3> hi{1, 1, 1};
    std::array<int, 3> n{2, 1, 1};

    static Box cube(int dim, double lo, double hi, int n);
    double spacing(int a) const { return (hi[a] - lo[a]) / (n[a] - 1); }
};

Box default_box(int dim);

struct GridFn {
    int dim = 1;
    std::array<double, 3> origin{0, 0, 0};
    std::array<double, 3> spacing{1, 1, 1};
    std::array<int, 3> shape{1, 1, 1};
    Kind kind = Kind::density;
    std::vector<double> values;
    std::map<std::string, double> meta;

    GridFn() = default;
    GridFn(const Box& b, Kind k, double fill = 0.0);

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    Box box() const;
    double coord(int axis, int i) const { return origin[axis] + spacing[axis] * i; }
    std::array<int, 3> unravel(std::size_t idx) const;
    std::size_t ravel(int i, int j = 0, int k = 0) const;
    std::array<double, 3> node(std::size_t idx) const;
    std::size_t nearest_origin_index() const;
    double cell_volume() const;

    // Fills values from a callable taking the node coordinates.
    template <class F>
    void fill(F&& fn) {
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = fn(node(i));
    }
    void validate() const;
};

struct MeanParams {
    double s = 0;
    double alpha = 0.5;
    double beta = 0.5;
};

struct LpCoeffs {
    double p = 1, t = 0.5, lambda = 0.5;
    double q = kInf;
    double C = 0.5, D = 0.5;
};

// M_s^{(alpha,beta)}(a,b); zero whenever ab = 0.
double ms_mean(const MeanParams& m, double a, double b);

// Conjugate exponent: 1/p + 1/q = 1. Returns 1/q to avoid q = inf at p = 1.
inline double inv_q(double p) { return 1.0 - 1.0 / p; }

LpCoeffs lp_coeffs(double p, double t, double lambda);

enum class Extremum { sup, inf };

// sup or inf over lambda in [0,1] of C a + D b.
double extremal_coeff_combination(double p, double t, double a, double b, Extremum mode);

// Golden-section search for the maximum of a unimodal function on [lo,hi].
template <class F>
double golden_max(F&& fn, double lo, double hi, double* arg = nullptr, int iters = 80) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = fn(c), fd = fn(d);
    for (int k = 0; k < iters && b - a > 1e-15 * (1 + std::fabs(a)); ++k) {
        if (fc >= fd) {
            b = d; d = c; fd = fc;
            c = b - r * (b - a); fc = fn(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + r * (b - a); fd = fn(d);
        }
    }
    double x = fc >= fd ? c : d;
    double v = std::max(fc, fd);
    double fa = fn(lo), fb = fn(hi);
    if (fa > v) { v = fa; x = lo; }
    if (fb > v) { v = fb; x = hi; }
    if (arg) *arg = x;
    return v;
}

double total_mass(const GridFn& f);

// Multilinear interpolation; outside the box: +inf for bases, 0 for densities.
double grid_eval(const GridFn& f, const std::array<double, 3>& x);
inline double grid_eval(const GridFn& f, double x) { return grid_eval(f, {x, 0, 0}); }

GridFn resample(const GridFn& f, const Box& b);

// Omega_s(r) = (1 - s r)_+^{1/s}, e^{-r} near s = 0; r may be +inf.
double omega_s(double s, double r);
// Derivative of Omega_s in r.
double omega_s_prime(double s, double r);
// Inverse of Omega_s on (0,1]: the base value with Omega_s(u) = f.
double omega_s_inv(double s, double f);

// An s-concave function stored through its convex base u, f = Omega_s(u).
struct SConcaveFn {
    double s = 0;
    GridFn base;
    double amplitude = 1.0;

    GridFn density() const;
};

// Deterministic per-trial generator derived from (seed, index).
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index);

// Grid-function text format.
GridFn read_grid(const std::string& path);
void write_grid(const GridFn& f, const std::string& path);
std::string grid_to_string(const GridFn& f);
GridFn grid_from_string(const std::string& text);

}  // namespace lps
