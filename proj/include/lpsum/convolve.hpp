#pragma once

#include <optional>
#include <vector>

#include "lpsum/core.hpp"

namespace lps {

struct ConvolveParams {
    double p = 1;
    double s = 0;
    double alpha = 0.5;
    double beta = 0.5;
    int lambda_samples = 65;
    bool refine = true;          // golden-section refinement of the lambda extremum per node
    std::optional<Box> out;      // output box; defaults to the box of the first input

    static ConvolveParams with_t(double p, double s, double t) {
        ConvolveParams c;
        c.p = p;
        c.s = s;
        c.alpha = 1 - t;
        c.beta = t;
        return c;
    }
};

// How alpha ×_{p,s} f is read at s = 0.
enum class S0Route {
    power,    // f(x / alpha^{1/p})^{alpha^{1/p}}, consistent with ×_0
    literal,  // alpha^{s/p} f(x / alpha^{1/p}) with s = 0
};

// Open lambda grid on [1/128, 1 - 1/128].
std::vector<double> lambda_grid(int n);

// Weights of the inner combination at lambda: a = alpha^{1/p}(1-lambda)^{1/q}, b = beta^{1/p} lambda^{1/q}.
std::pair<double, double> lambda_weights(double p, double alpha, double beta, double lambda);

GridFn scale_s(double alpha, const GridFn& f, double s);

// sup_{z = a x + b y} M_s^{(a,b)}(f(x), g(y)); a = b = 1 is f ⊕_s g.
GridFn sup_convolution_s(const GridFn& f, const GridFn& g, double s, double a = 1, double b = 1);
GridFn sup_convolution_s(const GridFn& f, const GridFn& g, double s, double a, double b, const Box& out);
double sup_convolution_at(const GridFn& f, const GridFn& g, double s, double a, double b,
                          const std::array<double, 3>& z);

GridFn scale_ps(double alpha, const GridFn& f, double p, double s, S0Route route = S0Route::power);

// L_{p,s} supremal-convolution (p >= 1) of densities by direct decomposition search.
GridFn lps_sup_convolution(const GridFn& f, const GridFn& g, const ConvolveParams& c);
// Same operation through base functions; exact for s-concave inputs with matching s.
GridFn lps_sup_convolution(const SConcaveFn& f, const SConcaveFn& g, const ConvolveParams& c);

// L_{p,s} inf-sup-convolution (0 < p < 1).
GridFn lps_infsup_convolution(const GridFn& f, const GridFn& g, const ConvolveParams& c);
GridFn lps_infsup_convolution(const SConcaveFn& f, const SConcaveFn& g, const ConvolveParams& c);

// Single lambda slice of the base route: sup_{z = a x + b y} M_s^{(a,b)}(f(x), g(y)).
GridFn weighted_base_conv(const SConcaveFn& f, const SConcaveFn& g, double a, double b, const Box& out);

enum class LambdaMode { sup, inf };
// Triple loop over (lambda, x, y) without refinement; small grids only.
GridFn brute_force_lps(const GridFn& f, const GridFn& g, const ConvolveParams& c, LambdaMode mode);

namespace ref {
GridFn sup_convolution_s(const GridFn& f, const GridFn& g, double s, double a, double b, const Box& out);
}

}  // namespace lps
