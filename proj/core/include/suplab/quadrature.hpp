#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "suplab/modgroup.hpp"
#include "suplab/numerics.hpp"

namespace suplab {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

/// Globally adaptive Gauss-Legendre on [a, b]; bisects the worst panel until the summed
/// error estimate drops below tol. Throws AccuracyError past max_panels.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                              int max_panels = 20000);

/// Double-exponential (tanh-sinh) rule on a finite interval.
QuadResult integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol);

/// Double-exponential (exp-sinh) rule on [a, infinity); f must decay.
QuadResult integrate_exp_sinh(const std::function<double(double)>& f, double a, double tol);

/// |g(x + iy)| <= amplitude * y^power * exp(-rate * y) for y >= 1.
struct CuspDecay {
    double rate = 0.0;
    double amplitude = 1.0;
    double power = 0.0;
};

/// Union of translates g_i F_I of the standard fundamental domain; the integrand is
/// pulled back as z -> g_i z. With a declared cusp decay the region above a height Y is
/// closed by the analytic tail bound; without one the cusp is integrated exactly through
/// the substitution u = 1/y (dx dy / y^2 = dx du).
struct FdDomain {
    std::vector<GroupElement> translates{GroupElement::identity()};
    std::optional<CuspDecay> cusp_decay;
};

inline constexpr double kDefaultQuadTolerance = 1e-10;

/// Integral of f against dx dy / y^2 over the domain with estimated absolute error <= tol.
QuadResult integrate_fd(const std::function<double(Complex)>& f, const FdDomain& domain = {},
                        double tol = kDefaultQuadTolerance);

struct ComplexQuadResult {
    Complex value;
    double error = 0.0;
};
ComplexQuadResult integrate_fd_complex(const std::function<Complex(Complex)>& f,
                                       const FdDomain& domain = {}, double tol = kDefaultQuadTolerance);

struct VectorQuadResult {
    std::vector<double> value;
    double error = 0.0;  // max over components
};
/// Vector-valued integrand: `f(z, out)` fills `dim` components.
VectorQuadResult integrate_fd_vector(const std::function<void(Complex, std::span<double>)>& f, int dim,
                                     const FdDomain& domain = {}, double tol = kDefaultQuadTolerance,
                                     int max_cells = 40000);

}  // namespace suplab
