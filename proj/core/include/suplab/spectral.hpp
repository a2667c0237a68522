#pragma once

#include "suplab/multiplier.hpp"

namespace suplab {

/// Widths and cusp parameters entering the Poincare series at the cusp tau^{-1} infinity:
/// (n_I, kappa_I) for infinity and (n_{tau^{-1}}, kappa_{tau^{-1}}) for tau^{-1} infinity.
struct PoincareCusps {
    Int n_inf = 1;
    double kappa_inf = 0.0;
    Int n_cusp = 1;
    double kappa_cusp = 0.0;
};
PoincareCusps poincare_cusps(const MultiplierSystem& sys, const GroupElement& tau);

struct KloostermanSpec {
    MultiplierSystem system;  // carries the group
    GroupElement tau;
    Int r = 0;
    Int m = 0;
    Int c = 1;
};

/// W(Gamma, nu; r, m; c): sum over gamma = (a, *; c, d) with tau^{-1} gamma in Gamma, a modulo
/// n_{tau^{-1}} c and d modulo n_I c, of
/// e(((m + kappa_{tau^{-1}}) a / n_{tau^{-1}} + (r + kappa_I) d / n_I) / c) sigma(tau^{-1}, gamma)
///   / (upsilon(tau^{-1} gamma) sigma(tau, tau^{-1})).
Complex kloosterman(const KloostermanSpec& spec);

/// Classical S(m, r; c) = sum over d mod c, (d, c) = 1, of e((m dbar + r d) / c).
Complex classical_kloosterman(Int m, Int r, Int c);

/// delta_tau: e(s (m + kappa_I) / n_I) / (upsilon(tau^{-1} U^s) sigma(tau, tau^{-1})) if some
/// tau^{-1} U^s lies in the group, else 0.
Complex delta_tau(const MultiplierSystem& sys, const GroupElement& tau, Int m);

enum class PoincareCase { KappaZero, Positive, Negative };
const char* to_string(PoincareCase c);

struct PoincareCoefficient {
    Complex value;
    PoincareCase branch = PoincareCase::Positive;
    Int c_max = 0;
    double tail_bound = 0.0;  // bound on |omitted part of the c-sum| times the prefactor
};

/// a(r, m; tau), the r-th Fourier coefficient at infinity of the m-th Poincare series at
/// tau^{-1} infinity, with the c-sum truncated at c_max. Requires k > 2, r + kappa_I > 0, c_max >= 1.
PoincareCoefficient poincare_coeff(const MultiplierSystem& sys, const GroupElement& tau, Int m, Int r, Int c_max,
                                   int workers = 0);

struct CoefficientSquareSum {
    double value = 0.0;
    double tail_bound = 0.0;
    double imag_residue = 0.0;  // imaginary part of the bracket, zero up to rounding
    Int c_max = 0;
    Int width = 1;       // n_{tau^{-1}}, recomputed on the conjugate group
    double kappa = 0.0;  // kappa_{tau^{-1}}, recomputed from the conjugate system
};

/// Sum over an orthonormal basis f_j of |(f_j |_k tau^{-1})^(m)|^2 from the Kloosterman-Bessel series
/// of the conjugate group. Requires k > 2, m + kappa_{tau^{-1}} >= 0 and tau not of the form -U^l.
/// Throws ConsistencyError if the result is negative beyond its tail bound.
CoefficientSquareSum coeff_square_sum(const MultiplierSystem& sys, const GroupElement& tau, Int m,
                                      Int c_max = 10000, int workers = 0);

struct SeriesValue {
    Complex value;
    double tail_bound = 0.0;
    double radius = 0.0;
};

/// G_tau(Gamma, k, nu; z, m) by direct summation over |j(tau gamma, z)| <= R, with R doubled until
/// the omitted terms are bounded by tol. Requires k > 2 and m + kappa_{tau^{-1}} >= 0.
SeriesValue poincare_series(const MultiplierSystem& sys, const GroupElement& tau, Complex z, Int m,
                            double tol = 1e-12);

}  // namespace suplab
