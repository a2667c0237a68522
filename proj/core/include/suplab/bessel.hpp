#pragma once

#include <functional>
#include <vector>

#include "suplab/numerics.hpp"
#include "suplab/report.hpp"

namespace suplab {

enum class BesselKind { J, Y, I, K };

/// Truncated power series for J or I.
struct SeriesResult {
    double value = 0.0;
    LogScaleReal scaled;  // same value, without underflow
    /// Magnitude of the first omitted term. For I this is scaled by the geometric ratio bound
    /// so it dominates the whole remainder; for J it dominates once the terms decrease.
    double error_bound = 0.0;
    /// Bound on the floating-point error of the partial sum itself.
    double rounding_bound = 0.0;
};

/// Sum over m < terms of (-+1)^m (x/2)^{2m+rho} / (m! Gamma(m+rho+1)), accumulated in
/// double-double arithmetic and returned in log-scale.
/// kind must be J or I; terms >= 1. Negative non-integer rho is allowed (used for the
/// J_{-rho} / I_{-rho} combinations).
SeriesResult bessel_series(BesselKind kind, double rho, double x, int terms);

/// Reference values from integral representations, independent of the series and of the
/// recurrence-based evaluator. J uses a steepest-descent contour for x <= rho (positive
/// integrand) and the Bessel integral otherwise; Y, I, K use their standard integrals.
double bessel_ref(BesselKind kind, double rho, double x);
/// Log-scale variant of bessel_ref for J and K, which may underflow.
LogScaleReal bessel_ref_scaled(BesselKind kind, double rho, double x);

struct LangerResult {
    double value = 0.0;
    double w = 0.0;
    double z = 0.0;
};

/// Uniform Airy-type approximation of J_rho(x) with error O(rho^{-4/3}).
/// Throws SingularPointError at x = rho.
LangerResult bessel_langer(double rho, double x);

/// J_rho(x) to relative 1e-8 (absolute 1e-12 under underflow).
double bessel_j(double rho, double x);
LogScaleReal bessel_j_scaled(double rho, double x);

/// Production evaluators for the remaining kinds (x > 0).
double bessel_y(double rho, double x);
double bessel_k(double rho, double x);
double bessel_i(double rho, double x);
LogScaleReal bessel_i_scaled(double rho, double x);

/// Y and K through the sin(rho pi)^{-1} combinations of J_{+-rho}, I_{+-rho}; near integer
/// orders the removable singularity is resolved by averaging rho +- 1e-6. Only accurate
/// for moderate x, where the series do not cancel.
double bessel_y_combination(double rho, double x);
double bessel_k_combination(double rho, double x);

enum class BesselRegime { SeriesSmall, DecaySmall, GapSmall, Transition, Oscillatory, FarOscillatory };
const char* to_string(BesselRegime r);

struct RegimeThresholds {
    double c = 1.0;            // |x - rho| <= c rho^{1/3} is the transition band
    double c_prime = 0.0;      // decay band ends at rho - c' rho^{1/3} (log rho)^{log_exponent}
    double alpha = 13.0 / 15;  // far band starts at rho + c rho^alpha
    double log_exponent = 1.0 / 3;

    /// c = 1, alpha = 13/15, log_exponent = 1/3 and c' from calibrate_c_prime(500).
    static const RegimeThresholds& standard();
    /// Same with log_exponent = 2/3, the smallest power for which z >= log rho can hold
    /// uniformly in rho with a fixed c'.
    static const RegimeThresholds& widened();
};

/// Smallest c' (to 1e-6) such that the Langer variable z at x = rho - c' rho^{1/3} (log rho)^{e}
/// satisfies z >= log rho for every rho in [2, rho_max].
double calibrate_c_prime(double rho_max, double log_exponent = 1.0 / 3);

/// Exactly one tag per (rho, x) with rho >= 0, x >= 0. SeriesSmall takes priority when
/// rho >= 2 x^2; the remaining bands are ordered by x.
BesselRegime classify(double rho, double x, const RegimeThresholds& t = RegimeThresholds::standard());

/// (rho) -> sample points x for an envelope's regime.
using RegimeSampler = std::function<std::vector<double>(double rho)>;

/// Which envelope a certification scan checks.
enum class BesselBound { LargeArgument, TurningPoint, VerySmall, Small, GapSmall, Large };
const char* to_string(BesselBound b);

/// Envelope at (rho, x). For Large the exponent follows alpha.
double bessel_envelope(BesselBound b, double rho, double x, const RegimeThresholds& t = RegimeThresholds::standard());

/// Evaluates |J_rho(x)| / envelope for every rho in the grid and every x from the sampler.
/// Rows carry k = rho, x = x, y = NaN. Passes when every ratio is finite and the per-rho
/// maxima are stable in rho (ratio_stable). Throws DomainError on an empty grid.
ScanReport certify_regime_bounds(BesselBound bound, const std::vector<double>& rho_grid,
                                 const RegimeSampler& sampler,
                                 const RegimeThresholds& t = RegimeThresholds::standard());

/// Default sampler for each envelope: points spread across its regime.
RegimeSampler default_sampler(BesselBound b, int points = 24,
                              const RegimeThresholds& t = RegimeThresholds::standard());

}  // namespace suplab
