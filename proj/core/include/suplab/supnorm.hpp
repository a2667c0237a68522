#pragma once

#include <array>
#include <optional>
#include <vector>

#include "suplab/forms.hpp"
#include "suplab/multiplier.hpp"
#include "suplab/numerics.hpp"
#include "suplab/report.hpp"

namespace suplab {

/// S(alpha, beta, eta) = sum over integers m with m + eta > 0 of (m + eta)^alpha e^{-beta (m + eta)}.
struct SumSpec {
    double alpha = 1.0;
    double beta = 1.0;
    double eta = 1.0;
};

/// Throws DomainError unless alpha, beta, eta > 0.
void validate(const SumSpec& spec);
LogScaleReal s_sum_scaled(const SumSpec& spec);
double s_sum(const SumSpec& spec);

/// Rows "sabest_general", "sabest_second" (only when alpha <= beta eta) and one "expdecay" row per
/// x in `expdecay_x` (default: 6 alpha / beta times 1, 1.5, 2, 4, 8, 16). Ratios are computed in
/// log scale. Throws BoundViolation when any ratio exceeds 1 + 1e-12.
std::vector<BoundCheck> check_lemma_bounds(const SumSpec& spec, std::vector<double> expdecay_x = {});

/// check_lemma_bounds over `samples` specs drawn from a fixed-seed generator
/// (alpha in [1e-6, 60], beta in [0.05, 20], eta in (0, 1], the range of the decay floor eta_tau).
/// Passes when every ratio is <= 1 + 1e-12. For eta > 1 the sum also runs over m + eta < eta and
/// the second inequality can fail.
ScanReport lemma_suite(int samples = 100, unsigned seed = 20140401);

/// c-ranges [first, last] of the four regions for x = X / c, X = 4 pi (m + kappa) / n:
/// x <= sqrt((k-1)/2), x <= k-1-(k-1)^a, x <= k-1+(k-1)^a, and the rest. last = -1 marks an
/// unbounded range, first > last an empty one.
struct RegionRanges {
    std::array<Int, 4> first{};
    std::array<Int, 4> last{};
};
inline constexpr double kRegionExponent = 13.0 / 15;
int region_of(double k, double x);
RegionRanges region_ranges(double k, double big_x);

/// Sum over c in the region of |J_{k-1}(X / c)| against the region's envelope
/// k^{-k/2}(1 + t k^{-3/2}), t k^{-11/6}, t k^{a-7/3}, t k^{-(a+5)/4} with t = (m + kappa) / n.
/// Rows are named region1..region4, carry k and x = t, and ratios formed in log scale.
std::array<BoundCheck, 4> region_checks(double k, double t);

struct AEnvelope {
    BoundCheck total;  // |A(m)| against mu (4 pi)^k / (n^k Gamma(k-1)) ((m+k)^{k-1}(1+n k^{-k/2}) + (m+k)^k k^{-22/15})
    std::array<BoundCheck, 4> regions;
    double tail_bound = 0.0;
    Int width = 1;
    double kappa = 0.0;
};

/// A(m) = sum over an orthonormal basis of |(f_j |_k tau)^(m)|^2 from the Kloosterman-Bessel series.
/// Requires k >= 20 and m + kappa_tau > 0.
AEnvelope a_envelope(const MultiplierSystem& sys, const GroupElement& tau, Int m, Int c_max = 2000);

/// Region scan: for each k, t = (m + kappa) / n runs over `density` log-spaced values per decade
/// in [0.05, 4 k], plus both sides of every boundary crossing X / c = b in that range, refined by 4
/// around each region's running max.
ScanReport region_scan(const std::vector<double>& k_list, int density = 16);

/// Points of F_I = {|x| <= 1/2, |z| >= 1} on a lattice of spacing 1 / density, y <= y_max.
std::vector<Complex> fd_grid(double y_max, int density, double y_min = 0.0);

/// Kernel bound on F_I: lhs = y^k basis_sum_diag(sys, tau, z), envelope mu k (1 + y / k^{1/2 - eta}).
/// Requires k >= 6 and eta in (0, 1/2). Passes when every ratio is finite.
ScanReport verify_prop_method2(const MultiplierSystem& sys, const GroupElement& tau, const std::vector<Complex>& grid,
                               double eta_param = 0.25, double tol = 1e-6);

/// verify_prop_method2 on the full group with the trivial system at each k over fd_grid(y_max, density),
/// combined by stability_suite.
ScanReport method2_scan(const std::vector<double>& k_list, int density = 8, double y_max = 3.0);

enum class Method1Regime { Low, Large };
const char* to_string(Method1Regime r);

/// The Cauchy-Schwarz bound with lambda_m = (m + kappa)^{k/2 + delta}:
/// y^k (sum lambda_m^{-1} A(m) e^{-2 pi (m + kappa) y / n}) S(k/2 + delta, 2 pi y / n, eta_tau),
/// with A(m) from the Kloosterman-Bessel series and a certified tail for the omitted m.
struct Method1Value {
    LogScaleReal value;
    double relative_tail = 0.0;
    Int terms = 0;
};

/// Evaluates the bound at each y; the A(m) table is shared across the grid.
std::vector<Method1Value> method1_bound(const MultiplierSystem& sys, const GroupElement& tau,
                                        const std::vector<double>& ys, double delta = 0.0);

/// The Cauchy-Schwarz bound in the low or large y regime over the y values of `grid`, refined by 4 around the max.
/// Requires |delta| + 1 <= k / 2 and, for Large, every y >= 3 n k / (eta_tau pi).
ScanReport verify_prop_method1(const MultiplierSystem& sys, const GroupElement& tau, const std::vector<double>& grid,
                               Method1Regime regime, double delta = 0.0);

/// verify_prop_method1 on the full group with the trivial system at each k, y in [1, 10] (Low) or
/// [3 k / pi, 3 k / pi + 10] (Large) with spacing 1 / density, combined by stability_suite.
ScanReport method1_scan(const std::vector<double>& k_list, Method1Regime regime, int density = 4, double delta = 0.0);

/// Majorant sum over SL2(Z) against y (1 + 1/(k - 2)) on x in {0, 1/4, 1/2} and y in [1, 50]
/// with `density` log-spaced values per unit of log y. Passes when the per-k maxima are stable.
ScanReport bergman_trivial_scan(const std::vector<double>& k_list, int density = 8);

/// y^k sum_j |f_j(z)|^2 for forms on a group with kappa, width, first shared, evaluated with
/// the leading exponential factored out so that y^k and e^{-4 pi y} do not overflow or
/// underflow separately.
double basis_density(const std::vector<CuspForm>& basis, Complex z);

/// Weight scan on the full group with the trivial system: per k an orthonormal basis, the grid
/// sup of y^k sum |f_j|^2 over F_I with y <= 2k plus the line y = k / (4 pi) (refined by 4 around
/// the max), and the lower
/// bound y^k e^{-4 pi y} A(1) at y = k / (4 pi). Rows "sup", "lower", "cap" per k with envelope
/// k^{3/2}. Passes when the sup band max/min <= 10, lower <= sup and cap < 1% of sup at every k.
ScanReport theorem3_scan(const std::vector<int>& k_list, int density = 40);

/// Sup-norm report for a normalized form f: the sup of y^{k/2}|f| over K = {|x| <= 1/2, 1 <= y <= 2}
/// against mu^{1/2} k^{1/2} ("theorem1"), per right coset tau the sup over F_I of y^{k/2}|f|_k tau|
/// ("coset"), and the max over cosets against (1 + max n^{1/2} k^{-1/2+eps}) mu^{1/2} k^{3/4} / min eta^{1/2}
/// ("theorem2"). Throws DomainError unless <f, f> = 1 to 1e-6.
ScanReport theorem12_report(const CuspForm& f, int density = 20, double eps = 0.1);

/// One row per cusp of the group: width against index. Passes when every ratio is <= 1.
ScanReport width_index_check(const Subgroup& group);

/// Bergman route y^k basis_sum_diag against the Fourier route y^k |sum_m eps_m sqrt(A(m)) e(m z)|^2
/// for a one-dimensional space on the full group with trivial multiplier, eps_m the sign of the coefficients of `form`.
/// Rows "route" with ratio = Bergman / Fourier.
ScanReport route_cross_validation(const CuspForm& form, const std::vector<Complex>& points, Int c_max = 2000);

/// Mean over x of y^k sum_j |f_j|^2 against sum_m A(m) y^k e^{-4 pi (m + kappa) y / n}.
/// Rows "parseval" with ratio = Bergman mean / Fourier sum.
ScanReport parseval_cross_validation(const MultiplierSystem& sys, const std::vector<double>& ys, Int c_max = 2000);

/// Appends the reports and marks the result passed when each part passed and the per-k maxima
/// are stable (ratio_stable).
ScanReport stability_suite(std::string name, const std::vector<ScanReport>& parts, double slack = 1.5);

}  // namespace suplab
