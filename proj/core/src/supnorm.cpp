#include "suplab/supnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "suplab/bergman.hpp"
#include "suplab/bessel.hpp"
#include "suplab/errors.hpp"
#include "suplab/parallel.hpp"
#include "suplab/spectral.hpp"

namespace suplab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLemmaSlack = 1e-12;

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

double log_of(const LogScaleReal& v) { return v.is_zero() ? kNegInf : v.log_abs(); }

// alpha^alpha with 0^0 = 1, in log form
double xlogx(double a) { return a > 0.0 ? a * std::log(a) : 0.0; }

BoundCheck log_check(std::string name, double log_lhs, double log_env) {
    BoundCheck b;
    b.name = std::move(name);
    b.lhs = std::exp(log_lhs);
    b.envelope = std::exp(log_env);
    b.ratio = log_lhs == kNegInf ? 0.0 : std::exp(log_lhs - log_env);
    return b;
}

std::vector<BoundCheck> lemma_rows(const SumSpec& spec, std::vector<double> xs) {
    validate(spec);
    const double a = spec.alpha, b = spec.beta, e = spec.eta;
    const double log_s = log_of(s_sum_scaled(spec));
    const double log_gamma_term = -(a + 1.0) * std::log(b) + log_gamma(a + 1.0);
    std::vector<BoundCheck> rows;
    const auto tag = [&](BoundCheck c, double x) {
        c.params = {{"alpha", a}, {"beta", b}, {"eta", e}};
        if (!std::isnan(x)) c.params["x"] = x;
        return c;
    };
    rows.push_back(tag(log_check("sabest_general", log_s, log_add(log_gamma_term, -a * std::log(b) + xlogx(a) - a)), NAN));
    if (a <= b * e)
        rows.push_back(tag(log_check("sabest_second", log_s, log_add(log_gamma_term, a * std::log(e) - b * e)), NAN));
    const double x0 = 6.0 * a / b;
    if (xs.empty())
        for (double f : {1.0, 1.5, 2.0, 4.0, 8.0, 16.0}) xs.push_back(f * x0);
    for (double x : xs) {
        if (!(x >= x0)) throw DomainError("check_lemma_bounds: expdecay needs x >= 6 alpha / beta");
        const double lhs = a * std::log(x) - b * x;
        const double env = xlogx(a) - a * std::log(b) - a - 0.5 * b * x;
        BoundCheck c = tag(log_check("expdecay", lhs, env), x);
        c.x = x;
        rows.push_back(c);
    }
    return rows;
}

// n_tau and kappa_tau for the expansion of f |_k tau
struct CuspData {
    Int width = 1;
    double kappa = 0.0;
    double eta_floor() const { return kappa > 0.0 ? kappa : 1.0; }
    Int first() const { return kappa > 0.0 ? 0 : 1; }
};

CuspData cusp_of(const MultiplierSystem& sys, const GroupElement& tau) {
    const CoefficientSquareSum probe = coeff_square_sum(sys, tau.inverse(), 1, 1, 1);
    return {probe.width, probe.kappa};
}

// A(m) with c_max doubled from `c_start` until the series tail is below 1e-12 of the value
CoefficientSquareSum a_value(const MultiplierSystem& sys, const GroupElement& tau, Int m, Int c_start) {
    Int c = std::max<Int>(c_start, 16);
    for (;;) {
        CoefficientSquareSum a = coeff_square_sum(sys, tau.inverse(), m, c, 1);
        if (a.tail_bound <= 1e-12 * std::abs(a.value) || a.value == 0.0 || c >= (Int{1} << 16)) return a;
        c *= 2;
    }
}

// log of an upper bound for |A(m)|: mu (4 pi (m + kappa))^{k-1} / (n^k Gamma(k-1)) (1 + 2 pi n (X + 2))
// with X = 4 pi (m + kappa) / n, from |W| <= n^2 c and |J_nu(x)| <= min(1, (x/2)^nu / Gamma(nu + 1)).
double log_a_bound(double mu, double k, double n, double mk) {
    const double X = 4.0 * kPi * mk / n;
    return std::log(mu) + (k - 1.0) * std::log(4.0 * kPi * mk) - k * std::log(n) - log_gamma(k - 1.0) +
           std::log1p(kTwoPi * n * (X + 2.0));
}

// grid spacing around `c`: the smallest nonzero sup-distance to another point
double local_spacing(const std::vector<Complex>& pts, Complex c) {
    double h = INFINITY;
    for (const Complex& p : pts) {
        const double d = std::max(std::abs(p.real() - c.real()), std::abs(p.imag() - c.imag()));
        if (d > 1e-12) h = std::min(h, d);
    }
    return std::isfinite(h) ? h : 0.0;
}

// points at spacing h / 4 in the box of half-width h around c, kept inside F_I and y in [y_lo, y_hi]
std::vector<Complex> refine_around(Complex c, double h, double y_lo, double y_hi) {
    std::vector<Complex> pts;
    if (!(h > 0.0)) return pts;
    for (int i = -4; i <= 4; ++i)
        for (int j = -4; j <= 4; ++j) {
            if (i == 0 && j == 0) continue;
            const double x = c.real() + 0.25 * h * i;
            double y = c.imag() + 0.25 * h * j;
            if (std::abs(x) > 0.5 + 1e-12) continue;
            y = std::max(y, std::sqrt(std::max(0.0, 1.0 - x * x)));
            if (y < y_lo - 1e-12 || y > y_hi + 1e-12) continue;
            pts.emplace_back(x, y);
        }
    return pts;
}

std::pair<double, double> y_range(const std::vector<Complex>& pts) {
    double lo = INFINITY, hi = -INFINITY;
    for (const Complex& p : pts) {
        lo = std::min(lo, p.imag());
        hi = std::max(hi, p.imag());
    }
    return {lo, hi};
}

template <class F>
std::vector<BoundCheck> evaluate(const std::vector<Complex>& pts, F f) {
    std::vector<BoundCheck> rows(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { rows[i] = f(pts[i]); });
    return rows;
}

std::size_t argmax_ratio(const std::vector<BoundCheck>& rows) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].ratio > rows[best].ratio) best = i;
    return best;
}

// evaluates on the grid, then `rounds` times on a 4x finer patch around the current max ratio
template <class F>
std::vector<BoundCheck> scan_with_refinement(const std::vector<Complex>& grid, F f, int rounds = 2) {
    if (grid.empty()) throw DomainError("scan: empty grid");
    std::vector<BoundCheck> rows = evaluate(grid, f);
    std::vector<Complex> pts = grid;
    const auto [lo, hi] = y_range(grid);
    double h = local_spacing(grid, grid[argmax_ratio(rows)]);
    for (int round = 0; round < rounds; ++round) {
        const Complex c = pts[argmax_ratio(rows)];
        const std::vector<Complex> patch = refine_around(c, h, lo, hi);
        const std::vector<BoundCheck> extra = evaluate(patch, f);
        rows.insert(rows.end(), extra.begin(), extra.end());
        pts.insert(pts.end(), patch.begin(), patch.end());
        h *= 0.25;
    }
    return rows;
}

// 1-D: `rounds` passes, each adding three points at a quarter of the neighbour spacing on
// both sides of the current max
// `rows` holds f at the sorted points `ts`
template <class F>
std::vector<BoundCheck> refine_1d(std::vector<double> ts, std::vector<BoundCheck> rows, F f, int rounds = 4) {
    for (int round = 0; round < rounds; ++round) {
        const std::size_t best = argmax_ratio(rows);
        std::vector<double> extra;
        for (int side : {-1, 1}) {
            const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(best) + side;
            if (nb < 0 || nb >= static_cast<std::ptrdiff_t>(ts.size())) continue;
            const double h = ts[static_cast<std::size_t>(nb)] - ts[best];
            for (int q = 1; q <= 3; ++q) extra.push_back(ts[best] + 0.25 * q * h);
        }
        std::vector<BoundCheck> more(extra.size());
        parallel_for(extra.size(), [&](std::size_t i) { more[i] = f(extra[i]); });
        std::vector<std::size_t> order(ts.size() + extra.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        const auto t_at = [&](std::size_t i) { return i < ts.size() ? ts[i] : extra[i - ts.size()]; };
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t_at(a) < t_at(b); });
        std::vector<double> ts2;
        std::vector<BoundCheck> rows2;
        for (std::size_t i : order) {
            ts2.push_back(t_at(i));
            rows2.push_back(i < ts.size() ? rows[i] : more[i - ts.size()]);
        }
        ts = std::move(ts2);
        rows = std::move(rows2);
    }
    return rows;
}

bool all_finite(const ScanReport& r) {
    for (const auto& row : r.rows())
        if (!std::isfinite(row.ratio)) return false;
    return true;
}

// the trivial system of the form's weight, when f lives on the full group with trivial multiplier
// in a one-dimensional space
MultiplierSystem trivial_dimension_one(const CuspForm& form) {
    const double k = form.weight();
    const MultiplierSystem& sys = form.system;
    const bool trivial = sys.group().kind() == Subgroup::Kind::Full && k == std::round(k) &&
                         std::abs(upsilon(sys, GroupElement::S()) - 1.0) < 1e-12 &&
                         std::abs(upsilon(sys, GroupElement::U()) - 1.0) < 1e-12;
    if (!trivial || cusp_form_dimension(static_cast<int>(k)) != 1)
        throw DomainError("cross validation: needs a one-dimensional space on the full group with trivial multiplier");
    return MultiplierSystem::trivial(k);
}

}  // namespace

void validate(const SumSpec& spec) {
    if (!(spec.alpha > 0.0) || !(spec.beta > 0.0) || !(spec.eta > 0.0))
        throw DomainError("SumSpec: alpha, beta and eta must be positive");
}

LogScaleReal s_sum_scaled(const SumSpec& spec) {
    validate(spec);
    // smallest m + eta > 0
    const double x0 = spec.eta - std::ceil(spec.eta) + 1.0;
    return exp_power_sum(spec.alpha, spec.beta, x0);
}

double s_sum(const SumSpec& spec) { return s_sum_scaled(spec).to_double(); }

std::vector<BoundCheck> check_lemma_bounds(const SumSpec& spec, std::vector<double> expdecay_x) {
    std::vector<BoundCheck> rows = lemma_rows(spec, std::move(expdecay_x));
    for (const auto& r : rows)
        if (!(r.ratio <= 1.0 + kLemmaSlack))
            throw BoundViolation("check_lemma_bounds: " + r.name + " ratio " + format_double(r.ratio) + " at alpha " +
                                 format_double(spec.alpha) + ", beta " + format_double(spec.beta) + ", eta " +
                                 format_double(spec.eta));
    return rows;
}

ScanReport lemma_suite(int samples, unsigned seed) {
    if (samples < 1) throw DomainError("lemma_suite: samples must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ScanReport report("lemmas");
    for (int i = 0; i < samples; ++i) {
        SumSpec s;
        s.alpha = 1e-6 * std::pow(6e7, u(rng));
        s.beta = 0.05 * std::pow(400.0, u(rng));
        s.eta = 1.0 - u(rng);
        for (auto& row : lemma_rows(s, {})) report.add(std::move(row));
    }
    report.passed = report.max_ratio() <= 1.0 + kLemmaSlack;
    return report;
}

int region_of(double k, double x) {
    const double nu = k - 1.0;
    const double b1 = std::sqrt(0.5 * nu);
    const double b2 = std::max(b1, nu - std::pow(nu, kRegionExponent));
    const double b3 = std::max(b2, nu + std::pow(nu, kRegionExponent));
    if (x <= b1) return 0;
    if (x <= b2) return 1;
    if (x <= b3) return 2;
    return 3;
}

RegionRanges region_ranges(double k, double big_x) {
    if (!(big_x > 0.0)) throw DomainError("region_ranges: X must be positive");
    // first c with region_of(X / c) <= r; x = X / c decreases in c
    const auto first_at_most = [&](int r) {
        Int lo = 1, hi = 1;
        while (region_of(k, big_x / static_cast<double>(hi)) > r) hi *= 2;
        while (lo < hi) {
            const Int mid = lo + (hi - lo) / 2;
            if (region_of(k, big_x / static_cast<double>(mid)) <= r) hi = mid;
            else lo = mid + 1;
        }
        return lo;
    };
    const Int lo1 = first_at_most(0), lo2 = first_at_most(1), lo3 = first_at_most(2);
    RegionRanges rr;
    rr.first = {lo1, lo2, lo3, 1};
    rr.last = {-1, lo1 - 1, lo2 - 1, lo3 - 1};
    return rr;
}

std::array<BoundCheck, 4> region_checks(double k, double t) {
    if (!(k > 3.0)) throw DomainError("region_checks: k must exceed 3");
    if (!(t > 0.0)) throw DomainError("region_checks: (m + kappa) / n must be positive");
    const double nu = k - 1.0;
    const double X = 4.0 * kPi * t;
    const RegionRanges rr = region_ranges(k, X);
    std::array<double, 4> log_sum;
    for (int r = 1; r < 4; ++r) {
        LogScaleReal s;
        for (Int c = rr.first[r]; c <= rr.last[r]; ++c) s += bessel_j_scaled(nu, X / static_cast<double>(c)).abs();
        log_sum[r] = log_of(s);
    }
    {
        // region 1 is unbounded: sum until (X/2)^nu / Gamma(nu + 1) C^{1-nu} / (nu - 1) is negligible
        LogScaleReal s;
        const double log_lead = nu * std::log(0.5 * X) - log_gamma(nu + 1.0) - std::log(nu - 1.0);
        for (Int c = rr.first[0];; ++c) {
            s += bessel_j_scaled(nu, X / static_cast<double>(c)).abs();
            const double log_tail = log_lead + (1.0 - nu) * std::log(static_cast<double>(c));
            if (!s.is_zero() && log_tail < s.log_abs() - 36.0) {
                s += LogScaleReal::from_log(log_tail);
                break;
            }
        }
        log_sum[0] = log_of(s);
    }
    const double lk = std::log(k), lt = std::log(t), a = kRegionExponent;
    const std::array<double, 4> log_env = {-0.5 * k * lk + std::log1p(t * std::pow(k, -1.5)), lt - 11.0 / 6.0 * lk,
                                           lt + (a - 7.0 / 3.0) * lk, lt - 0.25 * (a + 5.0) * lk};
    std::array<BoundCheck, 4> out;
    for (int r = 0; r < 4; ++r) {
        out[r] = log_check("region" + std::to_string(r + 1), log_sum[r], log_env[r]);
        out[r].k = k;
        out[r].x = t;
        out[r].params = {{"t", t}, {"c_first", static_cast<double>(rr.first[r])},
                         {"c_last", static_cast<double>(rr.last[r])}};
    }
    return out;
}

AEnvelope a_envelope(const MultiplierSystem& sys, const GroupElement& tau, Int m, Int c_max) {
    const double k = sys.weight();
    if (k < 20.0) throw DomainError("a_envelope: requires k >= 20");
    const CoefficientSquareSum a = coeff_square_sum(sys, tau.inverse(), m, c_max);
    const double n = static_cast<double>(a.width);
    const double mk = static_cast<double>(m) + a.kappa;
    if (!(mk > 0.0)) throw DomainError("a_envelope: requires m + kappa > 0");
    const double mu = static_cast<double>(sys.group().index());
    const double log_pre = std::log(mu) + k * std::log(4.0 * kPi) - k * std::log(n) - log_gamma(k - 1.0);
    const double log_bracket = log_add((k - 1.0) * std::log(mk) + std::log1p(n * std::pow(k, -0.5 * k)),
                                       k * std::log(mk) - 22.0 / 15.0 * std::log(k));
    AEnvelope out;
    out.total = log_check("a_envelope", std::log(std::abs(a.value)), log_pre + log_bracket);
    out.total.k = k;
    out.total.params = {{"m", static_cast<double>(m)}, {"kappa", a.kappa}, {"n", n}};
    out.regions = region_checks(k, mk / n);
    out.tail_bound = a.tail_bound;
    out.width = a.width;
    out.kappa = a.kappa;
    return out;
}

ScanReport region_scan(const std::vector<double>& k_list, int density) {
    if (k_list.empty() || density < 1) throw DomainError("region_scan: empty k list or density < 1");
    ScanReport report("regions");
    for (double k : k_list) {
        std::vector<double> ts;
        for (int j = 0;; ++j) {
            const double t = 0.05 * std::pow(10.0, static_cast<double>(j) / density);
            if (t > 4.0 * k) break;
            ts.push_back(t);
        }
        // the region sums jump where X / c crosses a boundary; both sides of each crossing are sampled
        const double nu = k - 1.0;
        for (double b : {std::sqrt(0.5 * nu), nu - std::pow(nu, kRegionExponent), nu + std::pow(nu, kRegionExponent)})
            for (int c = 1; c * b / (4.0 * kPi) <= 4.0 * k; ++c)
                for (double nudge : {1.0 - 1e-9, 1.0 + 1e-9}) {
                    const double t = c * b / (4.0 * kPi) * nudge;
                    if (t >= 0.05 && t <= 4.0 * k) ts.push_back(t);
                }
        std::sort(ts.begin(), ts.end());
        std::vector<std::array<BoundCheck, 4>> base(ts.size());
        parallel_for(ts.size(), [&](std::size_t i) { base[i] = region_checks(k, ts[i]); });
        for (int r = 0; r < 4; ++r) {
            std::vector<BoundCheck> rows;
            for (const auto& b : base) rows.push_back(b[r]);
            for (auto& row : refine_1d(ts, std::move(rows), [&](double t) { return region_checks(k, t)[r]; }))
                report.add(std::move(row));
        }
    }
    bool stable = true;
    for (int r = 1; r <= 4; ++r) {
        ScanReport part;
        for (const auto& row : report.rows())
            if (row.name == "region" + std::to_string(r)) part.add(row);
        stable = stable && ratio_stable(max_ratio_by_k(part));
    }
    report.passed = stable && all_finite(report);
    return report;
}

std::vector<Complex> fd_grid(double y_max, int density, double y_min) {
    if (density < 1) throw DomainError("fd_grid: density must be >= 1");
    std::vector<Complex> pts;
    const double h = 1.0 / density;
    for (int i = 0; i <= density; ++i) {
        const double x = -0.5 + i * h;
        const double bottom = std::max(std::sqrt(1.0 - x * x), y_min);
        if (bottom > y_max) continue;
        pts.emplace_back(x, bottom);
        for (int j = static_cast<int>(std::floor(bottom * density)) + 1;; ++j) {
            const double y = j * h;
            if (y > y_max + 1e-12) break;
            if (y - bottom > 1e-9) pts.emplace_back(x, y);
        }
    }
    return pts;
}

ScanReport verify_prop_method2(const MultiplierSystem& sys, const GroupElement& tau, const std::vector<Complex>& grid,
                               double eta_param, double tol) {
    const double k = sys.weight();
    if (k < 6.0) throw DomainError("verify_prop_method2: requires k >= 6");
    if (!(eta_param > 0.0 && eta_param < 0.5)) throw DomainError("verify_prop_method2: eta must lie in (0, 1/2)");
    const double mu = static_cast<double>(sys.group().index());
    const auto eval = [&](Complex z) {
        const double y = z.imag();
        const DiagonalValue d = basis_sum_diag(sys, tau, z, tol);
        BoundCheck b = log_check("method2", k * std::log(y) + std::log(d.value),
                                 std::log(mu * k * (1.0 + y / std::pow(k, 0.5 - eta_param))));
        b.at(k, y, z.real());
        b.params = {{"eta", eta_param}};
        return b;
    };
    ScanReport report("method2");
    for (auto& row : scan_with_refinement(grid, eval)) report.add(std::move(row));
    report.passed = all_finite(report);
    return report;
}

const char* to_string(Method1Regime r) { return r == Method1Regime::Low ? "low" : "large"; }

std::vector<Method1Value> method1_bound(const MultiplierSystem& sys, const GroupElement& tau,
                                        const std::vector<double>& ys, double delta) {
    const double k = sys.weight();
    if (!(k > 2.0)) throw DomainError("method1_bound: weight must exceed 2");
    if (!(std::abs(delta) + 1.0 <= 0.5 * k)) throw DomainError("method1_bound: requires |delta| + 1 <= k / 2");
    if (ys.empty()) return {};
    for (double y : ys)
        if (!(y > 0.0)) throw DomainError("method1_bound: y must be positive");
    const CuspData cd = cusp_of(sys, tau);
    const double n = static_cast<double>(cd.width), kappa = cd.kappa;
    const double mu = static_cast<double>(sys.group().index());
    const double y_min = *std::min_element(ys.begin(), ys.end());
    const double log_c = std::log(mu) + (k - 1.0) * std::log(4.0 * kPi) - k * std::log(n) - log_gamma(k - 1.0);

    // A(m) for m = first .. first + size - 1, extended in blocks until the tail bound at y_min is negligible
    std::vector<double> table;
    const auto extend = [&](std::size_t count) {
        const std::size_t old = table.size();
        table.resize(old + count);
        parallel_for(count, [&](std::size_t i) {
            const Int m = cd.first() + static_cast<Int>(old + i);
            const double X = 4.0 * kPi * (static_cast<double>(m) + kappa) / n;
            table[old + i] = std::max(0.0, a_value(sys, tau, m, static_cast<Int>(std::ceil(2.0 * X)) + 32).value);
        });
    };
    const auto log_terms = [&](double y, std::size_t upto) {
        const double beta = kTwoPi * y / n;
        double log_f1 = kNegInf;
        for (std::size_t i = 0; i < upto; ++i) {
            if (table[i] == 0.0) continue;
            const double mk = static_cast<double>(cd.first() + static_cast<Int>(i)) + kappa;
            log_f1 = log_add(log_f1, -(0.5 * k + delta) * std::log(mk) + std::log(table[i]) - beta * mk);
        }
        const double x0 = static_cast<double>(cd.first() + static_cast<Int>(upto)) + kappa;
        const double log_tail =
            log_c + log_add(std::log1p(4.0 * kPi * n) + log_of(exp_power_sum(0.5 * k - delta - 1.0, beta, x0)),
                            std::log(8.0 * kPi * kPi) + log_of(exp_power_sum(0.5 * k - delta, beta, x0)));
        return std::pair{log_f1, log_tail};
    };
    extend(16);
    for (;;) {
        const auto [f1, tail] = log_terms(y_min, table.size());
        if (f1 > kNegInf && tail < f1 + std::log(1e-12)) break;
        if (table.size() >= 4096) throw AccuracyError("method1_bound: Fourier tail not negligible", std::exp(f1), std::exp(tail));
        extend(table.size());
    }

    std::vector<Method1Value> out(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double y = ys[i];
        const auto [f1, tail] = log_terms(y, table.size());
        const double f2 = log_of(exp_power_sum(0.5 * k + delta, kTwoPi * y / n, cd.eta_floor()));
        out[i].value = LogScaleReal::from_log(k * std::log(y) + f1 + f2);
        out[i].relative_tail = std::exp(tail - f1);
        out[i].terms = static_cast<Int>(table.size());
    }
    return out;
}

ScanReport verify_prop_method1(const MultiplierSystem& sys, const GroupElement& tau, const std::vector<double>& grid,
                               Method1Regime regime, double delta) {
    const double k = sys.weight();
    if (!(std::abs(delta) + 1.0 <= 0.5 * k)) throw DomainError("verify_prop_method1: requires |delta| + 1 <= k / 2");
    if (grid.empty()) throw DomainError("verify_prop_method1: empty grid");
    const CuspData cd = cusp_of(sys, tau);
    const double n = static_cast<double>(cd.width), eta = cd.eta_floor();
    const double mu = static_cast<double>(sys.group().index());
    const double y_large = 3.0 * n * k / (eta * kPi);
    if (regime == Method1Regime::Large)
        for (double y : grid)
            if (y < y_large) throw DomainError("verify_prop_method1: the large regime needs y >= 3 n k / (eta pi)");

    const auto log_envelope = [&](double y) {
        const double first = regime == Method1Regime::Low ? 1.0 + y / (std::sqrt(k) * n)
                                                          : 1.0 + std::sqrt(k) / eta * std::exp(-eta * kPi * y / n);
        const double last = 1.0 + n * std::pow(k, -0.5 * k) + n / y * std::pow(k, -7.0 / 15);
        return std::log(mu * n) + 1.5 * std::log(k) - std::log(y) + 2.0 * std::log(first) + std::log(last);
    };
    const std::string name = std::string("method1_") + to_string(regime);
    const auto rows_for = [&](const std::vector<double>& ys) {
        const auto values = method1_bound(sys, tau, ys, delta);
        std::vector<BoundCheck> rows;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            BoundCheck b = log_check(name, log_of(values[i].value), log_envelope(ys[i]));
            b.at(k, ys[i], 0.0);
            b.params = {{"delta", delta}, {"n", n}, {"eta", eta}, {"relative_tail", values[i].relative_tail}};
            rows.push_back(std::move(b));
        }
        return rows;
    };
    std::vector<double> ys = grid;
    std::sort(ys.begin(), ys.end());
    ScanReport report(name);
    const auto one = [&](double y) { return rows_for({y}).front(); };
    for (auto& r : refine_1d(ys, rows_for(ys), one, 3)) report.add(std::move(r));
    report.passed = all_finite(report);
    return report;
}

ScanReport method2_scan(const std::vector<double>& k_list, int density, double y_max) {
    const auto grid = fd_grid(y_max, density);
    std::vector<ScanReport> parts;
    for (double k : k_list) parts.push_back(verify_prop_method2(MultiplierSystem::trivial(k), {}, grid));
    return stability_suite("method2", parts);
}

ScanReport method1_scan(const std::vector<double>& k_list, Method1Regime regime, int density, double delta) {
    if (density < 1) throw DomainError("method1_scan: density must be >= 1");
    std::vector<ScanReport> parts;
    for (double k : k_list) {
        const double y0 = regime == Method1Regime::Low ? 1.0 : 3.0 * k / kPi;
        std::vector<double> ys;
        for (int j = 0; j <= 10 * density; ++j) ys.push_back(y0 + static_cast<double>(j) / density);
        parts.push_back(verify_prop_method1(MultiplierSystem::trivial(k), {}, ys, regime, delta));
    }
    return stability_suite(std::string("method1_") + to_string(regime), parts);
}

ScanReport bergman_trivial_scan(const std::vector<double>& k_list, int density) {
    if (k_list.empty() || density < 1) throw DomainError("bergman_trivial_scan: empty k list or density < 1");
    ScanReport report("bergman_trivial");
    for (double k : k_list) {
        if (!(k > 2.0)) throw DomainError("bergman_trivial_scan: k must exceed 2");
        std::vector<Complex> pts;
        for (double x : {0.0, 0.25, 0.5})
            for (int j = 0;; ++j) {
                const double y = std::min(50.0, std::exp(static_cast<double>(j) / density));
                pts.emplace_back(x, y);
                if (y >= 50.0) break;
            }
        const auto eval = [&](Complex z) {
            const double y = z.imag();
            BoundCheck b = BoundCheck::make("bergman_trivial", majorant_sum(z, k, 1e-4).value.real(), y * (1.0 + 1.0 / (k - 2.0)));
            return b.at(k, y, z.real());
        };
        for (auto& row : evaluate(pts, eval)) report.add(std::move(row));
    }
    report.passed = all_finite(report) && ratio_stable(max_ratio_by_k(report));
    return report;
}

double basis_density(const std::vector<CuspForm>& basis, Complex z) {
    if (basis.empty()) return 0.0;
    const CuspForm& f0 = basis.front();
    const double k = f0.weight(), n = static_cast<double>(f0.width), kappa = f0.kappa;
    const double x = z.real(), y = z.imag();
    if (!(y > 0.0)) throw DomainError("basis_density: point must lie in the upper half plane");
    double total = 0.0;
    for (const CuspForm& f : basis) {
        if (f.kappa != kappa || f.width != f0.width || f.first != f0.first)
            throw DomainError("basis_density: forms must share the cusp expansion");
        CompensatedComplexSum s;
        double scale = 0.0;
        int small_run = 0;
        bool converged = false;
        for (std::size_t i = 0; i < f.coefficients.size(); ++i) {
            const double off = static_cast<double>(i);
            const double decay = std::exp(-kTwoPi * off * y / n);
            const double mag = std::abs(f.coefficients[i]) * decay;
            const double mk = static_cast<double>(f.first) + off + kappa;
            s.add(f.coefficients[i] * decay * unit_phase(mk * x / n));
            scale = std::max(scale, mag);
            small_run = mag <= 1e-18 * scale ? small_run + 1 : 0;
            if (small_run >= 16 || decay == 0.0) {
                converged = true;
                break;
            }
        }
        if (!converged && scale > 0.0) throw AccuracyError("basis_density: coefficient list too short at this height", 0.0, scale);
        total += std::norm(s.value());
    }
    if (total == 0.0) return 0.0;
    const double lead = static_cast<double>(f0.first) + kappa;
    return std::exp(k * std::log(y) - 2.0 * kTwoPi * lead * y / n + std::log(total));
}

ScanReport theorem3_scan(const std::vector<int>& k_list, int density) {
    if (k_list.empty()) throw DomainError("theorem3_scan: empty k list");
    for (int k : k_list)
        if (k < 12 || k > 80 || k % 2 != 0 || cusp_form_dimension(k) == 0)
            throw DomainError("theorem3_scan: k must be even in [12, 80] with nonzero cusp forms");
    ScanReport report("theorem3");
    double band_lo = INFINITY, band_hi = 0.0;
    bool lower_ok = true, cap_ok = true;
    std::string note;
    for (int k : k_list) {
        const double kd = k;
        const OrthonormalBasis basis = orthonormal_basis(k);
        if (static_cast<int>(basis.forms.size()) != cusp_form_dimension(k))
            throw ConsistencyError("theorem3_scan: basis size differs from the dimension formula");
        const double y_cap = 2.0 * kd;
        const double env = std::pow(kd, 1.5);
        const auto eval = [&](Complex z) {
            BoundCheck b = BoundCheck::make("sup", basis_density(basis.forms, z), env);
            return b.at(kd, z.imag(), z.real());
        };
        const double y_low = kd / (4.0 * kPi);
        std::vector<Complex> grid = fd_grid(y_cap, density);
        // the line through the lower-bound construction
        for (int i = 0; i <= density; ++i) {
            const double x = -0.5 + static_cast<double>(i) / density;
            if (x * x + y_low * y_low >= 1.0) grid.emplace_back(x, y_low);
        }
        const std::vector<BoundCheck> rows = scan_with_refinement(grid, eval);
        const BoundCheck& best = rows[argmax_ratio(rows)];
        double cap = 0.0;
        for (const auto& r : rows)
            if (r.y >= y_cap - 1e-9) cap = std::max(cap, r.lhs);

        // Parseval lower bound at y = k / (4 pi) with the direct Kloosterman-Bessel value of A(1)
        const CoefficientSquareSum a1 = a_value(MultiplierSystem::trivial(kd), GroupElement::identity(), 1, 64);
        const double lower = std::exp(kd * std::log(y_low) - 4.0 * kPi * y_low + std::log(a1.value));

        BoundCheck sup_row = best;
        sup_row.params = {{"dimension", static_cast<double>(basis.forms.size())}, {"condition", basis.condition}};
        report.add(sup_row);
        report.add(BoundCheck::make("lower", lower, env).at(kd, y_low, 0.0));
        report.add(BoundCheck::make("cap", cap, best.lhs).at(kd, y_cap, 0.0));
        band_lo = std::min(band_lo, sup_row.ratio);
        band_hi = std::max(band_hi, sup_row.ratio);
        lower_ok = lower_ok && lower <= best.lhs;
        cap_ok = cap_ok && cap < 0.01 * best.lhs;
        note += "k=" + std::to_string(k) + " argmax_y=" + format_double(best.y) + "; ";
    }
    report.passed = band_hi / band_lo <= 10.0 && lower_ok && cap_ok;
    report.note = "band=" + format_double(band_hi / band_lo) + "; " + note;
    return report;
}

ScanReport theorem12_report(const CuspForm& f, int density, double eps) {
    if (std::all_of(f.coefficients.begin(), f.coefficients.end(), [](Complex c) { return c == Complex(0.0); }))
        throw DomainError("theorem12_report: zero form");
    const double norm = petersson_norm(f, 1e-10);
    if (!(std::abs(norm - 1.0) <= 1e-6)) throw DomainError("theorem12_report: the form must have Petersson norm 1");
    const double k = f.weight();
    const Subgroup& group = f.group();
    const double mu = static_cast<double>(group.index());
    double n_max = 1.0, eta_min = 1.0;
    for (const Cusp& c : cusp_set(group)) {
        n_max = std::max(n_max, static_cast<double>(c.width));
        eta_min = std::min(eta_min, cusp_parameter(f.system, c).eta_floor);
    }
    const double env1 = std::sqrt(mu * k);
    const double env2 = (1.0 + std::sqrt(n_max) * std::pow(k, -0.5 + eps)) * std::sqrt(mu) * std::pow(k, 0.75) / std::sqrt(eta_min);
    // y^{k/2} |f(w)| is invariant, so the slashed value is read off at w = tau z
    const auto height = [&](Complex w) { return std::exp(0.5 * k * std::log(w.imag())) * std::abs(eval_reduced(f, w)); };

    ScanReport report("theorem12");
    std::vector<Complex> compact;
    for (int i = 0; i <= density; ++i)
        for (int j = 0; j <= density; ++j) compact.emplace_back(-0.5 + static_cast<double>(i) / density, 1.0 + static_cast<double>(j) / density);
    const auto eval1 = [&](Complex z) { return BoundCheck::make("theorem1", height(z), env1).at(k, z.imag(), z.real()); };
    const std::vector<BoundCheck> k_rows = evaluate(compact, eval1);
    report.add(k_rows[argmax_ratio(k_rows)]);

    const double y_cap = std::max(2.0, k * n_max / (kTwoPi * eta_min));
    const std::vector<Complex> grid = fd_grid(y_cap, density);
    double best = 0.0;
    for (const GroupElement& tau : group.right_cosets()) {
        const auto eval = [&](Complex z) {
            BoundCheck b = BoundCheck::make("coset", height(tau.act(z)), env2);
            return b.at(k, z.imag(), z.real());
        };
        const std::vector<BoundCheck> rows = scan_with_refinement(grid, eval);
        BoundCheck top = rows[argmax_ratio(rows)];
        top.params = {{"a", static_cast<double>(tau.a())}, {"b", static_cast<double>(tau.b())},
                      {"c", static_cast<double>(tau.c())}, {"d", static_cast<double>(tau.d())}};
        best = std::max(best, top.lhs);
        report.add(top);
    }
    BoundCheck t2 = BoundCheck::make("theorem2", best, env2).at(k, NAN, NAN);
    t2.params = {{"n_max", n_max}, {"eta_min", eta_min}, {"eps", eps}, {"mu", mu}};
    report.add(t2);
    report.passed = all_finite(report);
    return report;
}

ScanReport width_index_check(const Subgroup& group) {
    ScanReport report("width_index");
    const double mu = static_cast<double>(group.index());
    Int total = 0;
    for (const Cusp& c : cusp_set(group)) {
        BoundCheck b = BoundCheck::make("width", static_cast<double>(c.width), mu);
        b.params = {{"p", static_cast<double>(c.numerator)}, {"q", static_cast<double>(c.denominator)}};
        report.add(b);
        total += c.width;
    }
    report.passed = report.max_ratio() <= 1.0 && total == group.index();
    return report;
}

ScanReport route_cross_validation(const CuspForm& form, const std::vector<Complex>& points, Int c_max) {
    const MultiplierSystem sys = trivial_dimension_one(form);
    if (points.empty()) throw DomainError("route_cross_validation: no points");
    const double k = form.weight();
    double y_min = INFINITY;
    for (const Complex& z : points) y_min = std::min(y_min, z.imag());
    if (!(y_min > 0.0)) throw DomainError("route_cross_validation: points must lie in the upper half plane");

    // sqrt(A(m)) e^{-2 pi m y} falls below 1e-17 of the leading term
    Int m_max = 1;
    while (0.5 * log_a_bound(1.0, k, 1.0, static_cast<double>(m_max + 1)) - kTwoPi * (m_max + 1) * y_min >
           0.5 * log_a_bound(1.0, k, 1.0, 1.0) - kTwoPi * y_min - 40.0)
        ++m_max;
    if (static_cast<std::size_t>(m_max) > form.coefficients.size() + static_cast<std::size_t>(form.first))
        throw DomainError("route_cross_validation: form has too few coefficients for the signs");
    std::vector<double> amp(static_cast<std::size_t>(m_max));
    parallel_for(amp.size(), [&](std::size_t i) {
        const Int m = static_cast<Int>(i) + 1;
        const double sign = form.coefficient(m).real() < 0.0 ? -1.0 : 1.0;
        amp[i] = sign * std::sqrt(std::max(0.0, coeff_square_sum(sys, GroupElement::identity(), m, c_max, 1).value));
    });

    ScanReport report("route");
    const auto eval = [&](Complex z) {
        Complex s = 0.0;
        for (std::size_t i = 0; i < amp.size(); ++i) s += amp[i] * std::exp(Complex(0.0, kTwoPi) * static_cast<double>(i + 1) * z);
        const double yk = std::pow(z.imag(), k);
        const double bergman = yk * basis_sum_diag(sys, GroupElement::identity(), z, 1e-7).value;
        return BoundCheck::make("route", bergman, yk * std::norm(s)).at(k, z.imag(), z.real());
    };
    for (auto& row : evaluate(points, eval)) report.add(std::move(row));
    bool ok = true;
    for (const auto& r : report.rows()) ok = ok && std::abs(r.ratio - 1.0) <= 1e-4;
    report.passed = ok;
    return report;
}

ScanReport parseval_cross_validation(const MultiplierSystem& sys, const std::vector<double>& ys, Int c_max) {
    const double k = sys.weight();
    if (ys.empty()) throw DomainError("parseval_cross_validation: no heights");
    const CuspData cd = cusp_of(sys, GroupElement::identity());
    const double n = static_cast<double>(cd.width), mu = static_cast<double>(sys.group().index());
    const double y_min = *std::min_element(ys.begin(), ys.end());
    std::vector<double> a;
    for (Int m = cd.first();; ++m) {
        const double mk = static_cast<double>(m) + cd.kappa;
        const double lead = static_cast<double>(cd.first()) + cd.kappa;
        if (log_a_bound(mu, k, n, mk) - 4.0 * kPi * mk * y_min / n <
            log_a_bound(mu, k, n, lead) - 4.0 * kPi * lead * y_min / n - 40.0)
            break;
        a.push_back(0.0);
    }
    parallel_for(a.size(), [&](std::size_t i) {
        a[i] = coeff_square_sum(sys, GroupElement::identity(), cd.first() + static_cast<Int>(i), c_max, 1).value;
    });
    ScanReport report("parseval");
    const int nodes = 32 * static_cast<int>(cd.width);
    for (double y : ys) {
        std::vector<double> vals(static_cast<std::size_t>(nodes));
        parallel_for(vals.size(), [&](std::size_t j) {
            const Complex z(n * static_cast<double>(j) / nodes, y);
            vals[j] = basis_sum_diag(sys, GroupElement::identity(), z, 1e-8).value;
        });
        const double mean = pairwise_sum(vals) / nodes;
        CompensatedSum four;
        for (std::size_t i = 0; i < a.size(); ++i)
            four.add(a[i] * std::exp(-4.0 * kPi * (static_cast<double>(cd.first() + static_cast<Int>(i)) + cd.kappa) * y / n));
        const double yk = std::pow(y, k);
        report.add(BoundCheck::make("parseval", yk * mean, yk * four.value()).at(k, y, NAN));
    }
    bool ok = true;
    for (const auto& r : report.rows()) ok = ok && std::abs(r.ratio - 1.0) <= 1e-4;
    report.passed = ok;
    return report;
}

ScanReport stability_suite(std::string name, const std::vector<ScanReport>& parts, double slack) {
    ScanReport out(std::move(name));
    for (const auto& p : parts) out.append(p);
    out.passed = out.passed && all_finite(out) && ratio_stable(max_ratio_by_k(out), slack);
    return out;
}

}  // namespace suplab
