// Integral-representation reference values for J, Y, I, K.

#include <cmath>

#include "suplab/bessel.hpp"
#include "suplab/errors.hpp"
#include "suplab/quadrature.hpp"

namespace suplab {
namespace {

// sin(pi rho) with the argument reduced first, so integer orders give exactly 0.
double sin_pi(double rho) {
    const double r = std::fmod(rho, 2.0);
    if (r == std::floor(r)) return 0.0;
    return std::sin(kPi * r);
}

double cos_pi(double rho) {
    const double r = std::fmod(rho, 2.0);
    if (r == 0.5 || r == 1.5) return 0.0;
    return std::cos(kPi * r);
}

// Composite Gauss-Legendre over [a, b] with `panels` panels of order 20.
double composite_gl(const std::function<double(double)>& f, double a, double b, long panels) {
    const GaussRule& g = gauss_legendre(20);
    const double h = (b - a) / static_cast<double>(panels);
    CompensatedSum sum;
    for (long p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double mid = lo + 0.5 * h;
        double s = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(mid + 0.5 * h * g.nodes[i]);
        sum.add(0.5 * h * s);
    }
    return sum.value();
}

// Integral of a nonnegative integrand whose maximum is about 1, to relative ~1e-13.
double positive_integral(const std::function<double(double)>& f, double a, double b) {
    const double rough = integrate_adaptive(f, a, b, 1e-8, 40000).value;
    if (rough == 0.0) return 0.0;
    try {
        return integrate_adaptive(f, a, b, 1e-14 * std::abs(rough), 40000).value;
    } catch (const AccuracyError& e) {
        // rounding floors the error estimate; accept anything within 1e-12
        if (e.error_estimate() <= 1e-12 * std::abs(rough)) return e.best_estimate();
        throw;
    }
}

// t - sin t without cancellation.
double t_minus_sin(double t) {
    if (std::abs(t) < 0.1) {
        const double t2 = t * t;
        return t * t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0)));
    }
    return t - std::sin(t);
}

// Contour data for x <= rho: cosh s(t) = rho t / (x sin t). Returns x sinh s cos t - rho s.
double descent_phase(double rho, double x, double t) {
    double delta;  // cosh s - 1
    if (t == 0.0) {
        delta = (rho - x) / x;
    } else {
        delta = ((rho - x) * t + x * t_minus_sin(t)) / (x * std::sin(t));
    }
    const double root = std::sqrt(delta * (2.0 + delta));  // sinh s
    const double s = delta > 1e8 ? std::log(2.0 * (1.0 + delta)) : std::log1p(delta + root);
    return x * root * std::cos(t) - rho * s;
}

LogScaleReal j_descent(double rho, double x) {
    const double phi0 = descent_phase(rho, x, 0.0);
    auto g = [&](double t) {
        if (t >= kPi) return 0.0;
        return std::exp(descent_phase(rho, x, t) - phi0);
    };
    const double integral = positive_integral(g, 0.0, kPi) / kPi;
    return LogScaleReal::from_log(phi0 + std::log(integral), 1);
}

long oscillation_panels(double omega) { return static_cast<long>(std::ceil(omega / 2.0)) + 8; }

// First t > peak where log_f has dropped by `drop` below log_f(peak); log_f must decrease past the peak.
double cutoff(const std::function<double(double)>& log_f, double peak, double drop) {
    const double top = log_f(peak);
    double step = 1e-6 * std::max(1.0, peak);
    while (log_f(peak + step) - top > -drop) step *= 2.0;
    double lo = peak + 0.5 * step, hi = peak + step;
    if (step <= 1e-6 * std::max(1.0, peak)) lo = peak;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (log_f(mid) - top > -drop ? lo : hi) = mid;
    }
    return hi;
}

// Integral over [0, infinity) of exp(log_f(t) - log_f(peak)), with log_f unimodal around peak.
double peaked_integral(const std::function<double(double)>& log_f, double peak) {
    const double top = log_f(peak);
    auto g = [&](double t) { return std::exp(log_f(t) - top); };
    const double upper = cutoff(log_f, peak, 60.0);
    double total = 0.0;
    if (peak > 0.0) total += positive_integral(g, 0.0, peak);
    total += positive_integral(g, peak, upper);
    return total;
}

// Integral over [0, infinity) of e^{-x sinh t - rho t}.
double sinh_tail(double x, double rho) {
    return peaked_integral([&](double t) { return -x * std::sinh(t) - rho * t; }, 0.0);
}

double j_bessel_integral(double rho, double x) {
    const double first =
        composite_gl([&](double t) { return std::cos(rho * t - x * std::sin(t)); }, 0.0, kPi,
                     oscillation_panels(rho + x)) /
        kPi;
    const double sp = sin_pi(rho);
    if (sp == 0.0) return first;
    return first - sp / kPi * sinh_tail(x, rho);
}

double y_integral(double rho, double x) {
    const double first =
        composite_gl([&](double t) { return std::sin(x * std::sin(t) - rho * t); }, 0.0, kPi,
                     oscillation_panels(rho + x)) /
        kPi;
    // (e^{rho t} + e^{-rho t} cos(rho pi)) e^{-x sinh t}; the first part peaks at cosh t = rho / x.
    const double tpk = rho > x ? std::acosh(rho / x) : 0.0;
    auto log_a = [&](double t) { return rho * t - x * std::sinh(t); };
    const double top = log_a(tpk);
    const double a = peaked_integral(log_a, tpk);
    const double cp = cos_pi(rho);
    const double b = cp != 0.0 ? sinh_tail(x, rho) : 0.0;
    return first - (std::exp(top) * a + cp * b) / kPi;
}

LogScaleReal k_integral(double rho, double x) {
    auto ell = [&](double t) {
        return -x * (std::cosh(t) - 1.0) + rho * t + std::log1p(std::exp(-2.0 * rho * t)) - std::log(2.0);
    };
    const double tpk = std::asinh(rho / x);
    const double top = ell(tpk);
    const double integral = peaked_integral(ell, tpk);
    return LogScaleReal::from_log(top - x + std::log(integral), 1);
}

double i_integral_scaled(double rho, double x) {
    // e^{-x} I_rho(x)
    const long panels = oscillation_panels(rho) + static_cast<long>(std::ceil(4.0 * std::sqrt(x)));
    const double first =
        composite_gl([&](double t) { return std::exp(x * (std::cos(t) - 1.0)) * std::cos(rho * t); }, 0.0,
                     kPi, panels) /
        kPi;
    const double sp = sin_pi(rho);
    if (sp == 0.0) return first;
    const double tail =
        peaked_integral([&](double t) { return -x * (std::cosh(t) - 1.0) - rho * t; }, 0.0) * std::exp(-2.0 * x);
    return first - sp / kPi * tail;
}

void check_args(double rho, double x) {
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("bessel_ref: order must be finite and >= 0");
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("bessel_ref: argument must be finite and >= 0");
}

}  // namespace

LogScaleReal bessel_ref_scaled(BesselKind kind, double rho, double x) {
    check_args(rho, x);
    switch (kind) {
        case BesselKind::J:
            if (x == 0.0) return LogScaleReal::from_double(rho == 0.0 ? 1.0 : 0.0);
            if (x <= rho) return j_descent(rho, x);
            return LogScaleReal::from_double(j_bessel_integral(rho, x));
        case BesselKind::K:
            if (x == 0.0) throw SingularPointError("bessel_ref: K has a pole at x = 0");
            return k_integral(rho, x);
        case BesselKind::I:
            if (x == 0.0) return LogScaleReal::from_double(rho == 0.0 ? 1.0 : 0.0);
            return LogScaleReal::from_double(i_integral_scaled(rho, x)) * LogScaleReal::from_log(x, 1);
        case BesselKind::Y:
            if (x == 0.0) throw SingularPointError("bessel_ref: Y has a pole at x = 0");
            return LogScaleReal::from_double(y_integral(rho, x));
    }
    throw DomainError("bessel_ref: unknown kind");
}

double bessel_ref(BesselKind kind, double rho, double x) { return bessel_ref_scaled(kind, rho, x).to_double(); }

}  // namespace suplab
