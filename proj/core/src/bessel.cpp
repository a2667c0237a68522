#include "suplab/bessel.hpp"

#include <math.h>  // lgamma_r

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "suplab/errors.hpp"

namespace suplab {
namespace {

constexpr double kEps = 1e-16;
constexpr double kFpMin = 1e-300;
constexpr double kEulerGamma = 0.57721566490153286061;

// log|Gamma(v)| and its sign; v must not be a non-positive integer.
double lgamma_signed(double v, int& sign) {
    int s = 1;
    const double l = ::lgamma_r(v, &s);
    sign = s;
    return l;
}

// ---------------------------------------------------------------------------------------
// Power series

// Double-double arithmetic (error-free transformations), enough for the series to survive
// cancellation factors near 1e22.
struct DD {
    double hi = 0.0, lo = 0.0;
};

DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    DD t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return two_sum(s.hi, s.lo);
}

DD dd_mul(DD a, DD b) {
    const double p = a.hi * b.hi;
    const double e = std::fma(a.hi, b.hi, -p);
    return two_sum(p, e + (a.hi * b.lo + a.lo * b.hi));
}

DD dd_div(DD a, DD b) {
    const double q1 = a.hi / b.hi;
    const DD r = dd_add(a, dd_mul({-q1, 0.0}, b));
    const double q2 = r.hi / b.hi;
    const DD r2 = dd_add(r, dd_mul({-q2, 0.0}, b));
    const double q3 = r2.hi / b.hi;
    return dd_add(two_sum(q1, q2), {q3, 0.0});
}

DD dd_scale(DD a, int e) { return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)}; }

struct SeriesSum {
    LogScaleReal value;
    LogScaleReal first_omitted;  // |t_n|
    LogScaleReal abs_sum;        // sum of |t_m| over the included terms
    double next_ratio = 0.0;     // |t_{n+1} / t_n|
};

// Sum of t_m for m < terms (terms <= 0: until converged), t_m = s^m (x/2)^{2m+rho} / (m! Gamma(m+rho+1)),
// s = -1 for J and +1 for I. Terms relative to t_0 are accumulated in double-double with
// power-of-two rescaling; t_0 itself is carried in log-scale.
SeriesSum series_sum(int s, double rho, double x, int terms) {
    if (rho < 0.0 && rho == std::floor(rho))
        throw DomainError("bessel_series: negative integer order is not supported");
    SeriesSum out;
    if (x == 0.0) {
        if (rho == 0.0) {
            out.value = LogScaleReal::from_double(1.0);
            out.abs_sum = out.value;
        } else if (rho < 0.0) {
            throw SingularPointError("bessel_series: negative order at x = 0");
        }
        return out;
    }
    int gsign = 1;
    const double log_t0 = rho * std::log(0.5 * x) - lgamma_signed(rho + 1.0, gsign);
    const DD half_x = {0.5 * x, 0.0};
    DD q = dd_mul(half_x, half_x);
    if (s < 0) q = {-q.hi, -q.lo};
    const double qa = 0.25 * x * x;
    const bool adaptive = terms <= 0;
    const int limit = adaptive ? 200000 : terms;

    int exp2 = 0;  // sum = 2^exp2 * acc * t_0
    DD rel{static_cast<double>(gsign), 0.0};
    DD acc{};
    DD abs_acc{};
    int m = 0;
    for (; m < limit; ++m) {
        if (m > 0) {
            const DD denom = dd_mul({static_cast<double>(m), 0.0}, two_sum(static_cast<double>(m), rho));
            rel = dd_div(dd_mul(rel, q), denom);
            if (std::abs(rel.hi) > 0x1p600) {
                rel = dd_scale(rel, -600);
                acc = dd_scale(acc, -600);
                abs_acc = dd_scale(abs_acc, -600);
                exp2 += 600;
            }
        }
        acc = dd_add(acc, rel);
        abs_acc = dd_add(abs_acc, {std::abs(rel.hi), 0.0});
        if (adaptive && m > 0 && m + rho > 0 && qa / ((m + 1.0) * (m + 1.0 + rho)) < 0.5 &&
            std::abs(rel.hi) <= 1e-33 * std::abs(abs_acc.hi))
            break;
        if (rel.hi == 0.0 && m > 0) break;
    }
    const int n = adaptive ? m + 1 : m;
    const double next_rel = rel.hi * qa / (static_cast<double>(n) * std::abs(n + rho));
    const LogScaleReal scale = LogScaleReal::from_log(log_t0 + exp2 * std::log(2.0), 1);
    out.value = LogScaleReal::from_double(acc.hi + acc.lo) * scale;
    out.first_omitted = LogScaleReal::from_double(std::abs(next_rel)) * scale;
    out.abs_sum = LogScaleReal::from_double(abs_acc.hi) * scale;
    out.next_ratio = qa / ((n + 1.0) * std::abs(n + 1.0 + rho));
    return out;
}

// ---------------------------------------------------------------------------------------
// Temme / Steed evaluation of J and Y (after the classical bessjy scheme), with the
// downward recurrence rescaled so J may be far below the double range.

// gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu), gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
    gampl = 1.0 / std::tgamma(1.0 + mu);
    gammi = 1.0 / std::tgamma(1.0 - mu);
    if (std::abs(mu) <= 1e-2) {
        // 1/Gamma(1+z) = 1 + c2 z + c3 z^2 + ...; gam1 collects the odd part.
        static constexpr double c[] = {kEulerGamma,          -0.6558780715202538, -0.0420026350340952,
                                       0.1665386113822915,  -0.0421977345555443, -0.0096219715278770,
                                       0.0072189432466630,  -0.0011651675918591};
        const double m2 = mu * mu;
        gam1 = -(c[0] + m2 * (c[2] + m2 * (c[4] + m2 * c[6])));
    } else {
        gam1 = (gammi - gampl) / (2.0 * mu);
    }
    gam2 = 0.5 * (gammi + gampl);
}

struct JY {
    LogScaleReal j;
    double y;
};

JY temme_jy(double nu, double x) {
    constexpr double xmin = 2.0;
    const long maxit = 100000 + static_cast<long>(4.0 * x);
    const int nl = x < xmin ? static_cast<int>(nu + 0.5) : std::max(0, static_cast<int>(nu - x + 1.5));
    const double xmu = nu - nl, xmu2 = xmu * xmu;
    const double xi = 1.0 / x, xi2 = 2.0 * xi, w = xi2 / kPi;

    // CF1: J'_nu / J_nu by modified Lentz
    int isign = 1;
    double h = std::max(nu * xi, kFpMin);
    double b = xi2 * nu, d = 0.0, c = h;
    long i = 0;
    for (; i < maxit; ++i) {
        b += xi2;
        d = b - d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = b - 1.0 / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = c * d;
        h *= del;
        if (d < 0.0) isign = -isign;
        if (std::abs(del - 1.0) < kEps) break;
    }
    if (i >= maxit) throw AccuracyError("bessel_j: continued fraction did not converge", 0.0, 1.0);

    // Downward recurrence from nu to mu on unnormalised values. Values grow going down;
    // log_scale tracks the factors removed to stay in range.
    const double rjl1 = isign * 1e-30;
    double rjl = rjl1, rjpl = h * rjl;
    double log_scale = 0.0;
    double fact = nu * xi;
    for (int l = nl - 1; l >= 0; --l) {
        const double t = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * t - rjl;
        rjl = t;
        if (std::abs(rjl) > 1e250) {
            rjl *= 1e-250;
            rjpl *= 1e-250;
            log_scale += 250.0 * std::log(10.0);
        }
    }
    if (rjl == 0.0) rjl = kEps;
    const double f = rjpl / rjl;

    double rjmu, rymu, ry1;
    if (x < xmin) {
        const double x2 = 0.5 * x, pimu = kPi * xmu;
        const double fct = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
        double dd = -std::log(x2);
        double e = xmu * dd;
        const double fct2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
        double gam1, gam2, gampl, gammi;
        temme_gammas(xmu, gam1, gam2, gampl, gammi);
        double ff = 2.0 / kPi * fct * (gam1 * std::cosh(e) + gam2 * fct2 * dd);
        e = std::exp(e);
        double p = e / (gampl * kPi);
        double q = 1.0 / (e * kPi * gammi);
        const double pimu2 = 0.5 * pimu;
        const double fct3 = std::abs(pimu2) < kEps ? 1.0 : std::sin(pimu2) / pimu2;
        const double r = kPi * pimu2 * fct3 * fct3;
        double cc = 1.0;
        dd = -x2 * x2;
        double sum = ff + r * q, sum1 = p;
        for (i = 1; i < maxit; ++i) {
            ff = (i * ff + p + q) / (static_cast<double>(i) * i - xmu2);
            cc *= dd / static_cast<double>(i);
            p /= (i - xmu);
            q /= (i + xmu);
            const double del = cc * (ff + r * q);
            sum += del;
            const double del1 = cc * p - i * del;
            sum1 += del1;
            if (std::abs(del) < (1.0 + std::abs(sum)) * kEps) break;
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        const double rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        // CF2 (Steed) for p + i q
        double a = 0.25 - xmu2, p = -0.5 * xi, q = 1.0;
        const double br = 2.0 * x;
        double bi = 2.0;
        double fct = a * xi / (p * p + q * q);
        double cr = br + q * fct, ci = bi + p * fct;
        double den = br * br + bi * bi;
        double dr = br / den, di = -bi / den;
        double dlr = cr * dr - ci * di, dli = cr * di + ci * dr;
        double temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        for (i = 1; i < maxit; ++i) {
            a += 2.0 * i;
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if (std::abs(dr) + std::abs(di) < kFpMin) dr = kFpMin;
            fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if (std::abs(cr) + std::abs(ci) < kFpMin) cr = kFpMin;
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (std::abs(dlr - 1.0) + std::abs(dli) < kEps) break;
        }
        if (i >= maxit) throw AccuracyError("bessel_j: CF2 did not converge", 0.0, 1.0);
        const double gam = (p - f) / q;
        rjmu = std::sqrt(w / ((p - f) * gam + q));
        rjmu = std::copysign(rjmu, rjl);
        rymu = rjmu * gam;
        const double rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    JY out;
    // J_nu = rjl1 * rjmu / (rjl * e^{log_scale})
    out.j = LogScaleReal::from_double(rjl1) * LogScaleReal::from_double(rjmu) /
            (LogScaleReal::from_double(rjl) * LogScaleReal::from_log(log_scale, 1));
    for (int k = 1; k <= nl; ++k) {
        const double t = (xmu + k) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = t;
    }
    out.y = rymu;
    return out;
}

// ---------------------------------------------------------------------------------------
// Temme evaluation of I and K (classical bessik scheme).

struct IK {
    double i;
    double k;
};

IK temme_ik(double nu, double x) {
    constexpr double xmin = 2.0;
    const long maxit = 100000 + static_cast<long>(4.0 * x);
    const int nl = static_cast<int>(nu + 0.5);
    const double xmu = nu - nl, xmu2 = xmu * xmu;
    const double xi = 1.0 / x, xi2 = 2.0 * xi;
    double h = std::max(nu * xi, kFpMin);
    double b = xi2 * nu, d = 0.0, c = h;
    long i = 0;
    for (; i < maxit; ++i) {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    if (i >= maxit) throw AccuracyError("bessel_ik: continued fraction did not converge", 0.0, 1.0);
    double ril = 1e-30, ripl = h * ril;
    const double ril1 = ril;
    double log_scale = 0.0;
    double fct = nu * xi;
    for (int l = nl - 1; l >= 0; --l) {
        const double t = fct * ril + ripl;
        fct -= xi;
        ripl = fct * t + ril;
        ril = t;
        if (std::abs(ril) > 1e250) {
            ril *= 1e-250;
            ripl *= 1e-250;
            log_scale += 250.0 * std::log(10.0);
        }
    }
    const double f = ripl / ril;
    double rkmu, rk1;
    if (x < xmin) {
        const double x2 = 0.5 * x, pimu = kPi * xmu;
        const double f1 = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
        double dd = -std::log(x2);
        double e = xmu * dd;
        const double f2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
        double gam1, gam2, gampl, gammi;
        temme_gammas(xmu, gam1, gam2, gampl, gammi);
        double ff = f1 * (gam1 * std::cosh(e) + gam2 * f2 * dd);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / gampl, q = 0.5 / (e * gammi), cc = 1.0;
        dd = x2 * x2;
        double sum1 = p;
        for (i = 1; i < maxit; ++i) {
            ff = (i * ff + p + q) / (static_cast<double>(i) * i - xmu2);
            cc *= dd / static_cast<double>(i);
            p /= (i - xmu);
            q /= (i + xmu);
            const double del = cc * ff;
            sum += del;
            sum1 += cc * (p - i * ff);
            if (std::abs(del) < std::abs(sum) * kEps) break;
        }
        rkmu = sum;
        rk1 = sum1 * xi2;
    } else {
        double bb = 2.0 * (1.0 + x), dd = 1.0 / bb, hh = dd, delh = dd, q1 = 0.0, q2 = 1.0;
        const double a1 = 0.25 - xmu2;
        double q = a1, cc = a1, a = -a1, s = 1.0 + q * delh;
        for (i = 1; i < maxit; ++i) {
            a -= 2.0 * i;
            cc = -a * cc / (i + 1.0);
            const double qnew = (q1 - bb * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += cc * qnew;
            bb += 2.0;
            dd = 1.0 / (bb + a * dd);
            delh = (bb * dd - 1.0) * delh;
            hh += delh;
            const double dels = q * delh;
            s += dels;
            if (std::abs(dels / s) < kEps) break;
        }
        hh = a1 * hh;
        rkmu = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
        rk1 = rkmu * (xmu + x + 0.5 - hh) * xi;
    }
    const double rkmup = xmu * xi * rkmu - rk1;
    const double rimu = xi / (f * rkmu - rkmup);
    IK out;
    out.i = rimu * ril1 / ril * std::exp(-log_scale);
    for (int k = 1; k <= nl; ++k) {
        const double t = (xmu + k) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = t;
    }
    out.k = rkmu;
    return out;
}

void check_order_arg(double rho, double x, const char* who) {
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError(std::string(who) + ": order must be >= 0");
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError(std::string(who) + ": argument must be >= 0");
}

// w - arctan w and artanh w - w without cancellation.
double w_minus_atan(double w) {
    if (w < 0.1) {
        const double w2 = w * w;
        double s = 0.0, p = w * w2;
        for (int n = 1; n < 12; ++n) {
            s += ((n % 2) ? 1.0 : -1.0) * p / (2 * n + 1);
            p *= w2;
        }
        return s;
    }
    return w - std::atan(w);
}

double atanh_minus_w(double w) {
    if (w < 0.1) {
        const double w2 = w * w;
        double s = 0.0, p = w * w2;
        for (int n = 1; n < 12; ++n) {
            s += p / (2 * n + 1);
            p *= w2;
        }
        return s;
    }
    return std::atanh(w) - w;
}

}  // namespace

// -------------------------------------------------------------------------------------------

SeriesResult bessel_series(BesselKind kind, double rho, double x, int terms) {
    if (kind != BesselKind::J && kind != BesselKind::I)
        throw DomainError("bessel_series: only J and I have a power series here");
    if (terms < 1) throw DomainError("bessel_series: terms must be >= 1");
    if (!(x >= 0.0)) throw DomainError("bessel_series: argument must be >= 0");
    const SeriesSum s = series_sum(kind == BesselKind::J ? -1 : 1, rho, x, terms);
    SeriesResult r;
    r.scaled = s.value;
    r.value = s.value.to_double();
    // t_0 carries a relative error of a few ulps of its logarithm; the summation itself is
    // double-double, so its error is negligible next to 1e-31 of the absolute sum.
    const double log_err = 4e-16 * std::max(1.0, std::abs(r.scaled.log_abs()));
    r.rounding_bound = log_err * std::abs(r.value) + 1e-31 * s.abs_sum.to_double();
    const double omitted = s.first_omitted.to_double();
    const bool decreasing = s.next_ratio < 1.0 && terms + rho > 0.0;
    if (kind == BesselKind::J && rho >= 0.0)
        r.error_bound = decreasing ? omitted : std::numeric_limits<double>::infinity();
    else
        r.error_bound = decreasing ? omitted / (1.0 - s.next_ratio) : std::numeric_limits<double>::infinity();
    return r;
}

LogScaleReal bessel_j_scaled(double rho, double x) {
    check_order_arg(rho, x, "bessel_j");
    if (x == 0.0) return LogScaleReal::from_double(rho == 0.0 ? 1.0 : 0.0);
    if (rho >= 2.0 * x * x) return series_sum(-1, rho, x, 0).value;
    return temme_jy(rho, x).j;
}

double bessel_j(double rho, double x) { return bessel_j_scaled(rho, x).to_double(); }

double bessel_y(double rho, double x) {
    check_order_arg(rho, x, "bessel_y");
    if (x == 0.0) throw SingularPointError("bessel_y: pole at x = 0");
    return temme_jy(rho, x).y;
}

double bessel_k(double rho, double x) {
    check_order_arg(rho, x, "bessel_k");
    if (x == 0.0) throw SingularPointError("bessel_k: pole at x = 0");
    return temme_ik(rho, x).k;
}

LogScaleReal bessel_i_scaled(double rho, double x) {
    check_order_arg(rho, x, "bessel_i");
    return series_sum(1, rho, x, 0).value;
}

double bessel_i(double rho, double x) { return bessel_i_scaled(rho, x).to_double(); }

namespace {

double near_integer_average(double rho, const std::function<double(double)>& f) {
    const double frac = rho - std::round(rho);
    if (std::abs(frac) > 1e-6) return f(rho);
    const double r0 = std::round(rho);
    return 0.5 * (f(r0 - 1e-6) + f(r0 + 1e-6));
}

}  // namespace

double bessel_y_combination(double rho, double x) {
    check_order_arg(rho, x, "bessel_y_combination");
    if (x == 0.0) throw SingularPointError("bessel_y_combination: pole at x = 0");
    auto f = [x](double r) {
        const double jp = series_sum(-1, r, x, 0).value.to_double();
        const double jm = series_sum(-1, -r, x, 0).value.to_double();
        return (jp * std::cos(r * kPi) - jm) / std::sin(r * kPi);
    };
    return near_integer_average(rho, f);
}

double bessel_k_combination(double rho, double x) {
    check_order_arg(rho, x, "bessel_k_combination");
    if (x == 0.0) throw SingularPointError("bessel_k_combination: pole at x = 0");
    auto f = [x](double r) {
        const double ip = series_sum(1, r, x, 0).value.to_double();
        const double im = series_sum(1, -r, x, 0).value.to_double();
        return 0.5 * kPi * (im - ip) / std::sin(r * kPi);
    };
    return near_integer_average(rho, f);
}

LangerResult bessel_langer(double rho, double x) {
    if (!(rho >= 1.0)) throw DomainError("bessel_langer: order must be >= 1");
    if (!(x >= 0.0)) throw DomainError("bessel_langer: argument must be >= 0");
    if (x == rho) throw SingularPointError("bessel_langer: turning point x = rho");
    LangerResult r;
    if (x > rho) {
        const double w = std::sqrt((x / rho) * (x / rho) - 1.0);
        const double g = w_minus_atan(w);
        r.w = w;
        r.z = rho * g;
        const JY jy = temme_jy(1.0 / 3.0, r.z);
        r.value = std::sqrt(g / w) * (std::sqrt(3.0) / 2.0 * jy.j.to_double() - 0.5 * jy.y);
    } else {
        if (x == 0.0) {
            r.w = 1.0;
            r.z = std::numeric_limits<double>::infinity();
            r.value = 0.0;
            return r;
        }
        const double w = std::sqrt(1.0 - (x / rho) * (x / rho));
        const double g = atanh_minus_w(w);
        r.w = w;
        r.z = rho * g;
        r.value = r.z > 700.0 ? 0.0 : std::sqrt(g / w) / kPi * temme_ik(1.0 / 3.0, r.z).k;
    }
    return r;
}

// -------------------------------------------------------------------------------------------
// Regimes

const char* to_string(BesselRegime r) {
    switch (r) {
        case BesselRegime::SeriesSmall: return "SeriesSmall";
        case BesselRegime::DecaySmall: return "DecaySmall";
        case BesselRegime::GapSmall: return "GapSmall";
        case BesselRegime::Transition: return "Transition";
        case BesselRegime::Oscillatory: return "Oscillatory";
        case BesselRegime::FarOscillatory: return "FarOscillatory";
    }
    return "?";
}

const char* to_string(BesselBound b) {
    switch (b) {
        case BesselBound::LargeArgument: return "large_argument";
        case BesselBound::TurningPoint: return "turning_point";
        case BesselBound::VerySmall: return "very_small";
        case BesselBound::Small: return "small";
        case BesselBound::GapSmall: return "gap_small";
        case BesselBound::Large: return "large";
    }
    return "?";
}

namespace {

// Langer z for x < rho.
double langer_z_below(double rho, double x) {
    const double w = std::sqrt(1.0 - (x / rho) * (x / rho));
    return rho * atanh_minus_w(w);
}

double decay_edge(double rho, double c_prime, double log_exponent) {
    return rho - c_prime * std::cbrt(rho) * std::pow(std::max(std::log(rho), 0.0), log_exponent);
}

}  // namespace

double calibrate_c_prime(double rho_max, double log_exponent) {
    if (!(rho_max >= 2.0)) throw DomainError("calibrate_c_prime: rho_max must be >= 2");
    double best = 0.0;
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
        const double rho = 2.0 * std::pow(rho_max / 2.0, static_cast<double>(i) / n);
        const double target = std::log(rho);
        auto ok = [&](double cp) {
            const double x = decay_edge(rho, cp, log_exponent);
            return x <= 0.0 || langer_z_below(rho, x) >= target;
        };
        double lo = 0.0, hi = 1.0;
        while (!ok(hi)) hi *= 2.0;
        while (hi - lo > 1e-7) {
            const double mid = 0.5 * (lo + hi);
            (ok(mid) ? hi : lo) = mid;
        }
        best = std::max(best, hi);
    }
    return std::ceil(best * 1e6) / 1e6;
}

const RegimeThresholds& RegimeThresholds::standard() {
    static const RegimeThresholds t = [] {
        RegimeThresholds r;
        r.c_prime = calibrate_c_prime(500.0);
        return r;
    }();
    return t;
}

const RegimeThresholds& RegimeThresholds::widened() {
    static const RegimeThresholds t = [] {
        RegimeThresholds r;
        r.log_exponent = 2.0 / 3;
        r.c_prime = calibrate_c_prime(500.0, r.log_exponent);
        return r;
    }();
    return t;
}

BesselRegime classify(double rho, double x, const RegimeThresholds& t) {
    check_order_arg(rho, x, "classify");
    if (rho >= 2.0 * x * x) return BesselRegime::SeriesSmall;
    const double r3 = std::cbrt(rho);
    const double d = x - rho;
    if (std::abs(d) <= t.c * r3) return BesselRegime::Transition;
    if (d > 0.0) return d >= t.c * std::pow(rho, t.alpha) ? BesselRegime::FarOscillatory : BesselRegime::Oscillatory;
    const double log_part = std::pow(std::max(std::log(rho), 0.0), t.log_exponent);
    const double edge = rho - std::max(t.c, t.c_prime * log_part) * r3;
    return x <= edge ? BesselRegime::DecaySmall : BesselRegime::GapSmall;
}

// -------------------------------------------------------------------------------------------
// Certification

namespace {

double log_envelope(BesselBound b, double rho, double x, const RegimeThresholds& t) {
    switch (b) {
        case BesselBound::LargeArgument: return -0.5 * std::log(x);
        case BesselBound::TurningPoint:
        case BesselBound::GapSmall: return -std::log(rho) / 3.0;
        case BesselBound::VerySmall: return rho * std::log(0.5 * x) - std::lgamma(rho + 1.0);
        case BesselBound::Small: return -4.0 * std::log(rho) / 3.0;
        case BesselBound::Large: {
            const double a = t.alpha;
            if (a <= 1.0) return -(a + 1.0) / 4.0 * std::log(rho);
            if (a <= 8.0 / 3.0) return -a / 2.0 * std::log(rho);
            return -4.0 * std::log(rho) / 3.0;
        }
    }
    return 0.0;
}

}  // namespace

double bessel_envelope(BesselBound b, double rho, double x, const RegimeThresholds& t) {
    return std::exp(log_envelope(b, rho, x, t));
}

ScanReport certify_regime_bounds(BesselBound bound, const std::vector<double>& rho_grid,
                                 const RegimeSampler& sampler, const RegimeThresholds& t) {
    if (rho_grid.empty()) throw DomainError("certify_regime_bounds: empty order grid");
    ScanReport rep(std::string("bessel_") + to_string(bound));
    std::vector<std::pair<double, double>> trend;
    for (double rho : rho_grid) {
        double mx = 0.0;
        for (double x : sampler(rho)) {
            const LogScaleReal j = bessel_j_scaled(rho, x);
            const double le = log_envelope(bound, rho, x, t);
            BoundCheck row;
            row.name = rep.suite();
            row.k = rho;
            row.x = x;
            row.lhs = std::abs(j.to_double());
            row.envelope = std::exp(le);
            row.ratio = j.is_zero() ? 0.0 : std::exp(j.log_abs() - le);
            row.params["log_lhs"] = j.is_zero() ? -std::numeric_limits<double>::infinity() : j.log_abs();
            row.params["log_envelope"] = le;
            mx = std::max(mx, std::isfinite(row.ratio) ? row.ratio : std::numeric_limits<double>::infinity());
            rep.add(std::move(row));
        }
        trend.emplace_back(rho, mx);
    }
    rep.passed = ratio_stable(trend);
    return rep;
}

RegimeSampler default_sampler(BesselBound b, int points, const RegimeThresholds& t) {
    if (points < 2) throw DomainError("default_sampler: need at least two points");
    auto linspace = [points](double lo, double hi) {
        std::vector<double> v;
        if (!(hi > lo)) return v;
        for (int i = 0; i < points; ++i) v.push_back(lo + (hi - lo) * i / (points - 1));
        return v;
    };
    switch (b) {
        case BesselBound::LargeArgument:
            return [points](double) {
                std::vector<double> v;
                for (int i = 0; i < points; ++i) v.push_back(std::pow(1000.0, static_cast<double>(i) / (points - 1)));
                return v;
            };
        case BesselBound::TurningPoint:
            return [=](double rho) { return linspace(rho - t.c * std::cbrt(rho), rho + t.c * std::cbrt(rho)); };
        case BesselBound::VerySmall:
            return [=](double rho) {
                std::vector<double> v;
                const double hi = std::sqrt(rho / 2.0);
                for (int i = 1; i <= points; ++i) v.push_back(hi * i / points);
                return v;
            };
        case BesselBound::Small:
            return [=](double rho) { return linspace(std::sqrt(rho / 2.0), decay_edge(rho, t.c_prime, t.log_exponent)); };
        case BesselBound::GapSmall:
            return [=](double rho) { return linspace(decay_edge(rho, t.c_prime, t.log_exponent), rho - t.c * std::cbrt(rho)); };
        case BesselBound::Large:
            return [=](double rho) {
                // four local oscillation periods past the band edge
                const double x0 = rho + t.c * std::pow(rho, t.alpha);
                const double period = kTwoPi * x0 / std::sqrt(x0 * x0 - rho * rho);
                return linspace(x0, x0 + 4.0 * period);
            };
    }
    return {};
}

}  // namespace suplab
