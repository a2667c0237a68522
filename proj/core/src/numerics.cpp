#include "suplab/numerics.hpp"

#include <algorithm>
#include <limits>

#include "suplab/errors.hpp"

namespace suplab {

double principal_arg(Complex w) {
    if (w.imag() == 0.0 && w.real() < 0.0) return kPi;
    return std::atan2(w.imag(), w.real());
}

Complex principal_log(Complex w) {
    return {std::log(std::abs(w)), principal_arg(w)};
}

Complex principal_pow(Complex w, double k) {
    if (w == Complex{0.0, 0.0}) {
        if (k > 0.0) return {0.0, 0.0};
        throw DomainError("principal_pow: zero base with non-positive exponent");
    }
    if (k == 0.0) return {1.0, 0.0};
    const Complex l = principal_log(w);
    return std::exp(k * l);
}

Complex unit_phase(double turns) {
    double t = turns - std::floor(turns);
    const double q = 4.0 * t;
    if (q == std::floor(q)) {
        switch (static_cast<int>(q)) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            case 3: return {0.0, -1.0};
            default: break;
        }
    }
    if (t > 0.5) t -= 1.0;
    return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
}

LogScaleReal LogScaleReal::from_double(double v) {
    LogScaleReal r;
    if (v == 0.0) return r;
    r.sign_ = v > 0 ? 1 : -1;
    r.log_abs_ = std::log(std::abs(v));
    return r;
}

LogScaleReal LogScaleReal::from_log(double log_abs, int sign) {
    LogScaleReal r;
    if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return r;
    r.sign_ = sign > 0 ? 1 : -1;
    r.log_abs_ = log_abs;
    return r;
}

double LogScaleReal::to_double() const {
    if (sign_ == 0) return 0.0;
    return sign_ * std::exp(log_abs_);
}

LogScaleReal LogScaleReal::pow(double e) const {
    if (sign_ == 0) {
        if (e > 0) return {};
        throw DomainError("LogScaleReal::pow: zero to a non-positive power");
    }
    if (sign_ < 0) throw DomainError("LogScaleReal::pow: negative base");
    return from_log(e * log_abs_, 1);
}

LogScaleReal operator*(LogScaleReal a, LogScaleReal b) {
    if (a.sign_ == 0 || b.sign_ == 0) return {};
    return LogScaleReal::from_log(a.log_abs_ + b.log_abs_, a.sign_ * b.sign_);
}

LogScaleReal operator/(LogScaleReal a, LogScaleReal b) {
    if (b.sign_ == 0) throw DomainError("LogScaleReal: division by zero");
    if (a.sign_ == 0) return {};
    return LogScaleReal::from_log(a.log_abs_ - b.log_abs_, a.sign_ * b.sign_);
}

LogScaleReal operator+(LogScaleReal a, LogScaleReal b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    if (a.log_abs_ < b.log_abs_) std::swap(a, b);
    const double ratio = std::exp(b.log_abs_ - a.log_abs_);
    const double factor = a.sign_ == b.sign_ ? 1.0 + ratio : 1.0 - ratio;
    if (factor == 0.0) return {};
    return LogScaleReal::from_log(a.log_abs_ + std::log1p(a.sign_ == b.sign_ ? ratio : -ratio), a.sign_);
}

bool operator<(LogScaleReal a, LogScaleReal b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    if (a.sign_ == 0) return false;
    return a.sign_ > 0 ? a.log_abs_ < b.log_abs_ : a.log_abs_ > b.log_abs_;
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
    return std::lgamma(x);
}

namespace {

template <typename T>
T pairwise_impl(std::span<const T> v) {
    if (v.size() <= 8) {
        T s{};
        for (const T& x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_impl(v.subspan(0, half)) + pairwise_impl(v.subspan(half));
}

}  // namespace

double pairwise_sum(std::span<const double> values) { return pairwise_impl(values); }
Complex pairwise_sum(std::span<const Complex> values) { return pairwise_impl(values); }

void CompensatedSum::add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
        comp_ += (sum_ - t) + v;
    else
        comp_ += (v - t) + sum_;
    sum_ = t;
}

}  // namespace suplab

namespace suplab {

LogScaleReal exp_power_sum(double alpha, double beta, double x0) {
    if (!(alpha >= 0.0) || !(beta > 0.0) || !(x0 > 0.0)) throw DomainError("exp_power_sum: need alpha >= 0, beta > 0, x0 > 0");
    const auto log_term = [&](double x) { return alpha * std::log(x) - beta * x; };
    const double peak_x = std::max(x0, alpha / beta);
    const double peak = log_term(x0 + std::floor(peak_x - x0));
    const double ref = std::max({peak, log_term(x0 + std::ceil(peak_x - x0)), log_term(x0)});
    CompensatedSum s;
    for (double x = x0;; x += 1.0) {
        const double lt = log_term(x);
        s.add(std::exp(lt - ref));
        if (x >= alpha / beta) {
            // later terms shrink at least by rho per step
            const double log_rho = alpha * std::log1p(1.0 / x) - beta;
            if (log_rho < 0.0) {
                const double tail = std::exp(lt - ref + log_rho) / -std::expm1(log_rho);
                if (tail <= 1e-17 * s.value()) {
                    s.add(tail);
                    break;
                }
            }
        }
    }
    return LogScaleReal::from_log(ref + std::log(s.value()));
}

}  // namespace suplab
