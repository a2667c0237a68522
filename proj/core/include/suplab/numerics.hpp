#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace suplab {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Argument in (-pi, pi]. The negative real axis maps to +pi regardless of
/// the sign of a zero imaginary part.
double principal_arg(Complex w);

/// log|w| + i arg(w) with the principal argument above.
Complex principal_log(Complex w);

/// w^k := exp(k log w). Zero base: returns 0 for k > 0, throws DomainError for k <= 0.
Complex principal_pow(Complex w, double k);

/// exp(2 pi i t), exact on the lattice of quarter turns.
Complex unit_phase(double turns);

/// Real number carried as sign * exp(log_abs). Products and quotients never
/// overflow for the magnitudes met here (y^k, Gamma(k), (4 pi m)^k for k up to 1e4).
class LogScaleReal {
public:
    constexpr LogScaleReal() = default;

    static LogScaleReal from_double(double v);
    static LogScaleReal from_log(double log_abs, int sign = 1);
    static LogScaleReal zero() { return {}; }

    int sign() const noexcept { return sign_; }
    double log_abs() const noexcept { return log_abs_; }
    bool is_zero() const noexcept { return sign_ == 0; }

    /// Exponentiates; underflows to 0 and overflows to +-inf like any double.
    double to_double() const;

    LogScaleReal pow(double e) const;
    LogScaleReal abs() const { return sign_ == 0 ? *this : from_log(log_abs_, 1); }

    friend LogScaleReal operator*(LogScaleReal a, LogScaleReal b);
    friend LogScaleReal operator/(LogScaleReal a, LogScaleReal b);
    friend LogScaleReal operator+(LogScaleReal a, LogScaleReal b);
    friend LogScaleReal operator-(LogScaleReal a) { a.sign_ = -a.sign_; return a; }
    friend LogScaleReal operator-(LogScaleReal a, LogScaleReal b) { return a + (-b); }
    LogScaleReal& operator*=(LogScaleReal o) { return *this = *this * o; }
    LogScaleReal& operator+=(LogScaleReal o) { return *this = *this + o; }

    friend bool operator<(LogScaleReal a, LogScaleReal b);

private:
    int sign_ = 0;
    double log_abs_ = 0.0;
};

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// Fixed-shape pairwise reduction; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);
Complex pairwise_sum(std::span<const Complex> values);

/// Sum of doubles accumulated in a fixed order with Neumaier compensation.
class CompensatedSum {
public:
    void add(double v);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// sum over n >= 0 of (x0 + n)^alpha e^{-beta (x0 + n)} for alpha >= 0, beta > 0, x0 > 0, to
/// relative 1e-15 with a geometric closure of the tail.
LogScaleReal exp_power_sum(double alpha, double beta, double x0);

class CompensatedComplexSum {
public:
    void add(Complex v) { re_.add(v.real()); im_.add(v.imag()); }
    Complex value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

}  // namespace suplab
