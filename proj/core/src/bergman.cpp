#include "suplab/bergman.hpp"

#include <algorithm>
#include <cmath>

#include "suplab/errors.hpp"
#include "suplab/numerics.hpp"
#include "suplab/report.hpp"

namespace suplab {

namespace {

// relative rounding per summed term, covering the power, exponential and series evaluations
constexpr double kRoundingFactor = 64.0 * 2.220446049250313e-16;

// sqrt(pi) Gamma((k - 1) / 2) / Gamma(k / 2) = integral over R of (1 + u^2)^{-k/2} du
double line_integral(double k) { return std::exp(0.5 * std::log(kPi) + log_gamma(0.5 * (k - 1.0)) - log_gamma(0.5 * k)); }

struct RowSum {
    Complex value;
    double tail = 0.0;
};

// sum over x in x0 + N of x^{k-1} e(x tau0 / P), closed by a geometric tail
RowSum translate_series(double k, double x0, Complex tau0, double period) {
    const double beta = kTwoPi * tau0.imag() / period;
    const Complex i2pi(0.0, kTwoPi);
    const Complex step = std::exp(i2pi * tau0 / period);
    Complex phase = std::exp(i2pi * x0 * tau0 / period);
    CompensatedComplexSum s;
    double abs_sum = 0.0;
    for (double x = x0;; x += 1.0) {
        const double mag = std::pow(x, k - 1.0);
        s.add(mag * phase);
        const double term = mag * std::abs(phase);
        abs_sum += term;
        phase *= step;
        if (x >= (k - 1.0) / beta) {
            const double log_rho = (k - 1.0) * std::log1p(1.0 / x) - beta;
            if (log_rho < 0.0) {
                const double tail = term * std::exp(log_rho) / -std::expm1(log_rho);
                if (tail <= 1e-17 * abs_sum || tail == 0.0) return {s.value(), tail};
            }
        }
    }
}

struct KernelSetup {
    double k;
    double period;
    double lambda;  // upsilon(U^P) = e(lambda), lambda in [0, 1)
    double x0;      // smallest positive element of lambda + Z
    double log_prefactor;  // log((4 pi / P)^k / Gamma(k))
};

KernelSetup setup(const MultiplierSystem& sys) {
    const double k = sys.weight();
    const Int p = sys.group().translation_period();
    double lambda = principal_arg(upsilon(sys, GroupElement::U(p))) / kTwoPi;
    if (lambda < 0.0) lambda += 1.0;
    if (lambda < 1e-12 || lambda > 1.0 - 1e-12) lambda = 0.0;
    const double period = static_cast<double>(p);
    return {k, period, lambda, lambda > 0.0 ? lambda : 1.0, k * std::log(4.0 * kPi / period) - log_gamma(k)};
}

// bound on |sum over all translates in the group of one row| per unit |j|^{-k}
double row_bound(const KernelSetup& s, double v) {
    const double lipschitz = s.period * std::exp(s.log_prefactor) *
                             exp_power_sum(s.k - 1.0, kTwoPi * v / s.period, s.x0).to_double();
    const double direct = std::pow(2.0 / v, s.k) * (1.0 + v * line_integral(s.k));
    return std::min(lipschitz, direct);
}

struct Accumulated {
    Complex value;
    double series_tail = 0.0;
    double abs_sum = 0.0;
    std::size_t rows = 0;
};

Accumulated sum_rows(const MultiplierSystem& sys, const KernelSetup& s, Complex z, Complex w, double radius,
                     std::size_t budget) {
    const auto rows = ball(z, radius, budget);
    const Subgroup& group = sys.group();
    const Int p = static_cast<Int>(s.period);
    const double pref = std::exp(s.log_prefactor);
    CompensatedComplexSum total;
    double tail = 0.0, abs_sum = 0.0;
    for (const GroupElement& g : rows) {
        const Complex jk = principal_pow(g.j(z), s.k);
        for (Int t0 = 0; t0 < p; ++t0) {
            const GroupElement h = GroupElement::U(t0) * g;
            if (!group.contains(h)) continue;
            const Complex tau0 = w + h.act(z);
            const RowSum r = translate_series(s.k, s.x0, tau0, s.period);
            const Complex scale = pref / (upsilon(sys, h) * jk);
            total.add(scale * r.value);
            abs_sum += std::abs(scale * r.value);
            tail += std::abs(scale) * r.tail;
        }
    }
    return {total.value(), tail, abs_sum, rows.size()};
}

}  // namespace

KernelValue kernel(const MultiplierSystem& sys, Complex z, Complex w, double tol, Tolerance mode,
                   std::size_t budget) {
    const double k = sys.weight();
    if (!(k > 2.0)) throw DomainError("kernel: weight must exceed 2");
    if (!(z.imag() > 0.0) || !(w.imag() > 0.0)) throw DomainError("kernel: points must lie in the upper half plane");
    if (!(tol > 0.0)) throw DomainError("kernel: tolerance must be positive");
    const KernelSetup s = setup(sys);
    const double per_row = row_bound(s, w.imag());
    const auto rows_tail = [&](double r) { return per_row * lattice_tail_bound(z, r, k); };

    double target = tol;
    double radius = 1.0;
    for (int pass = 0; pass < 8; ++pass) {
        while (rows_tail(radius) > 0.5 * target) radius *= 1.25;
        const Accumulated a = sum_rows(sys, s, z, w, radius, budget);
        const KernelValue out{a.value, radius, rows_tail(radius) + a.series_tail, kRoundingFactor * a.abs_sum, a.rows};
        if (mode == Tolerance::Absolute) {
            if (out.tail_bound > tol) throw AccuracyError("kernel: translate series tail above tolerance", std::abs(out.value), out.tail_bound);
            return out;
        }
        if (out.tail_bound <= tol * std::abs(out.value)) {
            if (out.rounding > tol * std::abs(out.value))
                throw AccuracyError("kernel: cancellation between rows exceeds the relative tolerance",
                                    std::abs(out.value), out.rounding);
            return out;
        }
        target = 0.5 * tol * std::abs(out.value);
        if (!(target > 0.0)) throw AccuracyError("kernel: relative tolerance on a vanishing value", 0.0, out.tail_bound);
    }
    throw AccuracyError("kernel: relative tolerance not reached", 0.0, INFINITY);
}

ReproduceCheck reproduce_check(const CuspForm& f, Complex w, double tol) {
    const double k = f.weight();
    if (!(k > 2.0)) throw DomainError("reproduce_check: weight must exceed 2");
    if (!(tol > 0.0)) throw DomainError("reproduce_check: tolerance must be positive");
    const double mu = static_cast<double>(f.group().index());
    const Complex rhs = 8.0 * kPi / (mu * (k - 1.0)) * eval_reduced(f, w);
    const double scale = std::max(std::abs(rhs), 1e-300);
    const Complex wbar = -std::conj(w);
    const auto fz = [&](Complex z) { return eval_reduced(f, z); };
    const auto hz = [&](Complex z) { return kernel(f.system, z, wbar, 1e-2 * tol * scale).value; };
    const PeterssonValue lhs = petersson_inner(fz, hz, f.group(), k, tol * scale);
    return {lhs.value, rhs, lhs.error};
}

DiagonalValue basis_sum_diag(const MultiplierSystem& sys, const GroupElement& tau, Complex z, double tol) {
    const double k = sys.weight();
    if (!(k > 2.0)) throw DomainError("basis_sum_diag: weight must exceed 2");
    const MultiplierSystem conj = conjugate_system(sys, tau);
    const KernelValue h = kernel(conj, z, -std::conj(z), tol, Tolerance::Relative);
    const double pre = static_cast<double>(sys.group().index()) * (k - 1.0) / (8.0 * kPi);
    const Complex v = pre * h.value;
    const double tail = pre * h.tail_bound;
    const double residue = std::abs(v.imag());
    if (residue > tail + pre * h.rounding + std::max(tol, 1e-11) * std::abs(v.real()))
        throw ConsistencyError("basis_sum_diag: imaginary residue " + format_double(residue) + " above tolerance");
    if (!(v.real() > 0.0)) throw ConsistencyError("basis_sum_diag: diagonal sum is not positive");
    return {v.real(), tail, h.truncation_radius, residue, pre * h.rounding};
}

KernelValue majorant_sum(Complex z, double k, double tol, std::size_t budget) {
    if (!(k > 2.0)) throw DomainError("majorant_sum: weight must exceed 2");
    if (!(z.imag() > 0.0)) throw DomainError("majorant_sum: point must lie in the upper half plane");
    const double x = z.real(), y = z.imag();
    // one row, any translates: y^k |j|^{-k} 2^k sum_b (u_b^2 + V^2)^{-k/2} with V >= y
    const double per_row = std::pow(2.0, k) * (1.0 + y * line_integral(k));
    const auto rows_tail = [&](double r) { return per_row * lattice_tail_bound(z, r, k); };
    double target = tol;
    double radius = 1.0;
    for (int pass = 0; pass < 8; ++pass) {
        while (rows_tail(radius) > 0.5 * target) radius *= 1.25;
        const auto rows = ball(z, radius, budget);
        CompensatedSum total;
        double series_tail = 0.0;
        for (const GroupElement& g : rows) {
            const Complex zz = g.act(z);
            const double u0 = x - zz.real(), v = y + zz.imag();
            const double log_num = 0.5 * k * std::log(y * zz.imag());
            const auto term = [&](double u) { return std::exp(log_num - 0.5 * k * std::log(0.25 * (u * u + v * v))); };
            double row = term(u0);
            for (Int b = 1;; ++b) {
                const double bb = static_cast<double>(b);
                const double lo = std::abs(u0 - bb), hi = std::abs(u0 + bb);
                row += term(u0 - bb) + term(u0 + bb);
                const double edge = std::min(lo, hi);
                if (edge > v) {
                    // remaining |u| > edge: 2 * 2^k (yy'')^{k/2} (edge^{-k} + edge^{1-k} / (k - 1))
                    const double t = 2.0 * std::exp(log_num + k * std::log(2.0)) *
                                     (std::pow(edge, -k) + std::pow(edge, 1.0 - k) / (k - 1.0));
                    if (t <= 0.01 * tol * row) {
                        series_tail += t;
                        break;
                    }
                }
            }
            total.add(row);
        }
        const double value = total.value();
        const KernelValue out{value, radius, rows_tail(radius) + series_tail, kRoundingFactor * value, rows.size()};
        if (out.tail_bound <= tol * value) return out;
        target = 0.5 * tol * value;
    }
    throw AccuracyError("majorant_sum: tolerance not reached", 0.0, INFINITY);
}

}  // namespace suplab
