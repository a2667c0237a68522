#include "suplab/spectral.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "suplab/bessel.hpp"
#include "suplab/errors.hpp"
#include "suplab/parallel.hpp"

namespace suplab {
namespace {

bool integral_weight(double k) { return k == std::floor(k); }

// sigma(tau, gamma) from the winding of the three arguments at z = i; equal to sigma() but cheaper.
Complex sigma_fast(const GroupElement& tau, const GroupElement& gamma, double k) {
    if (integral_weight(k)) return 1.0;
    const Complex z{0.0, 1.0};
    const double w = principal_arg(tau.j(gamma.act(z))) + principal_arg(gamma.j(z)) - principal_arg((tau * gamma).j(z));
    const double turns = std::round(w / kTwoPi);
    if (turns == 0.0) return 1.0;
    return unit_phase(std::fmod(k * turns, 1.0));
}

// fractional part of (num * q) / den + frac * q / den for integers num, q and den > 0
double phase_turns(Int num, double frac, Int q, Int den) {
    const Int p = floor_mod(num * q, den);
    const double t = static_cast<double>(p) / static_cast<double>(den) +
                     frac * static_cast<double>(q) / static_cast<double>(den);
    return t - std::floor(t);
}

// inv[d] = d^{-1} mod c for units d in [0, c), -1 elsewhere: prime sieve plus batch inversion.
std::vector<Int> unit_inverses(Int c) {
    const auto n = static_cast<std::size_t>(c);
    std::vector<Int> inv(n, -1);
    if (c == 1) {
        inv[0] = 0;
        return inv;
    }
    std::vector<char> unit(n, 1);
    unit[0] = 0;
    Int rest = c;
    for (Int p = 2; p * p <= rest; ++p) {
        if (rest % p != 0) continue;
        while (rest % p == 0) rest /= p;
        for (Int q = p; q < c; q += p) unit[static_cast<std::size_t>(q)] = 0;
    }
    if (rest > 1)
        for (Int q = rest; q < c; q += rest) unit[static_cast<std::size_t>(q)] = 0;
    std::vector<Int> units, prefix;
    for (Int d = 1; d < c; ++d)
        if (unit[static_cast<std::size_t>(d)]) units.push_back(d);
    prefix.resize(units.size());
    Int acc = 1;
    for (std::size_t i = 0; i < units.size(); ++i) prefix[i] = acc = acc * units[i] % c;
    Int running = mod_inverse(acc, c);
    for (std::size_t i = units.size(); i-- > 0;) {
        const Int before = i == 0 ? 1 : prefix[i - 1];
        inv[static_cast<std::size_t>(units[i])] = running * before % c;
        running = running * units[i] % c;
    }
    return inv;
}

struct KloostermanContext {
    const MultiplierSystem& sys;
    GroupElement tau, tau_inv;
    PoincareCusps cusps;
    Complex inv_sigma_tt;  // 1 / sigma(tau, tau^{-1})
    bool trivial;

    KloostermanContext(const MultiplierSystem& s, const GroupElement& t)
        : sys(s), tau(t), tau_inv(t.inverse()), cusps(poincare_cusps(s, t)) {
        inv_sigma_tt = 1.0 / sigma(tau, tau_inv, sys.weight());
        trivial = sys.kind() == MultiplierSystem::Kind::TrivialEvenWeight;
    }

    Complex sum(Int r, Int m, Int c) const {
        if (c < 1) throw DomainError("kloosterman: c must be >= 1");
        const Int n1 = cusps.n_inf, n2 = cusps.n_cusp;
        const double k = sys.weight();
        const Subgroup& group = sys.group();
        CompensatedComplexSum total;
        const bool identity_tau = tau == GroupElement::identity();
        const bool full = group.kind() == Subgroup::Kind::Full;
        const std::vector<Int> inv = unit_inverses(c);
        for (Int d = 0; d < n1 * c; ++d) {
            const Int dinv = inv[static_cast<std::size_t>(d % c)];
            if (dinv < 0) continue;
            const double td = phase_turns(r, cusps.kappa_inf, d, n1 * c);
            for (Int j = 0; j < n2; ++j) {
                const Int a = dinv + j * c;
                const GroupElement gamma(a, (a * d - 1) / c, c, d);
                const GroupElement g = identity_tau ? gamma : tau_inv * gamma;
                if (!full && !group.contains(g)) continue;
                const double t = td + phase_turns(m, cusps.kappa_cusp, a, n2 * c);
                Complex term = unit_phase(t - std::floor(t));
                if (!trivial) term *= sigma_fast(tau_inv, gamma, k) / upsilon(sys, g);
                total.add(term);
            }
        }
        return total.value() * inv_sigma_tt;
    }
};

// i^{-k} on the principal branch
Complex i_pow_minus(double k) { return unit_phase(-0.25 * k - std::floor(-0.25 * k)); }

// Bound on sum over c > C of c^{-s}, s > 1.
double zeta_tail(double C, double s) { return std::pow(C, 1.0 - s) / (s - 1.0); }

void require_weight(double k, const char* who) {
    if (!(k > 2.0)) throw DomainError(std::string(who) + ": weight must exceed 2");
}

}  // namespace

PoincareCusps poincare_cusps(const MultiplierSystem& sys, const GroupElement& tau) {
    PoincareCusps p;
    p.n_inf = cusp_width(sys.group(), GroupElement::identity());
    p.kappa_inf = cusp_parameter(sys, GroupElement::identity(), p.n_inf).kappa;
    const GroupElement tinv = tau.inverse();
    p.n_cusp = cusp_width(sys.group(), tinv);
    p.kappa_cusp = cusp_parameter(sys, tinv, p.n_cusp).kappa;
    return p;
}

Complex kloosterman(const KloostermanSpec& spec) {
    return KloostermanContext(spec.system, spec.tau).sum(spec.r, spec.m, spec.c);
}

Complex classical_kloosterman(Int m, Int r, Int c) {
    if (c < 1) throw DomainError("classical_kloosterman: c must be >= 1");
    CompensatedComplexSum s;
    for (Int d = 0; d < c; ++d) {
        if (gcd(d, c) != 1) continue;
        const Int dbar = c == 1 ? 0 : mod_inverse(d, c);
        s.add(unit_phase(static_cast<double>(floor_mod(m * dbar + r * d, c)) / static_cast<double>(c)));
    }
    return s.value();
}

Complex delta_tau(const MultiplierSystem& sys, const GroupElement& tau, Int m) {
    const Int n1 = cusp_width(sys.group(), GroupElement::identity());
    const double kappa = cusp_parameter(sys, GroupElement::identity(), n1).kappa;
    const GroupElement tinv = tau.inverse();
    for (Int s = 0; s < n1; ++s) {
        const GroupElement g = tinv * GroupElement::U(s);
        if (!sys.group().contains(g)) continue;
        const double t = phase_turns(m, kappa, s, n1);
        return unit_phase(t) / (upsilon(sys, g) * sigma(tau, tinv, sys.weight()));
    }
    return 0.0;
}

const char* to_string(PoincareCase c) {
    switch (c) {
        case PoincareCase::KappaZero: return "kappa_zero";
        case PoincareCase::Positive: return "positive";
        case PoincareCase::Negative: return "negative";
    }
    return "?";
}

PoincareCoefficient poincare_coeff(const MultiplierSystem& sys, const GroupElement& tau, Int m, Int r, Int c_max,
                                   int workers) {
    const double k = sys.weight();
    require_weight(k, "poincare_coeff");
    if (c_max < 1) throw DomainError("poincare_coeff: c_max must be >= 1");
    const KloostermanContext ctx(sys, tau);
    const PoincareCusps& p = ctx.cusps;
    const double rk = static_cast<double>(r) + p.kappa_inf;
    const double mk = static_cast<double>(m) + p.kappa_cusp;
    if (!(rk > 0.0)) throw DomainError("poincare_coeff: r + kappa_I must be positive");
    const double n1 = static_cast<double>(p.n_inf), n2 = static_cast<double>(p.n_cusp);
    // number of representatives per c is at most n1 n2 c
    const double w_bound = n1 * n2;

    PoincareCoefficient out;
    out.c_max = c_max;
    out.branch = mk == 0.0 ? PoincareCase::KappaZero : (mk > 0.0 ? PoincareCase::Positive : PoincareCase::Negative);

    std::vector<Complex> terms(static_cast<std::size_t>(c_max));
    const double X = 4.0 * kPi * std::sqrt(rk * std::abs(mk) / (n1 * n2));
    parallel_for(terms.size(), [&](std::size_t i) {
        const Int c = static_cast<Int>(i) + 1;
        const double cd = static_cast<double>(c);
        const Complex w = ctx.sum(r, m, c);
        switch (out.branch) {
            case PoincareCase::KappaZero:
                terms[i] = w * std::exp(-k * std::log(n1 * cd));
                break;
            case PoincareCase::Positive:
                terms[i] = w / (n1 * cd) * bessel_j(k - 1.0, X / cd);
                break;
            case PoincareCase::Negative:
                terms[i] = w / (n1 * cd) * bessel_i(k - 1.0, X / cd);
                break;
        }
    }, workers);
    const Complex sum = pairwise_sum(terms);
    const double C = static_cast<double>(c_max);

    if (out.branch == PoincareCase::KappaZero) {
        const double pre = std::exp(k * std::log(kTwoPi) - log_gamma(k) + (k - 1.0) * std::log(rk));
        out.value = pre * i_pow_minus(k) * sum;
        out.tail_bound = pre * w_bound * std::pow(n1, -k) * zeta_tail(C, k - 1.0);
        return out;
    }
    const double pre = kTwoPi * std::pow(n2 / n1 * rk / std::abs(mk), 0.5 * (k - 1.0));
    out.value = pre * i_pow_minus(k) * sum;
    // |J_nu(x)|, I_nu(x) <= (x/2)^nu / Gamma(nu + 1) (times e^{x^2 / (4 (nu + 1))} for I)
    double small = std::exp((k - 1.0) * std::log(0.5 * X) - log_gamma(k));
    if (out.branch == PoincareCase::Negative) small *= std::exp(X * X / (4.0 * k * C * C));
    out.tail_bound = pre * w_bound / n1 * small * zeta_tail(C, k - 1.0);
    return out;
}

CoefficientSquareSum coeff_square_sum(const MultiplierSystem& sys, const GroupElement& tau, Int m, Int c_max,
                                      int workers) {
    const double k = sys.weight();
    require_weight(k, "coeff_square_sum");
    if (c_max < 1) throw DomainError("coeff_square_sum: c_max must be >= 1");
    if (tau.c() == 0 && tau.a() == -1) throw DomainError("coeff_square_sum: tau must not be of the form -U^l");
    const GroupElement tinv = tau.inverse();
    const MultiplierSystem conj = conjugate_system(sys, tinv);
    const KloostermanContext ctx(conj, GroupElement::identity());

    CoefficientSquareSum out;
    out.c_max = c_max;
    out.width = ctx.cusps.n_inf;
    out.kappa = ctx.cusps.kappa_inf;
    const double n = static_cast<double>(out.width);
    const double mk = static_cast<double>(m) + out.kappa;
    if (mk < 0.0) throw DomainError("coeff_square_sum: m + kappa must be >= 0");
    if (mk == 0.0) return out;

    const double X = 4.0 * kPi * mk / n;
    std::vector<Complex> terms(static_cast<std::size_t>(c_max));
    parallel_for(terms.size(), [&](std::size_t i) {
        const double cd = static_cast<double>(i + 1);
        terms[i] = ctx.sum(m, m, static_cast<Int>(i) + 1) / (n * cd) * bessel_j(k - 1.0, X / cd);
    }, workers);
    const Complex bracket = 1.0 + kTwoPi * i_pow_minus(k) * pairwise_sum(terms);

    const double log_pre = std::log(static_cast<double>(sys.group().index())) + (k - 1.0) * std::log(4.0 * kPi * mk) -
                           k * std::log(n) - log_gamma(k - 1.0);
    const double pre = std::exp(log_pre);
    const double C = static_cast<double>(c_max);
    const double bracket_tail =
        kTwoPi * n * std::exp((k - 1.0) * std::log(0.5 * X) - log_gamma(k)) * zeta_tail(C, k - 1.0);
    out.value = pre * bracket.real();
    out.imag_residue = pre * bracket.imag();
    out.tail_bound = pre * bracket_tail;
    const double slack = out.tail_bound + 1e-9 * pre;
    if (out.value < -slack) throw ConsistencyError("coeff_square_sum: negative sum of squares");
    if (std::abs(out.imag_residue) > slack + 1e-9 * std::abs(out.value))
        throw ConsistencyError("coeff_square_sum: bracket is not real");
    return out;
}

SeriesValue poincare_series(const MultiplierSystem& sys, const GroupElement& tau, Complex z, Int m, double tol) {
    const double k = sys.weight();
    require_weight(k, "poincare_series");
    if (!(z.imag() > 0.0)) throw DomainError("poincare_series: Im z must be positive");
    const PoincareCusps p = poincare_cusps(sys, tau);
    const double mk = static_cast<double>(m) + p.kappa_cusp;
    if (mk < 0.0) throw DomainError("poincare_series: m + kappa must be >= 0");
    const GroupElement tinv = tau.inverse();
    const double n2 = static_cast<double>(p.n_cusp);

    // Terms have modulus <= |j(tau gamma, z)|^{-k}; each bottom row up to sign carries at most n2 terms.
    double radius = 4.0;
    double tail = 0.0;
    for (;;) {
        tail = 0.5 * n2 * lattice_tail_bound(z, radius, k);
        if (tail <= tol) break;
        radius *= 1.5;
    }
    SeriesValue out;
    out.radius = radius;
    out.tail_bound = tail;
    CompensatedComplexSum sum;
    for (const GroupElement& b : ball(z, radius)) {
        if (b.c() < 0 || (b.c() == 0 && b.d() != 1)) continue;
        for (Int t = 0; t < p.n_cusp; ++t) {
            const GroupElement M = GroupElement::U(t) * b;
            const GroupElement gamma = tinv * M;
            if (!sys.group().contains(gamma)) continue;
            const Complex e = std::exp(Complex(0.0, kTwoPi * mk / n2) * M.act(z));
            sum.add(e / (principal_pow(tau.j(gamma.act(z)), k) * automorphy_factor(sys, gamma, z)));
        }
    }
    out.value = sum.value();
    return out;
}

}  // namespace suplab
