#include "suplab/multiplier.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "suplab/errors.hpp"

namespace suplab {
namespace {

constexpr double kProbeTol = 1e-10;

const Complex kProbe1{0.0, 1.0};
const Complex kProbe2{0.5, 2.0};

Complex sigma_at(const GroupElement& tau, const GroupElement& gamma, double k, Complex z) {
    return principal_pow(tau.j(gamma.act(z)), k) * principal_pow(gamma.j(z), k) /
           principal_pow((tau * gamma).j(z), k);
}

// e^{pi i r} for real r, reduced mod 2 first.
Complex pi_phase(double r) { return unit_phase(0.5 * (r - 2.0 * std::floor(0.5 * r))); }

// eta multiplier epsilon(gamma) with eta(gamma z) = epsilon (c z + d)^{1/2} eta(z), principal root.
Complex eta_epsilon(const GroupElement& g) {
    if (g.c() == 0) {
        // gamma = +-U^b acts as z -> z + b / d
        const double b = static_cast<double>(g.b() * g.d());
        return g.d() == 1 ? pi_phase(b / 12.0) : pi_phase(b / 12.0 - 0.5);
    }
    if (g.c() < 0) return eta_epsilon(-g) * Complex(0.0, 1.0);
    const double c = static_cast<double>(g.c());
    const double e = static_cast<double>(g.a() + g.d()) / (12.0 * c) - dedekind_sum(g.d(), g.c()) - 0.25;
    return pi_phase(e);
}

// theta(gamma z) = (c/d) eps_d^{-1} (c z + d)^{1/2} theta(z) on Gamma0(4).
Complex theta_multiplier(const GroupElement& g) {
    const Int c = g.c(), d = g.d();
    int chi;
    if (c == 0) {
        chi = 1;
    } else {
        chi = jacobi_symbol(c, d < 0 ? -d : d);
        if (d < 0 && c < 0) chi = -chi;
    }
    const Complex eps_inv = floor_mod(d, 4) == 1 ? Complex(1.0, 0.0) : Complex(0.0, -1.0);
    return static_cast<double>(chi) * eps_inv;
}

bool inside_gamma0_4(const Subgroup& g) {
    switch (g.kind()) {
        case Subgroup::Kind::Gamma0:
        case Subgroup::Kind::Gamma1:
        case Subgroup::Kind::Gamma:
            return g.level() % 4 == 0;
        default:
            return false;
    }
}

double parse_number(std::string_view s, std::string_view what) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw DomainError("multiplier descriptor: bad " + std::string(what) + " '" + std::string(s) + "'");
    return v;
}

}  // namespace

Complex sigma(const GroupElement& tau, const GroupElement& gamma, double k) {
    const Complex s1 = sigma_at(tau, gamma, k, kProbe1);
    const Complex s2 = sigma_at(tau, gamma, k, kProbe2);
    if (std::abs(s1 - s2) > kProbeTol) throw ConsistencyError("sigma: value depends on the probe point");
    return s1;
}

double dedekind_sum(Int h, Int k) {
    if (k < 1 || gcd(h, k) != 1) throw DomainError("dedekind_sum: need k >= 1 and gcd(h, k) = 1");
    // reciprocity: s(h, k) + s(k, h) = (h / k + k / h + 1 / (h k)) / 12 - 1/4
    h = floor_mod(h, k);
    double result = 0.0;
    double sign = 1.0;
    while (h != 0) {
        const double hd = static_cast<double>(h), kd = static_cast<double>(k);
        result += sign * ((hd / kd + kd / hd + 1.0 / (hd * kd)) / 12.0 - 0.25);
        const Int r = k % h;
        k = h;
        h = r;
        sign = -sign;
    }
    return result;
}

int jacobi_symbol(Int a, Int n) {
    if (n < 1 || n % 2 == 0) throw DomainError("jacobi_symbol: n must be odd and positive");
    a = floor_mod(a, n);
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            const Int r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

Complex dedekind_eta(Complex z) {
    if (!(z.imag() > 0.0)) throw DomainError("dedekind_eta: Im z must be positive");
    // sum over n of (-1)^n q^{n (3n - 1) / 2}
    const double y = z.imag();
    CompensatedComplexSum sum;
    sum.add(1.0);
    for (Int n = 1;; ++n) {
        const double e1 = 0.5 * static_cast<double>(n * (3 * n - 1));
        const double e2 = 0.5 * static_cast<double>(n * (3 * n + 1));
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        const auto term = [&](double e) {
            return std::exp(-kTwoPi * e * y) * unit_phase(std::fmod(e * z.real(), 1.0));
        };
        sum.add(sign * (term(e1) + term(e2)));
        if (kTwoPi * e1 * y > 40.0) break;
    }
    return std::exp(-kTwoPi * y / 24.0) * unit_phase(std::fmod(z.real() / 24.0, 1.0)) * sum.value();
}

Complex jacobi_theta(Complex z) {
    if (!(z.imag() > 0.0)) throw DomainError("jacobi_theta: Im z must be positive");
    const double y = z.imag();
    CompensatedComplexSum sum;
    sum.add(1.0);
    for (Int n = 1;; ++n) {
        const double e = static_cast<double>(n * n);
        sum.add(2.0 * std::exp(-kTwoPi * e * y) * unit_phase(std::fmod(e * z.real(), 1.0)));
        if (kTwoPi * e * y > 40.0) break;
    }
    return sum.value();
}

MultiplierSystem::MultiplierSystem(Kind kind, double k, int r, Subgroup group)
    : kind_(kind), k_(k), r_(r), group_(std::move(group)) {}

void MultiplierSystem::check_minus_identity() const {
    const Complex v = upsilon(*this, GroupElement::minus_identity());
    if (std::abs(v - pi_phase(-k_)) > 1e-12)
        throw DomainError("multiplier system: upsilon(-I) differs from e^{-i pi k}");
}

MultiplierSystem MultiplierSystem::trivial(double k, Subgroup group) {
    if (k != std::floor(k) || std::fmod(k, 2.0) != 0.0)
        throw DomainError("trivial multiplier: weight must be an even integer");
    MultiplierSystem s(Kind::TrivialEvenWeight, k, 0, std::move(group));
    s.check_minus_identity();
    return s;
}

MultiplierSystem MultiplierSystem::eta_power(int r, Subgroup group) {
    if (r < 1) throw DomainError("eta multiplier: exponent must be >= 1");
    MultiplierSystem s(Kind::EtaPower, 0.5 * r, r, std::move(group));
    s.check_minus_identity();
    return s;
}

MultiplierSystem MultiplierSystem::theta(Subgroup group) {
    if (!inside_gamma0_4(group)) throw DomainError("theta multiplier: group must lie inside Gamma0(4)");
    MultiplierSystem s(Kind::Theta, 0.5, 0, std::move(group));
    s.check_minus_identity();
    return s;
}

MultiplierSystem MultiplierSystem::custom(std::string name, double k, Subgroup group,
                                          std::function<Complex(const GroupElement&)> values) {
    MultiplierSystem s(Kind::Custom, k, 0, std::move(group));
    s.name_ = std::move(name);
    s.values_ = std::move(values);
    s.check_minus_identity();
    return s;
}

MultiplierSystem MultiplierSystem::parse(std::string_view descriptor, Subgroup group) {
    if (descriptor == "theta") return theta(std::move(group));
    const auto colon = descriptor.find(':');
    if (colon == std::string_view::npos)
        throw DomainError("multiplier descriptor: expected 'trivial:k=..', 'eta:r=..' or 'theta'");
    const std::string_view head = descriptor.substr(0, colon), tail = descriptor.substr(colon + 1);
    if (head == "trivial" && tail.starts_with("k=")) return trivial(parse_number(tail.substr(2), "weight"), group);
    if (head == "eta" && tail.starts_with("r=")) {
        const double r = parse_number(tail.substr(2), "exponent");
        if (r != std::floor(r) || r < 1 || r > 1e6) throw DomainError("multiplier descriptor: bad eta exponent");
        return eta_power(static_cast<int>(r), std::move(group));
    }
    throw DomainError("multiplier descriptor: unknown '" + std::string(descriptor) + "'");
}

MultiplierSystem MultiplierSystem::parse(std::string_view descriptor) {
    return parse(descriptor, descriptor == "theta" ? Subgroup::gamma0(4) : Subgroup::full());
}

std::string MultiplierSystem::descriptor() const {
    switch (kind_) {
        case Kind::TrivialEvenWeight: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "trivial:k=%.17g", k_);
            return buf;
        }
        case Kind::EtaPower:
            return "eta:r=" + std::to_string(r_);
        case Kind::Theta:
            return "theta";
        case Kind::Custom:
            return name_;
    }
    return {};
}

Complex upsilon(const MultiplierSystem& sys, const GroupElement& gamma) {
    if (!sys.group().contains(gamma))
        throw MembershipError("upsilon: " + gamma.to_string() + " is not in " + sys.group().descriptor());
    switch (sys.kind()) {
        case MultiplierSystem::Kind::TrivialEvenWeight:
            return 1.0;
        case MultiplierSystem::Kind::EtaPower:
            return std::pow(eta_epsilon(gamma), sys.eta_exponent());
        case MultiplierSystem::Kind::Theta:
            return theta_multiplier(gamma);
        case MultiplierSystem::Kind::Custom:
            return sys.values_(gamma);
    }
    return 1.0;
}

Complex automorphy_factor(const MultiplierSystem& sys, const GroupElement& gamma, Complex z) {
    return upsilon(sys, gamma) * principal_pow(gamma.j(z), sys.weight());
}

Complex conjugate_upsilon(const MultiplierSystem& sys, const GroupElement& tau, const GroupElement& gamma_prime) {
    const GroupElement gamma = tau * gamma_prime * tau.inverse();
    const Complex u = upsilon(sys, gamma);
    const double k = sys.weight();
    auto at = [&](Complex z) {
        // nu^tau(gamma', z) = nu(gamma, tau z) j(tau, z)^k / j(tau, gamma' z)^k
        const Complex nu = u * principal_pow(gamma.j(tau.act(z)), k) * principal_pow(tau.j(z), k) /
                           principal_pow(tau.j(gamma_prime.act(z)), k);
        return nu / principal_pow(gamma_prime.j(z), k);
    };
    const Complex v1 = at(kProbe1), v2 = at(kProbe2);
    if (std::abs(v1 - v2) > kProbeTol) throw ConsistencyError("conjugate_upsilon: value depends on the probe point");
    return v1;
}

MultiplierSystem conjugate_system(const MultiplierSystem& sys, const GroupElement& t) {
    if (sys.group().contains(t)) return sys;
    return MultiplierSystem::custom(sys.descriptor() + "^" + t.to_string(), sys.weight(),
                                    conjugate_subgroup(sys.group(), t),
                                    [sys, t](const GroupElement& g) { return conjugate_upsilon(sys, t, g); });
}

CuspParameterData cusp_parameter(const MultiplierSystem& sys, const GroupElement& tau, Int width) {
    const Complex v = conjugate_upsilon(sys, tau, GroupElement::U(width));
    double kappa = principal_arg(v) / kTwoPi;
    if (kappa < 0.0) kappa += 1.0;
    if (kappa > 1.0 - 1e-12 || kappa < 1e-12) kappa = 0.0;
    CuspParameterData out;
    out.cusp.numerator = tau.a();
    out.cusp.denominator = tau.c();
    out.cusp.scaling = tau;
    out.cusp.width = width;
    out.kappa = kappa;
    out.eta_floor = kappa > 0.0 ? kappa : 1.0;
    return out;
}

CuspParameterData cusp_parameter(const MultiplierSystem& sys, const Cusp& cusp) {
    CuspParameterData out = cusp_parameter(sys, cusp.scaling, cusp.width);
    out.cusp = cusp;
    return out;
}

}  // namespace suplab
