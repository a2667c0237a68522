#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "suplab/modgroup.hpp"

namespace suplab {

/// sigma(tau, gamma) = j(tau, gamma z)^k j(gamma, z)^k / j(tau gamma, z)^k with principal powers.
/// Evaluated at z = i and checked against z = 1/2 + 2i; throws ConsistencyError on disagreement.
Complex sigma(const GroupElement& tau, const GroupElement& gamma, double k);

/// Dedekind sum s(h, k) for k >= 1, gcd(h, k) = 1.
double dedekind_sum(Int h, Int k);

/// Jacobi symbol (a / n) for odd n >= 1.
int jacobi_symbol(Int a, Int n);

/// eta(z) = q^{1/24} prod (1 - q^n), q = e^{2 pi i z}, via the pentagonal-number series.
Complex dedekind_eta(Complex z);

/// theta(z) = sum over n in Z of q^{n^2}.
Complex jacobi_theta(Complex z);

/// A multiplier system of real weight k on a subgroup: nu(gamma, z) = upsilon(gamma) j(gamma, z)^k.
class MultiplierSystem {
public:
    enum class Kind { TrivialEvenWeight, EtaPower, Theta, Custom };

    /// upsilon = 1; k must be an even integer.
    static MultiplierSystem trivial(double k, Subgroup group = Subgroup::full());
    /// (eta(gamma z) / eta(z))^r / j(gamma, z)^{r/2}; weight r / 2, r >= 1.
    static MultiplierSystem eta_power(int r, Subgroup group = Subgroup::full());
    /// theta(gamma z) / (theta(z) j(gamma, z)^{1/2}); weight 1/2, group inside Gamma0(4).
    static MultiplierSystem theta(Subgroup group = Subgroup::gamma0(4));
    /// Values supplied by a function on group elements. Only upsilon(-I) = e^{-i pi k} is checked.
    static MultiplierSystem custom(std::string name, double k, Subgroup group,
                                   std::function<Complex(const GroupElement&)> values);

    /// Parses "trivial:k=12", "eta:r=2", "theta". Throws DomainError on anything else.
    static MultiplierSystem parse(std::string_view descriptor, Subgroup group);
    /// Default group for a descriptor: Gamma0(4) for theta, the full group otherwise.
    static MultiplierSystem parse(std::string_view descriptor);
    std::string descriptor() const;

    Kind kind() const { return kind_; }
    double weight() const { return k_; }
    int eta_exponent() const { return r_; }
    const Subgroup& group() const { return group_; }

private:
    MultiplierSystem(Kind kind, double k, int r, Subgroup group);
    void check_minus_identity() const;

    Kind kind_;
    double k_;
    int r_ = 0;
    Subgroup group_;
    std::string name_;
    std::function<Complex(const GroupElement&)> values_;

    friend Complex upsilon(const MultiplierSystem& sys, const GroupElement& gamma);
};

/// Multiplier value upsilon(gamma); throws MembershipError unless gamma is in the group.
Complex upsilon(const MultiplierSystem& sys, const GroupElement& gamma);

/// nu(gamma, z) = upsilon(gamma) j(gamma, z)^k.
Complex automorphy_factor(const MultiplierSystem& sys, const GroupElement& gamma, Complex z);

/// Multiplier of the conjugate system nu^tau at gamma' (requires tau gamma' tau^{-1} in the group),
/// checked for independence of z at two probe points.
Complex conjugate_upsilon(const MultiplierSystem& sys, const GroupElement& tau, const GroupElement& gamma_prime);

/// The conjugate system nu^t on Gamma^t = t^{-1} Gamma t, as a custom system backed by
/// conjugate_upsilon. Returns the system itself when t lies in its group.
MultiplierSystem conjugate_system(const MultiplierSystem& sys, const GroupElement& t);

struct CuspParameterData {
    Cusp cusp;
    double kappa = 0.0;      // in [0, 1)
    double eta_floor = 1.0;  // kappa if kappa > 0, else 1
};

/// kappa with e^{2 pi i kappa} = upsilon^tau(U^{n_tau}) for the cusp's scaling matrix.
CuspParameterData cusp_parameter(const MultiplierSystem& sys, const Cusp& cusp);

/// Same, for an explicit scaling matrix tau of width n.
CuspParameterData cusp_parameter(const MultiplierSystem& sys, const GroupElement& tau, Int width);

}  // namespace suplab
