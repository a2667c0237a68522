#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "suplab/numerics.hpp"

namespace suplab {

using Int = std::int64_t;

Int floor_mod(Int a, Int m);
Int gcd(Int a, Int b);

/// Returns (g, x, y) with a x + b y = g = gcd(a, b) >= 0.
struct Bezout {
    Int g, x, y;
};
Bezout extended_gcd(Int a, Int b);

/// Inverse of a modulo m (m >= 1, gcd(a, m) = 1).
Int mod_inverse(Int a, Int m);

/// Integer 2x2 matrix of determinant one.
class GroupElement {
public:
    /// Identity.
    constexpr GroupElement() = default;
    /// Throws DomainError unless ad - bc = 1.
    GroupElement(Int a, Int b, Int c, Int d);

    static GroupElement identity() { return {}; }
    static GroupElement minus_identity() { return {-1, 0, 0, -1}; }
    /// (0, -1; 1, 0)
    static GroupElement S() { return {0, -1, 1, 0}; }
    /// U^n = (1, n; 0, 1)
    static GroupElement U(Int n = 1) { return {1, n, 0, 1}; }
    /// Some matrix with bottom row (c, d); throws unless gcd(c, d) = 1.
    static GroupElement with_bottom_row(Int c, Int d);

    Int a() const { return a_; }
    Int b() const { return b_; }
    Int c() const { return c_; }
    Int d() const { return d_; }

    GroupElement inverse() const { return {d_, -b_, -c_, a_}; }
    GroupElement operator-() const { return {-a_, -b_, -c_, -d_}; }
    friend GroupElement operator*(const GroupElement& x, const GroupElement& y);
    friend bool operator==(const GroupElement&, const GroupElement&) = default;

    /// (a z + b) / (c z + d)
    Complex act(Complex z) const;
    /// j(gamma, z) = c z + d
    Complex j(Complex z) const { return static_cast<double>(c_) * z + static_cast<double>(d_); }

    std::string to_string() const;

private:
    Int a_ = 1, b_ = 0, c_ = 0, d_ = 1;
};

/// Finite-index subgroup of SL2(Z) containing -I.
class Subgroup {
public:
    enum class Kind { Full, Gamma0, Gamma1, Gamma, Custom };

    static Subgroup full();
    static Subgroup gamma0(Int level);
    /// +-Gamma1(N): -I is adjoined when N > 2.
    static Subgroup gamma1(Int level);
    /// +-Gamma(N): -I is adjoined when N > 2.
    static Subgroup gamma(Int level);
    /// Extension point: arbitrary membership test plus an explicit list of right
    /// coset representatives (SL2(Z) = disjoint union of Gamma * g_i). `period` must
    /// satisfy U^period in Gamma and in every conjugate of Gamma.
    static Subgroup custom(std::string name, std::function<bool(const GroupElement&)> member,
                           std::vector<GroupElement> cosets, Int period);

    /// Parses "full", "gamma0:4", "gamma1:5", "gamma:3".
    static Subgroup parse(std::string_view descriptor);
    std::string descriptor() const;

    Kind kind() const { return kind_; }
    Int level() const { return level_; }
    /// True when -I is not in the congruence subgroup itself and was adjoined.
    bool minus_identity_adjoined() const { return adjoined_; }

    bool contains(const GroupElement& g) const;
    /// g in Gamma^tau = tau^{-1} Gamma tau.
    bool conjugate_contains(const GroupElement& tau, const GroupElement& g) const {
        return contains(tau * g * tau.inverse());
    }

    /// Right coset representatives g_i with SL2(Z) = disjoint union Gamma g_i; g_0 = I.
    const std::vector<GroupElement>& right_cosets() const;
    /// mu(Gamma) = [SL2(Z) : Gamma]
    Int index() const { return static_cast<Int>(right_cosets().size()); }

    /// U^period lies in Gamma and in all of its SL2(Z)-conjugates.
    Int translation_period() const;

private:
    struct Cache;
    Subgroup(Kind kind, Int level);

    Kind kind_ = Kind::Full;
    Int level_ = 1;
    bool adjoined_ = false;
    std::string custom_name_;
    std::function<bool(const GroupElement&)> custom_member_;
    std::shared_ptr<Cache> cache_;
};

/// Gamma^t = t^{-1} Gamma t. Returns the group itself when t lies in it.
Subgroup conjugate_subgroup(const Subgroup& group, const GroupElement& t);

/// A cusp with its scaling matrix tau (tau infinity = representative) and width.
struct Cusp {
    Int numerator = 1;    // representative p / q; q = 0 means infinity
    Int denominator = 0;
    GroupElement scaling;
    Int width = 1;

    bool is_infinity() const { return denominator == 0; }
    std::string to_string() const;
};

/// Smallest n >= 1 with tau U^n tau^{-1} in Gamma (up to sign).
Int cusp_width(const Subgroup& group, const GroupElement& tau);

/// Whether tau1 infinity and tau2 infinity are Gamma-equivalent.
bool cusps_equivalent(const Subgroup& group, const GroupElement& tau1, const GroupElement& tau2);

/// One cusp per Gamma-orbit of P^1(Q); representatives have minimal denominator,
/// then minimal |numerator| (positive first). Widths sum to the index.
std::vector<Cusp> cusp_set(const Subgroup& group);

struct Reduction {
    GroupElement gamma;  // gamma z = reduced
    Complex reduced;
};

/// Translate/invert descent into F_I = {|Re z| <= 1/2, |z| >= 1}.
Reduction reduce_to_fd(Complex z);

/// One matrix per coprime (c, d) (both signs) with |c z + d| <= radius, completed so that
/// Re(gamma z) - Re(z) lies in [-1/2, 1/2). Throws ResourceError past `budget` elements.
std::vector<GroupElement> ball(Complex z, double radius, std::size_t budget = 50'000'000);

/// Upper bound for sum over all nonzero lattice vectors (c, d) in Z^2 (not only coprime)
/// with |c z + d| > radius of |c z + d|^{-s}; requires s > 2.
double lattice_tail_bound(Complex z, double radius, double s);

}  // namespace suplab
