#include "suplab/modgroup.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <sstream>

#include "suplab/errors.hpp"

namespace suplab {

Int floor_mod(Int a, Int m) {
    const Int r = a % m;
    return r < 0 ? r + m : r;
}

Int gcd(Int a, Int b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        const Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Bezout extended_gcd(Int a, Int b) {
    Int old_r = a, r = b;
    Int old_s = 1, s = 0;
    Int old_t = 0, t = 1;
    while (r != 0) {
        const Int q = old_r / r;
        Int tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

Int mod_inverse(Int a, Int m) {
    if (m == 1) return 0;
    const Bezout e = extended_gcd(floor_mod(a, m), m);
    if (e.g != 1) throw DomainError("mod_inverse: not invertible");
    return floor_mod(e.x, m);
}

GroupElement::GroupElement(Int a, Int b, Int c, Int d) : a_(a), b_(b), c_(c), d_(d) {
    if (a * d - b * c != 1) throw DomainError("GroupElement: determinant is not 1");
}

GroupElement GroupElement::with_bottom_row(Int c, Int d) {
    const Bezout e = extended_gcd(c, d);
    if (e.g != 1) throw DomainError("GroupElement: bottom row is not coprime");
    // c x + d y = 1  =>  a = y, b = -x
    return {e.y, -e.x, c, d};
}

GroupElement operator*(const GroupElement& x, const GroupElement& y) {
    return {x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_, x.c_ * y.a_ + x.d_ * y.c_,
            x.c_ * y.b_ + x.d_ * y.d_};
}

Complex GroupElement::act(Complex z) const {
    const Complex num = static_cast<double>(a_) * z + static_cast<double>(b_);
    return num / j(z);
}

std::string GroupElement::to_string() const {
    std::ostringstream os;
    os << "(" << a_ << "," << b_ << ";" << c_ << "," << d_ << ")";
    return os.str();
}

// ---------------------------------------------------------------------------

struct Subgroup::Cache {
    std::once_flag once;
    std::vector<GroupElement> cosets;
};

Subgroup::Subgroup(Kind kind, Int level)
    : kind_(kind), level_(level), cache_(std::make_shared<Cache>()) {
    if (level < 1) throw DomainError("Subgroup: level must be positive");
    adjoined_ = (kind == Kind::Gamma1 || kind == Kind::Gamma) && level > 2;
}

Subgroup Subgroup::full() { return {Kind::Full, 1}; }
Subgroup Subgroup::gamma0(Int level) { return level == 1 ? full() : Subgroup{Kind::Gamma0, level}; }
Subgroup Subgroup::gamma1(Int level) { return level == 1 ? full() : Subgroup{Kind::Gamma1, level}; }
Subgroup Subgroup::gamma(Int level) { return level == 1 ? full() : Subgroup{Kind::Gamma, level}; }

Subgroup Subgroup::custom(std::string name, std::function<bool(const GroupElement&)> member,
                          std::vector<GroupElement> cosets, Int period) {
    if (cosets.empty() || !member || period < 1)
        throw DomainError("Subgroup::custom: needs a membership test, cosets and a period");
    Subgroup g{Kind::Custom, period};
    g.custom_name_ = std::move(name);
    g.custom_member_ = std::move(member);
    std::call_once(g.cache_->once, [&] { g.cache_->cosets = std::move(cosets); });
    return g;
}

Subgroup Subgroup::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    if (text == "full" || text == "sl2z") return full();
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw DomainError("Subgroup::parse: unknown descriptor '" + std::string(text) + "'");
    const std::string_view name = trim(text.substr(0, colon));
    const std::string_view num = trim(text.substr(colon + 1));
    Int level = 0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), level);
    if (ec != std::errc{} || ptr != num.data() + num.size() || level < 1)
        throw DomainError("Subgroup::parse: bad level in '" + std::string(text) + "'");
    if (name == "gamma0") return gamma0(level);
    if (name == "gamma1") return gamma1(level);
    if (name == "gamma") return gamma(level);
    throw DomainError("Subgroup::parse: unknown family '" + std::string(name) + "'");
}

std::string Subgroup::descriptor() const {
    switch (kind_) {
        case Kind::Full: return "full";
        case Kind::Gamma0: return "gamma0:" + std::to_string(level_);
        case Kind::Gamma1: return "gamma1:" + std::to_string(level_);
        case Kind::Gamma: return "gamma:" + std::to_string(level_);
        case Kind::Custom: return "custom:" + custom_name_;
    }
    return "?";
}

bool Subgroup::contains(const GroupElement& g) const {
    const Int n = level_;
    switch (kind_) {
        case Kind::Full: return true;
        case Kind::Gamma0: return floor_mod(g.c(), n) == 0;
        case Kind::Gamma1: {
            if (floor_mod(g.c(), n) != 0) return false;
            const Int a = floor_mod(g.a(), n);
            return a == floor_mod(1, n) || a == floor_mod(-1, n);
        }
        case Kind::Gamma: {
            if (floor_mod(g.c(), n) != 0 || floor_mod(g.b(), n) != 0) return false;
            const Int a = floor_mod(g.a(), n);
            return a == floor_mod(1, n) || a == floor_mod(-1, n);
        }
        case Kind::Custom: return custom_member_(g);
    }
    return false;
}

Int Subgroup::translation_period() const { return level_; }

namespace {

using CosetKey = std::array<Int, 4>;

CosetKey negate_mod(const CosetKey& k, Int n) {
    return {floor_mod(-k[0], n), floor_mod(-k[1], n), floor_mod(-k[2], n), floor_mod(-k[3], n)};
}

}  // namespace

const std::vector<GroupElement>& Subgroup::right_cosets() const {
    std::call_once(cache_->once, [this] {
        const Int n = level_;
        std::vector<Int> units;
        if (kind_ == Kind::Gamma0)
            for (Int u = 1; u < n; ++u)
                if (gcd(u, n) == 1) units.push_back(u);

        // Gamma g = Gamma g'  iff  g' g^{-1} in Gamma; the key is a complete invariant.
        auto key = [&](const GroupElement& g) -> CosetKey {
            switch (kind_) {
                case Kind::Full: return {0, 0, 0, 0};
                case Kind::Gamma0: {
                    CosetKey best{n, n, 0, 0};
                    for (Int u : units) {
                        CosetKey k{floor_mod(u * g.c(), n), floor_mod(u * g.d(), n), 0, 0};
                        best = std::min(best, k);
                    }
                    return best;
                }
                case Kind::Gamma1: {
                    CosetKey k{floor_mod(g.c(), n), floor_mod(g.d(), n), 0, 0};
                    return std::min(k, negate_mod(k, n));
                }
                case Kind::Gamma: {
                    CosetKey k{floor_mod(g.a(), n), floor_mod(g.b(), n), floor_mod(g.c(), n),
                               floor_mod(g.d(), n)};
                    return std::min(k, negate_mod(k, n));
                }
                case Kind::Custom: break;
            }
            return {0, 0, 0, 0};
        };

        std::map<CosetKey, std::size_t> seen;
        std::deque<GroupElement> queue{GroupElement::identity()};
        seen.emplace(key(GroupElement::identity()), 0);
        cache_->cosets.push_back(GroupElement::identity());
        const GroupElement gens[] = {GroupElement::S(), GroupElement::U(1), GroupElement::U(-1)};
        while (!queue.empty()) {
            const GroupElement g = queue.front();
            queue.pop_front();
            for (const auto& s : gens) {
                const GroupElement h = g * s;
                if (seen.emplace(key(h), cache_->cosets.size()).second) {
                    cache_->cosets.push_back(h);
                    queue.push_back(h);
                }
            }
        }
    });
    return cache_->cosets;
}

Subgroup conjugate_subgroup(const Subgroup& group, const GroupElement& t) {
    if (group.contains(t)) return group;
    const GroupElement tinv = t.inverse();
    std::vector<GroupElement> cosets;
    cosets.reserve(group.right_cosets().size());
    for (const auto& g : group.right_cosets()) cosets.push_back(tinv * g * t);
    return Subgroup::custom(group.descriptor() + "^" + t.to_string(),
                            [group, t, tinv](const GroupElement& g) { return group.contains(t * g * tinv); },
                            std::move(cosets), group.translation_period());
}

// ---------------------------------------------------------------------------

std::string Cusp::to_string() const {
    if (is_infinity()) return "inf";
    if (denominator == 1) return std::to_string(numerator);
    return std::to_string(numerator) + "/" + std::to_string(denominator);
}

Int cusp_width(const Subgroup& group, const GroupElement& tau) {
    const Int bound = std::max<Int>(group.translation_period(), 1);
    const GroupElement tinv = tau.inverse();
    for (Int n = 1; n <= bound; ++n)
        if (group.contains(tau * GroupElement::U(n) * tinv)) return n;
    throw ConsistencyError("cusp_width: no translation found within the period");
}

bool cusps_equivalent(const Subgroup& group, const GroupElement& tau1, const GroupElement& tau2) {
    const Int period = group.translation_period();
    const GroupElement t1inv = tau1.inverse();
    for (Int b = 0; b < period; ++b)
        if (group.contains(tau2 * GroupElement::U(b) * t1inv)) return true;
    return false;
}

std::vector<Cusp> cusp_set(const Subgroup& group) {
    const Int index = group.index();
    const Int period = group.translation_period();
    std::vector<Cusp> cusps;
    Int total_width = 0;

    auto consider = [&](Int p, Int q) {
        GroupElement tau;
        if (q != 0) {
            const Bezout e = extended_gcd(p, q);
            tau = GroupElement(p, -e.y, q, e.x);
        }
        for (const Cusp& c : cusps)
            if (cusps_equivalent(group, c.scaling, tau)) return;
        Cusp c{q == 0 ? 1 : p, q, tau, cusp_width(group, tau)};
        total_width += c.width;
        cusps.push_back(c);
    };

    consider(1, 0);
    for (Int q = 1; total_width < index; ++q) {
        if (q > 4 * index * period + 4) throw ConsistencyError("cusp_set: search did not close");
        const Int pmax = q * period + period;
        for (Int p = 0; p <= pmax && total_width < index; ++p) {
            if (gcd(p, q) == 1) consider(p, q);
            if (p != 0 && gcd(p, q) == 1 && total_width < index) consider(-p, q);
        }
    }
    if (total_width != index) throw ConsistencyError("cusp_set: widths do not sum to the index");
    return cusps;
}

Reduction reduce_to_fd(Complex z) {
    if (!(z.imag() > 0)) throw DomainError("reduce_to_fd: point must lie in the upper half-plane");
    GroupElement g;
    for (int iter = 0; iter < 10'000; ++iter) {
        const double shift = std::round(z.real());
        if (shift != 0.0) {
            const Int n = static_cast<Int>(shift);
            z -= shift;
            g = GroupElement::U(-n) * g;
        }
        if (std::norm(z) < 1.0 - 1e-14) {
            z = -1.0 / z;
            g = GroupElement::S() * g;
        } else {
            return {g, z};
        }
    }
    throw ConsistencyError("reduce_to_fd: descent did not terminate");
}

std::vector<GroupElement> ball(Complex z, double radius, std::size_t budget) {
    std::vector<GroupElement> out;
    if (!(radius > 0)) return out;
    const double x = z.real(), y = z.imag();
    auto push = [&](Int c, Int d) {
        GroupElement g = GroupElement::with_bottom_row(c, d);
        const double shift = std::floor(g.act(z).real() - x + 0.5);
        if (shift != 0.0) g = GroupElement::U(-static_cast<Int>(shift)) * g;
        out.push_back(g);
        if (out.size() > budget) throw ResourceError("ball: element budget exceeded");
    };
    if (radius >= 1.0) {
        push(0, 1);
        push(0, -1);
    }
    const Int cmax = static_cast<Int>(std::floor(radius / y));
    for (Int c = 1; c <= cmax; ++c) {
        const double rem = radius * radius - static_cast<double>(c * c) * y * y;
        if (rem < 0) continue;
        const double r = std::sqrt(rem);
        const double centre = -static_cast<double>(c) * x;
        const Int dlo = static_cast<Int>(std::ceil(centre - r));
        const Int dhi = static_cast<Int>(std::floor(centre + r));
        for (Int d = dlo; d <= dhi; ++d) {
            if (gcd(c, d) != 1) continue;
            if (std::abs(static_cast<double>(c) * z + static_cast<double>(d)) > radius) continue;
            push(c, d);
            push(-c, -d);
        }
    }
    return out;
}

double lattice_tail_bound(Complex z, double radius, double s) {
    if (!(s > 2.0)) throw DomainError("lattice_tail_bound: exponent must exceed 2");
    const double y = z.imag();
    const double delta = 1.0 + std::abs(z);
    const double r = std::max(radius, 1e-300);
    // N(t) <= pi (t + delta)^2 / y and summation by parts against s t^{-s-1}.
    return kPi / y * s *
           (std::pow(r, 2.0 - s) / (s - 2.0) + 2.0 * delta * std::pow(r, 1.0 - s) / (s - 1.0) +
            delta * delta * std::pow(r, -s) / s);
}

}  // namespace suplab
