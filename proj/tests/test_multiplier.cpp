#include <doctest.h>

#include <random>

#include "suplab/errors.hpp"
#include "suplab/multiplier.hpp"

using namespace suplab;

namespace {

// Random element of SL2(Z) whose lower-left entry is a multiple of `step`.
GroupElement random_element(std::mt19937_64& rng, Int step, Int range = 30) {
    std::uniform_int_distribution<Int> uc(-range, range), um(-5, 5);
    for (;;) {
        const Int c = step * uc(rng), d = uc(rng);
        if (d == 0 && c == 0) continue;
        if (gcd(c, d) != 1) continue;
        return GroupElement::with_bottom_row(c, d) * GroupElement::U(um(rng));
    }
}

// eta(gamma z)^r / (eta(z)^r j(gamma, z)^{r/2}) from the q-series.
Complex eta_ratio(const GroupElement& g, Complex z, int r) {
    return std::pow(dedekind_eta(g.act(z)) / dedekind_eta(z), r) / principal_pow(g.j(z), 0.5 * r);
}

}  // namespace

TEST_CASE("sigma examples") {
    for (Int a : {-3, 0, 2})
        for (Int b : {-1, 4})
            for (double k : {0.5, 1.0, 12.0, 7.3}) CHECK(std::abs(sigma(GroupElement::U(a), GroupElement::U(b), k) - 1.0) < 1e-14);
    CHECK(std::abs(sigma(GroupElement::S(), GroupElement::S(), 0.5) - 1.0) < 1e-14);
    CHECK(std::abs(sigma(GroupElement::S(), GroupElement::S(), 1.0) - 1.0) < 1e-14);
    // (-1)^{1/2} (-1)^{1/2} / 1^{1/2} = i * i
    const GroupElement m = GroupElement::minus_identity();
    CHECK(std::abs(sigma(m, m, 0.5) + 1.0) < 1e-14);
}

TEST_CASE("Dedekind sums and Jacobi symbols against brute force") {
    auto saw = [](double x) { return x == std::floor(x) ? 0.0 : x - std::floor(x) - 0.5; };
    for (Int k = 1; k <= 40; ++k)
        for (Int h = -k; h <= 2 * k; ++h) {
            if (gcd(h, k) != 1) continue;
            double s = 0.0;
            for (Int n = 1; n < k; ++n) s += saw(static_cast<double>(n) / k) * saw(static_cast<double>(h * n) / k);
            CHECK(dedekind_sum(h, k) == doctest::Approx(s).epsilon(1e-13).scale(1.0));
        }
    for (Int p : {3, 5, 7, 11, 13, 29}) {
        for (Int a = -30; a <= 30; ++a) {
            Int e = 1, base = floor_mod(a, p);
            for (Int i = 0; i < (p - 1) / 2; ++i) e = e * base % p;
            const int expected = base == 0 ? 0 : (e == 1 ? 1 : -1);
            CHECK(jacobi_symbol(a, p) == expected);
        }
    }
    CHECK(jacobi_symbol(2, 15) == 1);  // (2/3)(2/5) = (-1)(-1)
    CHECK_THROWS_AS(jacobi_symbol(1, 4), DomainError);
}

TEST_CASE("eta and theta q-series") {
    CHECK(std::abs(dedekind_eta({0.0, 1.0}) - std::tgamma(0.25) / (2.0 * std::pow(kPi, 0.75))) < 1e-14);
    CHECK(std::abs(jacobi_theta({0.0, 1.0}) - (1.0 + 2 * (std::exp(-kTwoPi) + std::exp(-4 * kTwoPi)))) < 1e-12);
    CHECK_THROWS_AS(dedekind_eta({0.3, 0.0}), DomainError);
}

TEST_CASE("multiplier examples") {
    const auto triv = MultiplierSystem::trivial(12);
    CHECK(upsilon(triv, GroupElement::S()) == Complex(1.0));
    const auto eta1 = MultiplierSystem::eta_power(1);
    CHECK(eta1.weight() == 0.5);
    CHECK(std::abs(upsilon(eta1, GroupElement::U()) - std::polar(1.0, kPi / 12)) < 1e-15);
    const auto eta24 = MultiplierSystem::eta_power(24);
    CHECK(std::abs(upsilon(eta24, GroupElement::S()) - 1.0) < 1e-13);
    // Delta(-1/i) = i^12 Delta(i)
    const Complex d1 = std::pow(dedekind_eta(GroupElement::S().act({0.0, 1.0})), 24);
    CHECK(std::abs(d1 - std::pow(Complex(0.0, 1.0), 12) * std::pow(dedekind_eta({0.0, 1.0}), 24)) < 1e-16);
    const auto th = MultiplierSystem::theta();
    CHECK(upsilon(th, GroupElement::U()) == Complex(1.0));
    CHECK_THROWS_AS(upsilon(th, GroupElement::S()), MembershipError);
}

TEST_CASE("construction enforces upsilon(-I) = e^{-i pi k}") {
    CHECK_THROWS_AS(MultiplierSystem::trivial(3), DomainError);
    CHECK_THROWS_AS(MultiplierSystem::trivial(2.5), DomainError);
    CHECK_THROWS_AS(MultiplierSystem::theta(Subgroup::full()), DomainError);
    CHECK_THROWS_AS(MultiplierSystem::theta(Subgroup::gamma0(2)), DomainError);
    CHECK_NOTHROW(MultiplierSystem::theta(Subgroup::gamma0(12)));
    CHECK_THROWS_AS(MultiplierSystem::custom("one", 1.0, Subgroup::full(), [](const GroupElement&) { return Complex(1.0); }),
                    DomainError);
    for (int r = 1; r <= 48; ++r) CHECK_NOTHROW(MultiplierSystem::eta_power(r));
}

TEST_CASE("closed-form multipliers match the q-series") {
    std::mt19937_64 rng(5);
    const Complex z{0.17, 0.9};
    double worst_eta = 0.0, worst_theta = 0.0;
    for (int t = 0; t < 100; ++t) {
        const GroupElement g = random_element(rng, 1, 12);
        for (int r : {1, 2, 5}) {
            const auto sys = MultiplierSystem::eta_power(r);
            worst_eta = std::max(worst_eta, std::abs(upsilon(sys, g) - eta_ratio(g, z, r)));
        }
        const GroupElement h = random_element(rng, 4, 5);
        const Complex direct = jacobi_theta(h.act(z)) / (jacobi_theta(z) * principal_pow(h.j(z), 0.5));
        worst_theta = std::max(worst_theta, std::abs(upsilon(MultiplierSystem::theta(), h) - direct));
    }
    CHECK(worst_eta < 1e-10);
    CHECK(worst_theta < 1e-10);
}

TEST_CASE("cocycle law and unitarity on random pairs") {
    std::mt19937_64 rng(17);
    const std::vector<MultiplierSystem> systems = {
        MultiplierSystem::trivial(12), MultiplierSystem::trivial(4, Subgroup::gamma0(3)),
        MultiplierSystem::eta_power(1), MultiplierSystem::eta_power(2), MultiplierSystem::eta_power(7),
        MultiplierSystem::theta()};
    for (const auto& sys : systems) {
        const Int step = sys.kind() == MultiplierSystem::Kind::Theta ? 4 : sys.group().level();
        double worst = 0.0, unit = 0.0;
        for (int t = 0; t < 200; ++t) {
            const GroupElement a = random_element(rng, step), b = random_element(rng, step);
            const Complex lhs = upsilon(sys, a * b);
            const Complex rhs = sigma(a, b, sys.weight()) * upsilon(sys, a) * upsilon(sys, b);
            worst = std::max(worst, std::abs(lhs - rhs));
            unit = std::max(unit, std::abs(std::abs(upsilon(sys, a)) - 1.0));
        }
        CHECK_MESSAGE(worst <= 1e-10, sys.descriptor());
        CHECK(unit <= 1e-12);
    }
}

TEST_CASE("conjugate multipliers") {
    std::mt19937_64 rng(23);
    const auto eta1 = MultiplierSystem::eta_power(1);
    const auto th = MultiplierSystem::theta();
    for (int t = 0; t < 50; ++t) {
        const GroupElement tau = random_element(rng, 1), g = random_element(rng, 1);
        CHECK(std::abs(conjugate_upsilon(eta1, tau, g) - upsilon(eta1, g)) < 1e-10);
        const GroupElement tau4 = random_element(rng, 4), g4 = random_element(rng, 4);
        CHECK(std::abs(conjugate_upsilon(th, tau4, g4) - upsilon(th, g4)) < 1e-10);
        CHECK(std::abs(conjugate_upsilon(th, GroupElement::identity(), g4) - upsilon(th, g4)) < 1e-15);
    }
    // eta^S(U) by the definition and through the q-series of eta
    const GroupElement S = GroupElement::S(), U = GroupElement::U();
    const Complex z{0.2, 1.1};
    const GroupElement gamma = S * U * S.inverse();
    const Complex nu = dedekind_eta(gamma.act(S.act(z))) / dedekind_eta(S.act(z));
    const Complex direct = nu * principal_pow(S.j(z), 0.5) / principal_pow(S.j(U.act(z)), 0.5) /
                           principal_pow(U.j(z), 0.5);
    CHECK(std::abs(conjugate_upsilon(eta1, S, U) - direct) < 1e-10);
    // S is not in Gamma0(4): S U^4 S^{-1} = (1, 0; -4, 1) is, so the conjugate is defined
    CHECK_NOTHROW(conjugate_upsilon(th, S, GroupElement::U(4)));
    CHECK_THROWS_AS(conjugate_upsilon(th, S, U), MembershipError);
}

TEST_CASE("cusp parameters") {
    const Cusp inf = cusp_set(Subgroup::full()).front();
    auto p = cusp_parameter(MultiplierSystem::trivial(12), inf);
    CHECK(p.kappa == 0.0);
    CHECK(p.eta_floor == 1.0);
    p = cusp_parameter(MultiplierSystem::eta_power(1), inf);
    CHECK(p.kappa == doctest::Approx(1.0 / 24).epsilon(1e-13));
    CHECK(p.eta_floor == p.kappa);
    CHECK(cusp_parameter(MultiplierSystem::eta_power(2), inf).kappa == doctest::Approx(1.0 / 12).epsilon(1e-13));
    CHECK(cusp_parameter(MultiplierSystem::eta_power(24), inf).kappa == 0.0);
    CHECK(cusp_parameter(MultiplierSystem::eta_power(25), inf).kappa == doctest::Approx(1.0 / 24).epsilon(1e-12));

    std::mt19937_64 rng(31);
    for (const auto& sys : {MultiplierSystem::theta(), MultiplierSystem::eta_power(3, Subgroup::gamma0(6)),
                            MultiplierSystem::trivial(2, Subgroup::gamma0(11))}) {
        const Int step = sys.kind() == MultiplierSystem::Kind::Theta ? 4 : sys.group().level();
        for (const Cusp& c : cusp_set(sys.group())) {
            const auto base = cusp_parameter(sys, c);
            CHECK(base.kappa >= 0.0);
            CHECK(base.kappa < 1.0);
            const Complex e = std::polar(1.0, kTwoPi * base.kappa);
            CHECK(std::abs(e - conjugate_upsilon(sys, c.scaling, GroupElement::U(c.width))) < 1e-10);
            // other scaling matrices of the same cusp: gamma tau (+-U^m) with gamma in the group
            for (int t = 0; t < 10; ++t) {
                const GroupElement g = random_element(rng, step, 8);
                std::uniform_int_distribution<Int> um(-4, 4);
                GroupElement tau = g * c.scaling * GroupElement::U(um(rng));
                if (t % 2) tau = -tau;
                const double kappa = cusp_parameter(sys, tau, c.width).kappa;
                const double diff = std::abs(kappa - base.kappa);
                CHECK(std::min(diff, 1.0 - diff) < 1e-10);
            }
        }
    }
    // theta is nonzero at inf and 0 and vanishes at the irregular cusp 1/2
    for (const Cusp& c : cusp_set(Subgroup::gamma0(4))) {
        const double kappa = cusp_parameter(MultiplierSystem::theta(), c).kappa;
        CHECK(kappa == doctest::Approx(c.to_string() == "1/2" ? 0.25 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("descriptors") {
    CHECK(MultiplierSystem::parse("trivial:k=12").weight() == 12.0);
    CHECK(MultiplierSystem::parse("eta:r=2").weight() == 1.0);
    CHECK(MultiplierSystem::parse("theta").group().descriptor() == "gamma0:4");
    CHECK(MultiplierSystem::parse("trivial:k=4", Subgroup::gamma0(5)).group().level() == 5);
    for (const char* s : {"trivial:k=12", "eta:r=2", "theta"})
        CHECK(MultiplierSystem::parse(s).descriptor() == s);
    for (const char* s : {"", "trivial", "trivial:k=", "trivial:k=3", "eta:r=0", "eta:r=1.5", "eta:k=2", "bogus:k=2"})
        CHECK_THROWS_AS(MultiplierSystem::parse(s), DomainError);
}
