#include <doctest.h>

#include <random>

#include "suplab/bergman.hpp"
#include "suplab/errors.hpp"
#include "suplab/spectral.hpp"

using namespace suplab;

namespace {

GroupElement random_member(std::mt19937_64& rng, const Subgroup& g) {
    std::uniform_int_distribution<Int> u(-9, 9);
    for (;;) {
        const Int c = u(rng), d = u(rng);
        if ((c == 0 && d == 0) || gcd(c, d) != 1) continue;
        const GroupElement h = GroupElement::with_bottom_row(c, d) * GroupElement::U(u(rng));
        if (g.contains(h)) return h;
    }
}

double inverse_delta_norm() {
    static const double v = 1.0 / petersson_norm(eta_power_form(12));
    return v;
}

}  // namespace

TEST_CASE("kernel modularity in z") {
    std::mt19937_64 rng(7);
    const std::vector<MultiplierSystem> systems = {
        MultiplierSystem::trivial(12), MultiplierSystem::eta_power(17),
        MultiplierSystem::trivial(8, Subgroup::gamma0(4)), MultiplierSystem::eta_power(19, Subgroup::gamma0(2))};
    const Complex w(0.2, 1.1);
    for (const auto& sys : systems) {
        for (int t = 0; t < 4; ++t) {
            const Complex z(0.13 - 0.1 * t, 0.9 + 0.2 * t);
            GroupElement tau = random_member(rng, sys.group());
            while (tau.act(z).imag() < 0.2) tau = random_member(rng, sys.group());
            const Complex lhs = kernel(sys, tau.act(z), w, 1e-11).value;
            const Complex rhs = automorphy_factor(sys, tau, z) * kernel(sys, z, w, 1e-11).value;
            CHECK_MESSAGE(std::abs(lhs - rhs) < 1e-8 * std::abs(rhs), sys.descriptor() << " " << tau.to_string());
        }
    }
}

TEST_CASE("kernel refinement at z = w = i") {
    const auto sys = MultiplierSystem::trivial(12);
    const KernelValue coarse = kernel(sys, Complex(0, 1), Complex(0, 1), 1e-6);
    const KernelValue fine = kernel(sys, Complex(0, 1), Complex(0, 1), 1e-8);
    CHECK(std::isfinite(std::abs(fine.value)));
    CHECK(std::abs(fine.value) > 0.0);
    CHECK(std::abs(coarse.value - fine.value) < 1e-6 * std::abs(fine.value));
    CHECK(fine.truncation_radius >= coarse.truncation_radius);
    CHECK(fine.tail_bound <= coarse.tail_bound);
    CHECK(fine.tail_bound <= 1e-8);
    CHECK_THROWS_AS(kernel(MultiplierSystem::trivial(2), Complex(0, 1), Complex(0, 1), 1e-8), DomainError);
    CHECK_THROWS_AS(kernel(sys, Complex(0, -1), Complex(0, 1), 1e-8), DomainError);
    CHECK_THROWS_AS(basis_sum_diag(MultiplierSystem::eta_power(4), {}, Complex(0, 1)), DomainError);
}

TEST_CASE("diagonal sum against Delta") {
    const auto sys = MultiplierSystem::trivial(12);
    for (Complex z : {Complex(0, 1), Complex(0.5, 1), Complex(-0.2, 1.7), Complex(0.3, 4.5)}) {
        const DiagonalValue d = basis_sum_diag(sys, {}, z, 1e-8);
        const double want = std::norm(std::pow(dedekind_eta(z), 24)) * inverse_delta_norm();
        CHECK(d.value == doctest::Approx(want).epsilon(1e-7));
        CHECK(d.value > 0.0);
        CHECK(d.imag_residue <= d.tail_bound + d.rounding + 1e-8 * d.value);
    }
    // invariance of y^k sum |f_j|^2 under the group
    const Complex z(0.31, 0.77);
    const GroupElement g(2, 1, 1, 1);
    const double a = basis_sum_diag(sys, {}, z, 1e-9).value * std::pow(z.imag(), 12);
    const double b = basis_sum_diag(sys, {}, g.act(z), 1e-9).value * std::pow(g.act(z).imag(), 12);
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
}

TEST_CASE("diagonal sum at a second cusp") {
    // S_6(Gamma0(4)) = C eta(2z)^12; slashed by S it is -eta(z/2)^12 / 64
    const auto g4 = MultiplierSystem::trivial(6, Subgroup::gamma0(4));
    const double inv_norm = coeff_square_sum(g4, {}, 1, 2000).value;
    for (Complex z : {Complex(0.1, 0.95), Complex(-0.4, 1.1), Complex(0.25, 1.2)}) {
        // weight 6: the certified row tail decays only like R^{-4}
        const double at_inf = basis_sum_diag(g4, {}, z, 1e-5).value;
        CHECK(at_inf == doctest::Approx(std::norm(std::pow(dedekind_eta(2.0 * z), 12)) * inv_norm).epsilon(1e-5));
        const double at_zero = basis_sum_diag(g4, GroupElement::S(), z, 1e-5).value;
        CHECK(at_zero == doctest::Approx(std::norm(std::pow(dedekind_eta(0.5 * z), 12)) / 4096.0 * inv_norm).epsilon(1e-5));
    }
}

TEST_CASE("positivity on several systems") {
    const std::vector<std::pair<MultiplierSystem, GroupElement>> cases = {
        {MultiplierSystem::eta_power(17), GroupElement::identity()},
        {MultiplierSystem::eta_power(19, Subgroup::gamma0(2)), GroupElement::S()},
        {MultiplierSystem::trivial(8, Subgroup::gamma0(3)), GroupElement(1, 0, 1, 1)},
        {MultiplierSystem::trivial(16), GroupElement::identity()}};
    for (const auto& [sys, tau] : cases)
        for (Complex z : {Complex(0, 1), Complex(0.45, 0.9), Complex(-0.1, 2.5)}) CHECK(basis_sum_diag(sys, tau, z, 1e-8).value > 0.0);
}

TEST_CASE("cancellation between rows is reported") {
    // high in the cusp the +-I rows and the c != 0 rows cancel to e^{-4 pi y}
    CHECK_THROWS_AS(basis_sum_diag(MultiplierSystem::trivial(12), {}, Complex(0, 10), 1e-8), AccuracyError);
}

TEST_CASE("reproducing property") {
    const CuspForm d = eta_power_form(12);
    const CuspForm f = scaled(d, std::sqrt(inverse_delta_norm()));
    for (Complex w : {Complex(0, 1), Complex(0, 2)}) {
        const ReproduceCheck r = reproduce_check(f, w, 1e-6);
        CHECK(std::abs(r.lhs - r.rhs) <= 1e-5 * std::abs(r.rhs));
        // half the printed prefactor is far outside the tolerance
        CHECK(std::abs(r.lhs - 0.5 * r.rhs) > 0.4 * std::abs(r.rhs));
    }
    const ReproduceCheck one = reproduce_check(f, Complex(0, 2), 1e-6);
    const ReproduceCheck two = reproduce_check(scaled(f, 2.0), Complex(0, 2), 1e-6);
    CHECK(std::abs(two.lhs - 2.0 * one.lhs) < 1e-5 * std::abs(two.lhs));
}

TEST_CASE("absolute majorant") {
    // brute force over rows |c|, |d| <= 40 and all translates with |shift| <= 400
    const Complex z(0.1, 1.2);
    const double k = 12.0;
    double brute = 0.0;
    for (Int c = -40; c <= 40; ++c)
        for (Int d = -40; d <= 40; ++d) {
            if ((c == 0 && d == 0) || gcd(c, d) != 1) continue;
            const Complex zz = GroupElement::with_bottom_row(c, d).act(z);
            for (int b = -400; b <= 400; ++b) {
                const double dx = 0.5 * (z.real() - zz.real() - b), dy = 0.5 * (z.imag() + zz.imag());
                brute += std::pow(z.imag() * zz.imag(), 0.5 * k) / std::pow(dx * dx + dy * dy, 0.5 * k);
            }
        }
    const KernelValue m = majorant_sum(z, k, 1e-10);
    CHECK(m.value.real() == doctest::Approx(brute).epsilon(1e-8));
    // it dominates |y^k h(z, -conj z)|
    const KernelValue h = kernel(MultiplierSystem::trivial(12), z, -std::conj(z), 1e-12);
    CHECK(std::abs(h.value) * std::pow(z.imag(), k) <= m.value.real());
    CHECK_THROWS_AS(majorant_sum(z, 2.0), DomainError);
}
