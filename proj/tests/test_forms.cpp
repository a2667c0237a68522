#include <doctest.h>

#include <chrono>

#include "suplab/errors.hpp"
#include "suplab/forms.hpp"
#include "suplab/spectral.hpp"

using namespace suplab;

namespace {

const CuspForm& delta() {
    static const CuspForm d = eta_power_form(12);
    return d;
}

double delta_norm() {
    static const double n = petersson_norm(delta());
    return n;
}

}  // namespace

TEST_CASE("eta power expansions") {
    const CuspForm& d = delta();
    CHECK(d.kappa == 0.0);
    CHECK(d.first == 1);
    CHECK(d.coefficient(1).real() == 1.0);
    CHECK(d.coefficient(2).real() == -24.0);
    CHECK(d.coefficient(3).real() == 252.0);
    CHECK(d.coefficient(4).real() == -1472.0);
    CHECK(d.coefficient(11).real() == 534612.0);
    CHECK(d.coefficient(0) == Complex(0.0));

    const CuspForm e1 = eta_power_form(1);
    CHECK(e1.kappa == doctest::Approx(1.0 / 12).epsilon(1e-14));
    CHECK(e1.first == 0);
    // eta^2 = q^{1/12} (1 - 2q - q^2 + 2q^3 + q^4 + 2q^5 - 2q^6 ...)
    const double eta2[] = {1, -2, -1, 2, 1, 2, -2};
    for (int m = 0; m < 7; ++m) CHECK(e1.coefficient(m).real() == eta2[m]);

    const CuspForm short_d = eta_power_form(12, 10);
    for (Int m = 1; m <= 10; ++m) CHECK(short_d.coefficient(m) == d.coefficient(m));

    for (int r : {1, 5, 13, 17}) {
        const CuspForm f = eta_power_form(r);
        double worst = 0.0;
        for (const auto& c : f.coefficients) worst = std::max(worst, std::abs(c.imag()));
        CHECK(worst < 1e-14);
        // exact agreement with the product formula
        for (Complex z : {Complex(0.1, 0.9), Complex(-0.3, 1.4)}) {
            const Complex want = std::pow(dedekind_eta(z), 2 * r);
            CHECK(std::abs(eval_form(f, z) - want) < 1e-11 * std::abs(want));
        }
    }
    CHECK_THROWS_AS(eta_power_form(0), DomainError);
}

TEST_CASE("evaluation") {
    const CuspForm& d = delta();
    // eta(i) = Gamma(1/4) / (2 pi^{3/4})
    const double eta_i = std::tgamma(0.25) / (2.0 * std::pow(kPi, 0.75));
    const Complex di = eval_form(d, Complex(0.0, 1.0));
    CHECK(di.real() == doctest::Approx(std::pow(eta_i, 24)).epsilon(1e-13));
    CHECK(di.real() == doctest::Approx(0.0017853).epsilon(1e-4));
    CHECK(std::abs(di.imag()) < 1e-18);

    const Complex z(0.5, 1.0);
    const Complex lhs = eval_form(d, -1.0 / z);
    CHECK(std::abs(lhs - std::pow(z, 12) * eval_form(d, z)) < 1e-9 * std::abs(lhs));

    const CuspForm e5 = eta_power_form(5);
    const Complex w(0.2, 0.7);
    CHECK(std::abs(eval_form(e5, w + 1.0) - unit_phase(e5.kappa) * eval_form(e5, w)) < 1e-14);

    CHECK_THROWS_AS(eval_form(d, Complex(0.1, 0.01)), AccuracyError);
    // reduction reaches points far below F_I
    const Complex low(0.137, 0.02);
    const Complex want = std::pow(dedekind_eta(reduce_to_fd(low).reduced), 24);
    const Complex got = eval_reduced(d, low) * principal_pow(reduce_to_fd(low).gamma.j(low), 12);
    CHECK(std::abs(got - want) < 1e-10 * std::abs(want));
    const FormValue fv = eval_form_with_tail(d, Complex(0.0, 1.0));
    CHECK(fv.tail_bound >= 0.0);
    CHECK(fv.tail_bound < 1e-100);
}

TEST_CASE("Petersson norm of Delta") {
    const double n = delta_norm();
    // independent route: the Kloosterman-Bessel series gives 1 / <Delta, Delta>
    const auto inv = coeff_square_sum(MultiplierSystem::trivial(12), {}, 1, 10000);
    CHECK(n * inv.value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(n == doctest::Approx(1.0354e-6).epsilon(1e-4));
    CHECK(petersson_norm(scaled(delta(), 2.0)) == doctest::Approx(4.0 * n).epsilon(1e-12));
    CHECK(std::abs(petersson_inner(delta(), scaled(delta(), Complex(0.0, 1.0))) - Complex(0.0, -n)) < 1e-12 * n);
}

TEST_CASE("norm is independent of the subgroup") {
    const double n = delta_norm();
    for (const Subgroup& g : {Subgroup::gamma0(2), Subgroup::gamma0(3), Subgroup::gamma(2)}) {
        const CuspForm r = restrict_to(delta(), g);
        CHECK(r.group().descriptor() == g.descriptor());
        const Complex z(0.11, 0.83);
        CHECK(std::abs(eval_form(r, z) - eval_form(delta(), z)) < 1e-14 * std::abs(eval_form(delta(), z)));
        CHECK(petersson_norm(r) == doctest::Approx(n).epsilon(1e-8));
    }
    // eta^4 on Gamma0(2): width 1, kappa 1/6
    const CuspForm e2 = eta_power_form(2);
    const CuspForm r2 = restrict_to(e2, Subgroup::gamma0(2));
    CHECK(r2.kappa == doctest::Approx(1.0 / 6).epsilon(1e-14));
}

TEST_CASE("slash unitarity") {
    const double n = delta_norm();
    const Subgroup g = Subgroup::gamma0(2);
    for (const GroupElement& t : {GroupElement::S(), GroupElement(1, 0, 1, 1), GroupElement(2, 1, 1, 1)}) {
        const Subgroup conj = conjugate_subgroup(g, t);
        const auto f = [&](Complex z) { return slash(delta(), t, z); };
        const auto v = petersson_inner(f, f, conj, 12.0, 1e-14);
        CHECK(v.value.real() == doctest::Approx(n).epsilon(1e-8));
        CHECK(std::abs(v.value.imag()) < 1e-12 * n);
    }
}

TEST_CASE("monomials and the orthonormal basis") {
    const CuspForm m = monomial_form(1, 0, 0);
    for (Int j = 1; j <= 50; ++j) CHECK(m.coefficient(j) == delta().coefficient(j));
    // Delta E4: q + 216 q^2 - 3348 q^3 + ...
    const CuspForm de4 = monomial_form(1, 1, 0);
    CHECK(de4.weight() == 16.0);
    CHECK(de4.coefficient(2).real() == 216.0);
    CHECK(de4.coefficient(3).real() == -3348.0);
    CHECK_THROWS_AS(monomial_form(0, 1, 0), DomainError);

    const int dims[][2] = {{12, 1}, {14, 0}, {16, 1}, {24, 2}, {26, 1}, {36, 3}, {38, 2}, {48, 4}, {60, 5}};
    for (const auto& d : dims) CHECK(cusp_form_dimension(d[0]) == d[1]);

    const OrthonormalBasis b12 = orthonormal_basis(12);
    REQUIRE(b12.forms.size() == 1);
    CHECK(petersson_norm(b12.forms[0]) == doctest::Approx(1.0).epsilon(1e-8));

    for (int k : {24, 36}) {
        const OrthonormalBasis b = orthonormal_basis(k);
        REQUIRE(static_cast<int>(b.forms.size()) == cusp_form_dimension(k));
        CHECK(b.condition < 1e8);
        for (std::size_t i = 0; i < b.forms.size(); ++i)
            for (std::size_t j = i; j < b.forms.size(); ++j) {
                const Complex v = petersson_inner(b.forms[i], b.forms[j], 1e-12);
                CHECK(std::abs(v - (i == j ? 1.0 : 0.0)) < 1e-7);
            }
    }
    CHECK_THROWS_AS(orthonormal_basis(13), DomainError);
}

TEST_CASE("JSON round trip") {
    const CuspForm f = eta_power_form(5, 30);
    const CuspForm g = form_from_json(to_json(f));
    CHECK(g.system.descriptor() == f.system.descriptor());
    CHECK(g.group().descriptor() == f.group().descriptor());
    CHECK(g.kappa == f.kappa);
    CHECK(g.width == f.width);
    CHECK(g.coefficients == f.coefficients);
    const CuspForm r = restrict_to(delta(), Subgroup::gamma0(2));
    const CuspForm r2 = form_from_json(to_json(r));
    CHECK(r2.ambient.has_value());
    CHECK(eval_reduced(r2, Complex(0.3, 0.2)) == eval_reduced(r, Complex(0.3, 0.2)));
    CHECK_THROWS_AS(form_from_json("{\"group\": 3}"), DomainError);
}
