#include <doctest.h>

#include "suplab/errors.hpp"
#include "suplab/quadrature.hpp"

using namespace suplab;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    const auto& r = gauss_legendre(8);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 14);
    CHECK(s == doctest::Approx(2.0 / 15.0).epsilon(1e-14));
}

TEST_CASE("1-D rules") {
    auto f = [](double x) { return std::exp(-x) * std::sin(3 * x); };
    const double exact = (3.0 - std::exp(-2.0) * (std::sin(6.0) + 3 * std::cos(6.0))) / 10.0;
    CHECK(integrate_adaptive(f, 0.0, 2.0, 1e-13).value == doctest::Approx(exact).epsilon(1e-12));
    CHECK(integrate_tanh_sinh(f, 0.0, 2.0, 1e-13).value == doctest::Approx(exact).epsilon(1e-12));
    auto g = [](double x) { return std::exp(-x * x); };
    CHECK(integrate_exp_sinh(g, 0.0, 1e-13).value == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-12));
    // endpoint singularity handled by tanh-sinh
    auto h = [](double x) { return 1.0 / std::sqrt(x); };
    CHECK(integrate_tanh_sinh(h, 0.0, 1.0, 1e-10).value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("hyperbolic area of F_I") {
    const auto r = integrate_fd([](Complex) { return 1.0; });
    CHECK(r.value == doctest::Approx(kPi / 3).epsilon(1e-12));
    CHECK(r.error <= kDefaultQuadTolerance);
}

TEST_CASE("indicator of the region y > 2") {
    const auto r = integrate_fd([](Complex z) { return z.imag() > 2.0 ? 1.0 : 0.0; }, {}, 1e-10);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("declared cusp decay closes the tail analytically") {
    // e^{-2y}: integral over F_I of e^{-2y} dx dy / y^2 against an exact-cusp reference
    auto f = [](Complex z) { return std::exp(-2.0 * z.imag()); };
    const auto exact_cusp = integrate_fd(f, {}, 1e-12);
    FdDomain d;
    d.cusp_decay = CuspDecay{2.0, 1.0, 0.0};
    const auto closed = integrate_fd(f, d, 1e-10);
    CHECK(std::abs(closed.value - exact_cusp.value) <= 1e-10 + closed.error);
}

TEST_CASE("translates: the three cosets of Gamma0(2) give three times the area") {
    FdDomain d;
    d.translates = {GroupElement::identity(), GroupElement::S(), GroupElement::S() * GroupElement::U(1)};
    const auto r = integrate_fd([](Complex) { return 1.0; }, d);
    CHECK(r.value == doctest::Approx(kPi).epsilon(1e-11));
}

TEST_CASE("monotone under domination") {
    auto f1 = [](Complex z) { return std::exp(-z.imag()) * (1 + std::cos(6 * z.real())) / 2; };
    auto f2 = [](Complex z) { return std::exp(-z.imag()); };
    const double tol = 1e-9;
    const double r1 = integrate_fd(f1, {}, tol).value, r2 = integrate_fd(f2, {}, tol).value;
    CHECK(r1 <= r2 + 2 * tol);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(integrate_fd([](Complex) { return 1.0; }, {}, 0.0), DomainError);
    // a wildly oscillating integrand cannot meet 1e-14 in 50 cells
    try {
        integrate_fd_vector([](Complex z, std::span<double> o) { o[0] = std::sin(400 * z.real()) * z.imag(); },
                            1, {}, 1e-14, 50);
        FAIL("expected AccuracyError");
    } catch (const AccuracyError& e) {
        CHECK(std::isfinite(e.best_estimate()));
    }
}
