#include <doctest.h>

#include <random>

#include "suplab/errors.hpp"
#include "suplab/numerics.hpp"

using namespace suplab;

TEST_CASE("principal_pow on the documented examples") {
    for (double k : {-3.5, 0.0, 0.25, 7.0, 123.4}) {
        const Complex r = principal_pow({1.0, 0.0}, k);
        CHECK(r.real() == doctest::Approx(1.0));
        CHECK(r.imag() == doctest::Approx(0.0));
    }
    const Complex minus_one_half = principal_pow({-1.0, 0.0}, 0.5);
    CHECK(std::abs(minus_one_half - Complex{0.0, 1.0}) < 1e-15);
    const Complex i_half = principal_pow({0.0, 1.0}, 0.5);
    CHECK(i_half.real() == doctest::Approx(0.70710678118654752).epsilon(1e-14));
    CHECK(i_half.imag() == doctest::Approx(0.70710678118654752).epsilon(1e-14));
}

TEST_CASE("negative real axis takes arg +pi even with a negative zero") {
    CHECK(principal_arg({-2.0, -0.0}) == doctest::Approx(kPi));
    for (double k : {0.5, 1.0 / 3.0, 12.0, 2.75}) {
        const Complex v = principal_pow({-1.0, -0.0}, k);
        CHECK(std::abs(v - std::exp(Complex{0.0, k * kPi})) < 1e-14);
    }
}

TEST_CASE("zero base") {
    CHECK(principal_pow({0.0, 0.0}, 2.5) == Complex{0.0, 0.0});
    CHECK_THROWS_AS(principal_pow({0.0, 0.0}, 0.0), DomainError);
    CHECK_THROWS_AS(principal_pow({0.0, 0.0}, -1.0), DomainError);
}

TEST_CASE("integer powers agree with repeated multiplication") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Complex w{u(rng), u(rng)};
        if (std::abs(w) < 1e-3) continue;
        for (int n = -6; n <= 12; ++n) {
            Complex direct{1.0, 0.0};
            for (int i = 0; i < std::abs(n); ++i) direct *= w;
            if (n < 0) direct = 1.0 / direct;
            const Complex p = principal_pow(w, n);
            CHECK(std::abs(p - direct) <= 1e-12 * std::abs(direct));
        }
    }
}

TEST_CASE("exponent addition away from the cut") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(-kPi / 2 + 1e-9, kPi / 2 - 1e-9), mag(0.1, 5.0), e(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const Complex w = std::polar(mag(rng), ang(rng));
        const double a = e(rng), b = e(rng);
        const Complex lhs = principal_pow(w, a) * principal_pow(w, b);
        const Complex rhs = principal_pow(w, a + b);
        CHECK(std::abs(lhs - rhs) <= 1e-13 * std::abs(rhs));
    }
}

TEST_CASE("LogScaleReal round trip and arithmetic") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ex(-300.0, 300.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = std::pow(10.0, ex(rng));
        const double back = LogScaleReal::from_double(v).to_double();
        CHECK(std::abs(back - v) <= 4 * std::numeric_limits<double>::epsilon() * v * std::max(1.0, std::abs(std::log(v))));
    }
    CHECK(LogScaleReal::from_double(0.0).is_zero());
    CHECK(LogScaleReal::from_double(-3.0).sign() == -1);

    // y^k for k far past the double range
    const LogScaleReal big = LogScaleReal::from_double(50.0).pow(10000.0);
    CHECK(big.log_abs() == doctest::Approx(10000.0 * std::log(50.0)));
    const LogScaleReal prod = big * LogScaleReal::from_double(50.0).pow(-10000.0);
    CHECK(prod.to_double() == doctest::Approx(1.0));

    const auto s = LogScaleReal::from_double(3.0) + LogScaleReal::from_double(-5.0);
    CHECK(s.to_double() == doctest::Approx(-2.0));
    CHECK((LogScaleReal::from_double(2.0) - LogScaleReal::from_double(2.0)).is_zero());
    CHECK(LogScaleReal::from_double(-1.0) < LogScaleReal::from_double(0.5));
}

TEST_CASE("unit_phase is exact on quarter turns") {
    CHECK(unit_phase(0.25) == Complex{0.0, 1.0});
    CHECK(unit_phase(-0.5) == Complex{-1.0, 0.0});
    CHECK(unit_phase(7.0) == Complex{1.0, 0.0});
    CHECK(std::abs(unit_phase(1.0 / 24.0) - std::exp(Complex{0.0, kPi / 12.0})) < 1e-15);
}
