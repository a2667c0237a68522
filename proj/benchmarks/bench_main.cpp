#include <benchmark/benchmark.h>

#include "suplab/bergman.hpp"
#include "suplab/bessel.hpp"
#include "suplab/forms.hpp"
#include "suplab/spectral.hpp"
#include "suplab/supnorm.hpp"

using namespace suplab;

static void BM_BesselJ(benchmark::State& state) {
    const double rho = static_cast<double>(state.range(0));
    const double xs[] = {0.1 * rho, rho - std::cbrt(rho), rho, 1.5 * rho, 10.0 * rho};
    for (auto _ : state)
        for (double x : xs) benchmark::DoNotOptimize(bessel_j(rho, x));
    state.SetItemsProcessed(state.iterations() * 5);
}
BENCHMARK(BM_BesselJ)->Arg(10)->Arg(100)->Arg(1000);

static void BM_BesselRef(benchmark::State& state) {
    const double rho = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bessel_ref(BesselKind::J, rho, 0.9 * rho));
}
BENCHMARK(BM_BesselRef)->Arg(10)->Arg(100);

static void BM_Kloosterman(benchmark::State& state) {
    const KloostermanSpec spec{MultiplierSystem::eta_power(1), GroupElement::identity(), 1, 2, state.range(0)};
    for (auto _ : state) benchmark::DoNotOptimize(kloosterman(spec));
}
BENCHMARK(BM_Kloosterman)->Arg(7)->Arg(97)->Arg(997);

static void BM_CoeffSquareSum(benchmark::State& state) {
    const auto sys = MultiplierSystem::trivial(12);
    for (auto _ : state) benchmark::DoNotOptimize(coeff_square_sum(sys, {}, 1, state.range(0), 1).value);
}
BENCHMARK(BM_CoeffSquareSum)->Arg(400)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_KernelDiagonal(benchmark::State& state) {
    const auto sys = MultiplierSystem::trivial(static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(basis_sum_diag(sys, {}, Complex(0.1, 1.3), 1e-8).value);
}
BENCHMARK(BM_KernelDiagonal)->Arg(12)->Arg(48)->Unit(benchmark::kMillisecond);

static void BM_MajorantSum(benchmark::State& state) {
    const double k = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(majorant_sum(Complex(0.5, 1.0), k, 1e-4).value);
}
BENCHMARK(BM_MajorantSum)->Arg(6)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_PeterssonNorm(benchmark::State& state) {
    const CuspForm d = eta_power_form(12);
    for (auto _ : state) benchmark::DoNotOptimize(petersson_norm(d, 1e-10));
}
BENCHMARK(BM_PeterssonNorm)->Unit(benchmark::kMillisecond);

static void BM_OrthonormalBasis(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(orthonormal_basis(static_cast<int>(state.range(0))).condition);
}
BENCHMARK(BM_OrthonormalBasis)->Arg(24)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_BasisDensity(benchmark::State& state) {
    const OrthonormalBasis b = orthonormal_basis(48);
    for (auto _ : state) benchmark::DoNotOptimize(basis_density(b.forms, Complex(0.2, 3.8)));
}
BENCHMARK(BM_BasisDensity);

static void BM_SSum(benchmark::State& state) {
    const SumSpec spec{static_cast<double>(state.range(0)), 0.5, 0.3};
    for (auto _ : state) benchmark::DoNotOptimize(s_sum(spec));
}
BENCHMARK(BM_SSum)->Arg(1)->Arg(40);
BENCHMARK_MAIN();
