// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "suplab/bergman.hpp"
#include "suplab/bessel.hpp"
#include "suplab/forms.hpp"
#include "suplab/spectral.hpp"
#include "suplab/supnorm.hpp"

using namespace suplab;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

GroupElement random_sl2(std::mt19937_64& rng, Int range, Int step = 1) {
    std::uniform_int_distribution<Int> u(-range, range), shift(-5, 5);
    for (;;) {
        const Int c = step * u(rng), d = u(rng);
        if ((c != 0 || d != 0) && gcd(c, d) == 1) return GroupElement::with_bottom_row(c, d) * GroupElement::U(shift(rng));
    }
}

// Relative distance, measured against the local oscillation amplitude past the turning point.
double bessel_distance(double rho, double x) {
    const LogScaleReal a = bessel_j_scaled(rho, x), b = bessel_ref_scaled(BesselKind::J, rho, x);
    const double da = a.to_double(), db = b.to_double();
    if (std::abs(db) < 1e-280) {
        if (a.is_zero() && b.is_zero()) return 0.0;
        if (std::abs(da - db) <= 1e-12) return 0.0;
        return std::abs(std::expm1(a.log_abs() - b.log_abs()));
    }
    const double amp = x > rho ? std::sqrt(2.0 / (kPi * std::sqrt(x * x - rho * rho + 1.0))) : 0.0;
    return std::abs(da - db) / std::max(std::abs(db), amp);
}

Verdict bessel_oracle() {
    double worst = 0.0;
    int points = 0;
    for (int i = 0; i < 20; ++i) {
        const double rho = i == 0 ? 0.0 : std::pow(300.0, i / 19.0);
        for (int j = 0; j < 10; ++j, ++points)
            worst = std::max(worst, bessel_distance(rho, std::max(rho, 1.0) * std::pow(10.0, -2.0 + 3.0 * j / 9.0)));
    }
    std::vector<std::pair<double, double>> langer;
    for (double rho : {30.0, 60.0, 120.0, 240.0}) {
        double w = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double x = rho * (0.5 + 1.5 * i / 200.0);
            if (x == rho) continue;
            w = std::max(w, std::abs(bessel_langer(rho, x).value - bessel_ref(BesselKind::J, rho, x)) * std::pow(rho, 4.0 / 3.0));
        }
        langer.emplace_back(rho, w);
    }
    const bool pass = points == 200 && worst <= 1e-8 && ratio_stable(langer);
    return {pass, "worst relative " + fmt(worst) + " on " + std::to_string(points) + " points, rho^{4/3} Langer error " +
                      fmt(langer.front().second) + " at 30, " + fmt(langer.back().second) + " at 240"};
}

Verdict petersson_poincare() {
    const CuspForm delta = eta_power_form(12);
    const double norm = petersson_norm(delta, 1e-12);
    double worst = 0.0;
    for (Int m = 1; m <= 3; ++m) {
        const double tau_m = delta.coefficient(m).real();
        const double got = coeff_square_sum(MultiplierSystem::trivial(12), {}, m, 10000).value;
        worst = std::max(worst, std::abs(got / (tau_m * tau_m / norm) - 1.0));
    }
    return {worst <= 1e-6, "max relative deviation " + fmt(worst) + " over m = 1, 2, 3 at c_max 1e4"};
}

Verdict reproducing() {
    const CuspForm d = eta_power_form(12);
    const CuspForm f = scaled(d, 1.0 / std::sqrt(petersson_norm(d, 1e-12)));
    double worst = 0.0, halved = INFINITY;
    for (Complex w : {Complex(0, 1), Complex(0, 2), Complex(0.3, 1.1), Complex(-0.4, 0.95), Complex(0.1, 1.6)}) {
        const ReproduceCheck r = reproduce_check(f, w, 1e-5);
        worst = std::max(worst, std::abs(r.lhs - r.rhs) / std::abs(r.rhs));
        halved = std::min(halved, std::abs(r.lhs - 0.5 * r.rhs) / std::abs(0.5 * r.rhs));
    }
    return {worst <= 1e-3 && halved > 1e-3,
            "max relative error " + fmt(worst) + " at 5 points; with half the prefactor it would be " + fmt(halved)};
}

Verdict routes() {
    std::vector<Complex> pts;
    for (int i = 0; i < 20; ++i) {
        const double x = -0.475 + 0.05 * i;
        pts.emplace_back(x, std::max(std::sqrt(1.0 - x * x), 0.9) + 0.15 * (i % 5));
    }
    const ScanReport r = route_cross_validation(eta_power_form(12), pts);
    double worst = 0.0;
    for (const auto& b : r.rows()) worst = std::max(worst, std::abs(b.ratio - 1.0));
    return {r.rows().size() == 20 && worst <= 1e-4, "max |Bergman / Fourier - 1| = " + fmt(worst) + " on 20 points"};
}

Verdict lemmas() {
    const ScanReport r = lemma_suite(100);
    return {r.passed && r.max_ratio() <= 1.0 + 1e-12,
            "max ratio " + format_double(r.max_ratio()) + " over " + std::to_string(r.rows().size()) + " checks"};
}

Verdict theorem3() {
    std::vector<int> ks;
    for (int k = 12; k <= 60; k += 4) ks.push_back(k);
    const ScanReport r = theorem3_scan(ks, 40);
    std::map<double, double> sup, lower;
    for (const auto& b : r.rows()) {
        if (b.name == "sup") sup[b.k] = b.lhs;
        if (b.name == "lower") lower[b.k] = b.lhs;
    }
    double lo = INFINITY, hi = 0.0;
    bool below = sup.size() == ks.size() && lower.size() == ks.size();
    for (const auto& [k, s] : sup) {
        const double v = s / std::pow(k, 1.5);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        below = below && lower[k] <= s;
    }
    return {r.passed && below && hi / lo <= 10.0,
            "sup / k^{3/2} in [" + fmt(lo) + ", " + fmt(hi) + "], range " + fmt(hi / lo) +
                (below ? ", lower bound below the sup at every k" : ", lower bound exceeds the sup")};
}

Verdict kloosterman_reduction() {
    double worst = 0.0;
    const auto triv = MultiplierSystem::trivial(12);
    for (Int m = 1; m <= 3; ++m)
        for (Int c = 1; c <= 20; ++c) {
            Complex brute = 0.0;
            for (Int d = 0; d < c; ++d) {
                if (gcd(d, c) != 1) continue;
                Int dbar = 0;
                while ((d * dbar) % c != 1 % c) ++dbar;
                brute += std::polar(1.0, kTwoPi * static_cast<double>((m * dbar + m * d) % c) / static_cast<double>(c));
            }
            worst = std::max(worst, std::abs(kloosterman({triv, {}, m, m, c}) - brute));
            worst = std::max(worst, std::abs(classical_kloosterman(m, m, c) - brute));
        }
    std::mt19937_64 rng(41);
    const std::vector<MultiplierSystem> systems = {
        MultiplierSystem::trivial(12), MultiplierSystem::theta(), MultiplierSystem::eta_power(1),
        MultiplierSystem::eta_power(5), MultiplierSystem::trivial(6, Subgroup::gamma0(6)),
        MultiplierSystem::eta_power(3, Subgroup::gamma0(2))};
    std::uniform_int_distribution<Int> um(-5, 5), uc(1, 40);
    std::uniform_int_distribution<std::size_t> us(0, systems.size() - 1);
    double bound = 0.0;
    for (int t = 0; t < 500; ++t) {
        const auto& sys = systems[us(rng)];
        const KloostermanSpec spec{sys, random_sl2(rng, 12), um(rng), um(rng), uc(rng)};
        const double n = static_cast<double>(cusp_width(sys.group(), spec.tau.inverse()));
        bound = std::max(bound, std::abs(kloosterman(spec)) / (n * n * static_cast<double>(spec.c)));
    }
    return {worst < 1e-11 && bound <= 1.0 + 1e-12,
            "max |W - S| = " + fmt(worst) + " for m <= 3, c <= 20; max |W| / (n^2 c) = " + fmt(bound) + " on 500 specs"};
}

Verdict stability() {
    struct Pin {
        std::string name;
        double coarse, fine, pinned;
    };
    std::vector<Pin> pins;
    bool passed = true;
    const auto add = [&](const std::string& name, const ScanReport& a, const ScanReport& b, double pinned) {
        passed = passed && a.passed && b.passed;
        pins.push_back({name, a.fitted_constant(), b.fitted_constant(), pinned});
    };
    add("method2", method2_scan({12, 24, 48}, 8), method2_scan({12, 24, 48}, 16), 0.22572446);
    add("method1low", method1_scan({12, 24, 48}, Method1Regime::Low, 4), method1_scan({12, 24, 48}, Method1Regime::Low, 8),
        0.047313496);
    add("method1large", method1_scan({12, 24, 48}, Method1Regime::Large, 4),
        method1_scan({12, 24, 48}, Method1Regime::Large, 8), 3.845819e-45);
    add("Bergmantrivial", bergman_trivial_scan({6, 12, 24, 48}, 8), bergman_trivial_scan({6, 12, 24, 48}, 16), 13.926535);
    const ScanReport r16 = region_scan({24, 48, 96}, 16), r32 = region_scan({24, 48, 96}, 32);
    const double region_pins[] = {2.18191, 5.1e-7, 15.1056, 5.0874};
    for (int i = 0; i < 4; ++i) {
        const std::string name = "region" + std::to_string(i + 1);
        ScanReport a(name), b(name);
        for (const auto& row : r16.rows())
            if (row.name == name) a.add(row);
        for (const auto& row : r32.rows())
            if (row.name == name) b.add(row);
        a.passed = r16.passed;
        b.passed = r32.passed;
        add(name, a, b, region_pins[i]);
    }
    std::ostringstream os;
    for (const auto& p : pins) {
        const double change = std::abs(p.fine / p.coarse - 1.0);
        const double drift = std::abs(p.fine / p.pinned - 1.0);
        passed = passed && change < 0.05 && drift < 0.05;
        os << (os.tellp() ? ", " : "") << p.name << ' ' << fmt(p.fine) << " (" << fmt(100.0 * change) << "%)";
    }
    return {passed, os.str()};
}

Verdict structural() {
    std::mt19937_64 rng(17);
    double cocycle = 0.0, jfactor = 0.0;
    const std::vector<MultiplierSystem> systems = {
        MultiplierSystem::trivial(12), MultiplierSystem::trivial(4, Subgroup::gamma0(3)), MultiplierSystem::eta_power(1),
        MultiplierSystem::eta_power(7), MultiplierSystem::theta()};
    for (const auto& sys : systems) {
        const Int step = sys.kind() == MultiplierSystem::Kind::Theta ? 4 : sys.group().level();
        for (int t = 0; t < 200; ++t) {
            const GroupElement a = random_sl2(rng, 30, step), b = random_sl2(rng, 30, step);
            cocycle = std::max(cocycle, std::abs(upsilon(sys, a * b) - sigma(a, b, sys.weight()) * upsilon(sys, a) * upsilon(sys, b)));
            const Complex z(0.1 * (t % 7) - 0.3, 0.5 + 0.1 * (t % 5));
            jfactor = std::max(jfactor, std::abs((a * b).j(z) - a.j(b.act(z)) * b.j(z)) / std::abs((a * b).j(z)));
        }
    }
    double kappa = 0.0;
    for (const auto& sys : {MultiplierSystem::theta(), MultiplierSystem::eta_power(3, Subgroup::gamma0(6)),
                            MultiplierSystem::trivial(2, Subgroup::gamma0(11))}) {
        const Int step = sys.kind() == MultiplierSystem::Kind::Theta ? 4 : sys.group().level();
        for (const Cusp& c : cusp_set(sys.group())) {
            const double base = cusp_parameter(sys, c).kappa;
            for (int t = 0; t < 10; ++t) {
                GroupElement tau = random_sl2(rng, 8, step) * c.scaling * GroupElement::U(t - 5);
                if (t % 2) tau = -tau;
                const double d = std::abs(cusp_parameter(sys, tau, c.width).kappa - base);
                kappa = std::max(kappa, std::min(d, 1.0 - d));
            }
        }
    }
    int groups = 0, width_failures = 0;
    for (Int n = 1; n <= 100; ++n) {
        const Subgroup g = Subgroup::gamma0(n);
        Int sum = 0;
        for (const auto& c : cusp_set(g)) sum += c.width;
        width_failures += sum != g.index();
        ++groups;
    }
    const CuspForm delta = eta_power_form(12);
    const double norm = petersson_norm(delta, 1e-12);
    double norms = 0.0;
    for (const Subgroup& g : {Subgroup::gamma0(2), Subgroup::gamma0(3), Subgroup::gamma(2)})
        norms = std::max(norms, std::abs(petersson_norm(restrict_to(delta, g), 1e-12) / norm - 1.0));
    return {cocycle <= 1e-10 && jfactor <= 1e-12 && kappa <= 1e-10 && width_failures == 0 && norms <= 1e-8,
            "cocycle " + fmt(cocycle) + ", kappa spread " + fmt(kappa) + ", width sum = index on " +
                std::to_string(groups - width_failures) + "/" + std::to_string(groups) + " groups, norm spread " + fmt(norms)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget;  // seconds, 0 for none
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria = {
        {"Bessel oracle agreement", 30, bessel_oracle},
        {"Petersson/Poincare identity", 60, petersson_poincare},
        {"Bergman reproducing property", 0, reproducing},
        {"route cross-validation", 0, routes},
        {"exact lemma suite", 0, lemmas},
        {"basis sup band", 600, theorem3},
        {"Kloosterman classical reduction", 0, kloosterman_reduction},
        {"bound-scan stability", 0, stability},
        {"structural invariants", 60, structural},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].run();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (criteria[i].budget > 0 && secs > criteria[i].budget) {
            v.pass = false;
            v.detail += "; over the " + fmt(criteria[i].budget) + " s budget";
        }
        failed += !v.pass;
        std::printf("criterion %zu %s: %s (%s; %.1f s)\n", i + 1, criteria[i].name, v.pass ? "PASS" : "FAIL",
                    v.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
