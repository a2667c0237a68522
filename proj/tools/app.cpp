#include "app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "suplab/bergman.hpp"
#include "suplab/bessel.hpp"
#include "suplab/errors.hpp"
#include "suplab/parallel.hpp"
#include "suplab/spectral.hpp"
#include "suplab/supnorm.hpp"

namespace suplab::cli {

namespace {

std::string complex_json(Complex v) {
    const auto num = [](double d) { return std::isfinite(d) ? format_double(d) : '"' + format_double(d) + '"'; };
    return "[" + num(v.real()) + "," + num(v.imag()) + "]";
}

long long to_int(const std::string& s, const char* what) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty()) throw DomainError(std::string(what) + ": expected an integer, got '" + s + "'");
    return v;
}

/// "a=1,b=2" -> {a: 1, b: 2}; every key in `keys` must appear exactly once.
std::map<std::string, long long> named_ints(std::string_view body, const std::vector<std::string>& keys,
                                            const std::string& what) {
    std::map<std::string, long long> out;
    std::string s(body);
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw DomainError(what + ": expected key=value, got '" + item + "'");
        if (!out.emplace(item.substr(0, eq), to_int(item.substr(eq + 1), what.c_str())).second)
            throw DomainError(what + ": duplicate '" + item.substr(0, eq) + "'");
    }
    if (out.size() != keys.size()) throw DomainError(what + ": wrong number of fields");
    for (const auto& k : keys)
        if (!out.contains(k)) throw DomainError(what + ": missing '" + k + "'");
    return out;
}

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw DomainError(std::string(what) + ": cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

MultiplierSystem system_of(const RunConfig& c) { return MultiplierSystem::parse(c.multiplier, Subgroup::parse(c.group)); }

std::vector<double> k_list_or(const RunConfig& c, std::vector<double> fallback) {
    return c.grid.k_list.empty() ? fallback : c.grid.k_list;
}

int density_or(const RunConfig& c, int fallback) { return c.grid.density > 0 ? c.grid.density : fallback; }

std::vector<int> even_weights(const std::vector<double>& ks) {
    std::vector<int> out;
    for (double k : ks) {
        if (k != std::floor(k)) throw DomainError("weight list: expected integers");
        out.push_back(static_cast<int>(k));
    }
    return out;
}

CuspForm normalized(const CuspForm& f, const RunConfig& c) {
    return scaled(f, 1.0 / std::sqrt(petersson_norm(f, c.tolerances.norm)));
}

std::vector<Complex> route_points() {
    std::vector<Complex> pts;
    for (int i = 0; i < 20; ++i) {
        const double x = -0.475 + 0.05 * i;
        pts.emplace_back(x, std::max(std::sqrt(1.0 - x * x), 0.9) + 0.15 * (i % 5));
    }
    return pts;
}

ScanReport lemmas(const RunConfig& c) { return lemma_suite(c.grid.samples, c.grid.seed); }
ScanReport regions(const RunConfig& c) { return region_scan(k_list_or(c, {24, 48, 96}), density_or(c, 16)); }
ScanReport theorem3(const RunConfig& c) {
    std::vector<double> ks;
    for (int k = 12; k <= 60; k += 4) ks.push_back(k);
    return theorem3_scan(even_weights(k_list_or(c, ks)), density_or(c, 40));
}
ScanReport theorem12(const RunConfig& c, const CuspForm& form, double eps) {
    CuspForm f = form;
    const Subgroup g = Subgroup::parse(c.group);
    if (g.descriptor() != f.group().descriptor()) f = restrict_to(f, g);
    return theorem12_report(normalized(f, c), density_or(c, 20), eps);
}
ScanReport widths() {
    ScanReport r("width_index");
    for (Int n = 1; n <= 12; ++n) r.append(width_index_check(Subgroup::gamma0(n)));
    for (Int n = 2; n <= 8; ++n) r.append(width_index_check(Subgroup::gamma1(n)));
    for (Int n = 2; n <= 4; ++n) r.append(width_index_check(Subgroup::gamma(n)));
    return r;
}

std::vector<ScanReport> suite_all(const RunConfig& c) {
    std::vector<ScanReport> out;
    out.push_back(lemmas(c));
    out.push_back(regions(c));
    out.push_back(method2_scan(k_list_or(c, {12, 24, 48}), density_or(c, 8), c.grid.y_max));
    out.push_back(method1_scan(k_list_or(c, {12, 24, 48}), Method1Regime::Low, density_or(c, 4)));
    out.push_back(method1_scan(k_list_or(c, {12, 24, 48}), Method1Regime::Large, density_or(c, 4)));
    out.push_back(bergman_trivial_scan(k_list_or(c, {6, 12, 24, 48}), density_or(c, 8)));
    out.push_back(theorem3(c));
    out.push_back(theorem12(c, eta_power_form(12), 0.1));
    out.push_back(widths());
    out.push_back(route_cross_validation(eta_power_form(12), route_points()));
    out.push_back(parseval_cross_validation(MultiplierSystem::trivial(12), {1.0, 1.5, 2.5}));
    return out;
}

BesselBound parse_bound(const std::string& s) {
    for (BesselBound b : {BesselBound::LargeArgument, BesselBound::TurningPoint, BesselBound::VerySmall,
                          BesselBound::Small, BesselBound::GapSmall, BesselBound::Large})
        if (s == to_string(b)) return b;
    throw DomainError("unknown bound '" + s + "'");
}

double bessel_value(const std::string& kind, double order, double x) {
    if (kind == "J") return bessel_j(order, x);
    if (kind == "Y") return bessel_y(order, x);
    if (kind == "I") return bessel_i(order, x);
    if (kind == "K") return bessel_k(order, x);
    throw DomainError("bessel kind must be J, Y, I or K");
}

struct Result {
    std::string text;
    bool passed = true;
};

Result report_result(const ScanReport& r, const RunConfig& c) {
    return {c.output.format == "csv" ? r.csv() : r.summary_json() + "\n", r.passed};
}

Result reports_result(const std::vector<ScanReport>& parts, const RunConfig& c) {
    bool passed = true;
    for (const auto& p : parts) passed = passed && p.passed;
    if (c.output.format == "csv") {
        std::string text = "name,k,y,x,lhs,envelope,ratio\n";
        for (const auto& p : parts) {
            const std::string rows = p.csv();
            text += rows.substr(rows.find('\n') + 1);
        }
        return {text, passed};
    }
    std::string list = "[";
    for (std::size_t i = 0; i < parts.size(); ++i) list += (i ? "," : "") + parts[i].summary_json();
    return {JsonObject().raw("suites", list + "]").boolean("passed", passed).str() + "\n", passed};
}

}  // namespace

GroupElement parse_element(const std::string& text) {
    if (text == "I") return GroupElement::identity();
    if (text == "S") return GroupElement::S();
    if (text == "U") return GroupElement::U();
    std::vector<Int> v;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) v.push_back(to_int(item, "matrix entry"));
    if (v.size() != 4) throw DomainError("group element: expected I, S, U or a,b,c,d");
    return GroupElement(v[0], v[1], v[2], v[3]);
}

CuspForm parse_form(const std::string& text, std::size_t count) {
    if (text == "delta") return eta_power_form(12, count);
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon), body = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "eta") {
        const long long r = named_ints(body, {"r"}, "form eta")["r"];
        if (r < 2 || r % 2 != 0 || r > 1000) throw DomainError("form eta: r must be even, 2 <= r <= 1000");
        return eta_power_form(static_cast<int>(r / 2), count);
    }
    if (head == "monomial") {
        auto m = named_ints(body, {"a", "b", "c"}, "form monomial");
        for (const auto& [k, v] : m)
            if (v < 0 || v > 100) throw DomainError("form monomial: exponents must lie in [0, 100]");
        return monomial_form(static_cast<int>(m["a"]), static_cast<int>(m["b"]), static_cast<int>(m["c"]), count);
    }
    if (head == "basis") {
        auto m = named_ints(body, {"k", "j"}, "form basis");
        if (m["k"] < 12 || m["k"] > 200) throw DomainError("form basis: k must lie in [12, 200]");
        const OrthonormalBasis b = orthonormal_basis(static_cast<int>(m["k"]), count);
        if (m["j"] < 0 || m["j"] >= static_cast<long long>(b.forms.size()))
            throw DomainError("form basis: j out of range");
        return b.forms[static_cast<std::size_t>(m["j"])];
    }
    if (head == "file" && !body.empty()) {
        return form_from_json(read_file(body, "form file"));
    }
    throw DomainError("form: expected delta, eta:r=R, monomial:a=..,b=..,c=.., basis:k=..,j=.. or file:PATH");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical laboratory for sup-norm bounds of holomorphic cusp forms", "suplab"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "Key-value run configuration; flags override its values");

    struct ConfigFlag {
        const char* flag;
        const char* key;
        const char* help;
        std::string value;
        CLI::Option* option = nullptr;
    };
    std::vector<ConfigFlag> config_flags = {
        {"--group", "group", "Subgroup: full, gamma0:N, gamma1:N, gamma:N", {}},
        {"--multiplier", "multiplier", "Multiplier system: trivial:k=K, eta:r=R, theta", {}},
        {"--weight", "weight", "Weight of a trivial multiplier system", {}},
        {"--c-max", "c_max", "Kloosterman-Bessel truncation", {}},
        {"--tol", "tolerances.kernel", "Relative tolerance of kernel sums", {}},
        {"--norm-tol", "tolerances.norm", "Quadrature tolerance of Petersson norms", {}},
        {"--reproduce-tol", "tolerances.reproduce", "Quadrature tolerance of the reproducing check", {}},
        {"--density", "grid.density", "Grid density of scans (0: each scan's default)", {}},
        {"--k", "grid.k_list", "Comma-separated weights for scans", {}},
        {"--y-max", "grid.y_max", "Largest y of the method2 grid", {}},
        {"--samples", "grid.samples", "Samples of the lemma suite", {}},
        {"--seed", "grid.seed", "Seed of the lemma suite", {}},
        {"--format", "output.format", "json or csv", {}},
        {"--output", "output.path", "Output file, - for standard output", {}},
        {"--workers", "workers", "Worker threads (0: SUPLAB_WORKERS or hardware)", {}},
    };
    for (auto& f : config_flags) f.option = app.add_option(f.flag, f.value, f.help);

    std::string tau_text = "I", form_text = "delta", kind = "J", bound_text, rho_text = "50,100,200,400";
    long long m = 1, r = 1, c_arg = 1, count = static_cast<long long>(kDefaultCoeffCount);
    double order = 0.0, x = 0.0, y = 1.0, max_error = 1e-3, eps = 0.1;
    int points = 24;

    auto* bessel = app.add_subcommand("bessel", "Bessel functions");
    bessel->require_subcommand(1);
    auto* bessel_eval = bessel->add_subcommand("eval", "Evaluate J, Y, I or K");
    bessel_eval->add_option("--kind", kind, "J, Y, I or K")->capture_default_str();
    bessel_eval->add_option("--order", order, "Order")->required();
    bessel_eval->add_option("--x", x, "Argument")->required();
    auto* bessel_certify = bessel->add_subcommand("certify", "Scan a Bessel envelope over orders");
    bessel_certify->add_option("--bound", bound_text, "LargeArgument, TurningPoint, VerySmall, Small, GapSmall, Large")
        ->required();
    bessel_certify->add_option("--rho", rho_text, "Comma-separated orders")->capture_default_str();
    bessel_certify->add_option("--points", points, "Sample points per order")->capture_default_str();

    auto* kloost = app.add_subcommand("kloosterman", "Generalized Kloosterman sum W(r, m; c)");
    kloost->add_option("--tau", tau_text, "Cusp map: I, S, U or a,b,c,d")->capture_default_str();
    kloost->add_option("--r", r, "r")->required();
    kloost->add_option("--m", m, "m")->required();
    kloost->add_option("--c", c_arg, "Modulus c > 0")->required();

    auto* pcoeff = app.add_subcommand("poincare-coeff", "Fourier coefficient a(r, m; tau) of a Poincare series");
    pcoeff->add_option("--tau", tau_text, "Cusp map: I, S, U or a,b,c,d")->capture_default_str();
    pcoeff->add_option("--m", m, "m")->required();
    pcoeff->add_option("--r", r, "r")->required();

    auto* csum = app.add_subcommand("coeff-square-sum", "Sum over an orthonormal basis of |f_j^(m)|^2");
    csum->add_option("--tau", tau_text, "Cusp map: I, S, U or a,b,c,d")->capture_default_str();
    csum->add_option("--m", m, "m")->required();

    auto* bergman = app.add_subcommand("bergman", "Bergman kernel");
    bergman->require_subcommand(1);
    auto* diag = bergman->add_subcommand("diag", "Sum over an orthonormal basis of |(f_j | tau)(z)|^2");
    diag->add_option("--tau", tau_text, "Cusp map: I, S, U or a,b,c,d")->capture_default_str();
    diag->add_option("--x", x, "Re z")->required();
    diag->add_option("--y", y, "Im z")->required();
    auto* reproduce = bergman->add_subcommand("reproduce", "Check <f, h(., -conj w)> = 8 pi / (mu (k - 1)) f(w)");
    reproduce->add_option("--form", form_text, "Form descriptor")->capture_default_str();
    reproduce->add_option("--x", x, "Re w")->required();
    reproduce->add_option("--y", y, "Im w")->required();
    reproduce->add_option("--max-error", max_error, "Largest accepted relative error")->capture_default_str();

    auto* forms = app.add_subcommand("forms", "Cusp forms");
    forms->require_subcommand(1);
    auto* build = forms->add_subcommand("build", "Write a form as JSON");
    build->add_option("--form", form_text, "Form descriptor")->required();
    build->add_option("--count", count, "Number of coefficients")->capture_default_str();
    auto* norm = forms->add_subcommand("norm", "Petersson norm <f, f>");
    norm->add_option("--form", form_text, "Form descriptor")->required();

    auto* scan = app.add_subcommand("scan", "Sup-norm scans");
    scan->require_subcommand(1);
    auto* scan3 = scan->add_subcommand("theorem3", "Sup of y^k sum |f_j|^2 over the full group against k^{3/2}");
    auto* scan12 = scan->add_subcommand("theorem12", "Sup of y^{k/2}|f| for a normalized form");
    scan12->add_option("--form", form_text, "Form descriptor, restricted to --group")->capture_default_str();
    scan12->add_option("--eps", eps, "Exponent slack of the envelope")->capture_default_str();

    auto* check = app.add_subcommand("check", "Bound checks");
    check->require_subcommand(1);
    auto* check_lemmas = check->add_subcommand("lemmas", "Explicit inequalities for S(alpha, beta, eta)");
    auto* check_regions = check->add_subcommand("regions", "Four-region Bessel sums against their envelopes");

    auto* suite = app.add_subcommand("suite", "Verification suites");
    suite->require_subcommand(1);
    auto* suite_all_cmd = suite->add_subcommand("all", "Every scan with the configured grids");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        KeyValues overrides;
        for (const auto& f : config_flags)
            if (f.option->count() > 0) overrides[f.key] = f.value;
        const KeyValues base = config_path.empty() ? KeyValues{} : parse_key_values(read_file(config_path, "config"));
        const RunConfig cfg = config_from(merge(base, overrides));
        if (cfg.workers > 0) set_default_workers(cfg.workers);

        Result res;
        if (bessel_eval->parsed()) {
            res.text = JsonObject()
                           .string("kind", kind)
                           .number("order", order)
                           .number("x", x)
                           .number("value", bessel_value(kind, order, x))
                           .str() +
                       "\n";
        } else if (bessel_certify->parsed()) {
            const BesselBound b = parse_bound(bound_text);
            if (points < 1) throw DomainError("--points must be >= 1");
            res = report_result(certify_regime_bounds(b, parse_list(rho_text), default_sampler(b, points)), cfg);
        } else if (kloost->parsed()) {
            const Complex w = kloosterman({system_of(cfg), parse_element(tau_text), r, m, c_arg});
            res.text = JsonObject().raw("value", complex_json(w)).number("tail_bound", 0.0).integer("c_max", c_arg).str() + "\n";
        } else if (pcoeff->parsed()) {
            const PoincareCoefficient p = poincare_coeff(system_of(cfg), parse_element(tau_text), m, r, cfg.c_max);
            res.text = JsonObject()
                           .raw("value", complex_json(p.value))
                           .number("tail_bound", p.tail_bound)
                           .integer("c_max", p.c_max)
                           .string("branch", to_string(p.branch))
                           .str() +
                       "\n";
        } else if (csum->parsed()) {
            const CoefficientSquareSum s = coeff_square_sum(system_of(cfg), parse_element(tau_text), m, cfg.c_max);
            res.text = JsonObject()
                           .number("value", s.value)
                           .number("tail_bound", s.tail_bound)
                           .integer("c_max", s.c_max)
                           .number("imag_residue", s.imag_residue)
                           .integer("width", s.width)
                           .number("kappa", s.kappa)
                           .str() +
                       "\n";
        } else if (diag->parsed()) {
            const DiagonalValue d = basis_sum_diag(system_of(cfg), parse_element(tau_text), Complex(x, y), cfg.tolerances.kernel);
            res.text = JsonObject()
                           .number("value", d.value)
                           .number("tail_bound", d.tail_bound)
                           .number("radius", d.radius)
                           .number("imag_residue", d.imag_residue)
                           .str() +
                       "\n";
        } else if (reproduce->parsed()) {
            const ReproduceCheck rc = reproduce_check(parse_form(form_text), Complex(x, y), cfg.tolerances.reproduce);
            const double rel = std::abs(rc.lhs - rc.rhs) / std::abs(rc.rhs);
            res.passed = rel <= max_error;
            res.text = JsonObject()
                           .raw("lhs", complex_json(rc.lhs))
                           .raw("rhs", complex_json(rc.rhs))
                           .number("relative_error", rel)
                           .number("quadrature_error", rc.quadrature_error)
                           .boolean("passed", res.passed)
                           .str() +
                       "\n";
        } else if (build->parsed()) {
            if (count < 1 || count > 100000) throw DomainError("--count must lie in [1, 100000]");
            const CuspForm f = parse_form(form_text, static_cast<std::size_t>(count));
            res.text = to_json(f) + "\n";
        } else if (norm->parsed()) {
            const CuspForm f = parse_form(form_text);
            res.text = JsonObject()
                           .number("value", petersson_norm(f, cfg.tolerances.norm))
                           .string("group", f.group().descriptor())
                           .number("weight", f.weight())
                           .str() +
                       "\n";
        } else if (scan3->parsed()) {
            res = report_result(theorem3(cfg), cfg);
        } else if (scan12->parsed()) {
            res = report_result(theorem12(cfg, parse_form(form_text), eps), cfg);
        } else if (check_lemmas->parsed()) {
            res = report_result(lemmas(cfg), cfg);
        } else if (check_regions->parsed()) {
            res = report_result(regions(cfg), cfg);
        } else if (suite_all_cmd->parsed()) {
            res = reports_result(suite_all(cfg), cfg);
        }

        if (cfg.output.path == "-") {
            out << res.text;
        } else {
            std::ofstream file(cfg.output.path);
            if (!file) throw DomainError("cannot write '" + cfg.output.path + "'");
            file << res.text;
        }
        return res.passed ? kExitOk : kExitCheckFailed;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "check failed: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}

}  // namespace suplab::cli
