#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "app.hpp"
#include "config.hpp"
#include "suplab/errors.hpp"

using namespace suplab;
using namespace suplab::cli;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const char* name) { return std::string("/tmp/suplab_test_cli_") + name; }

}  // namespace

TEST_CASE("config round trip") {
    const RunConfig defaults;
    CHECK(parse_config("") == defaults);
    CHECK(parse_config(serialize(defaults)) == defaults);

    const std::string text =
        "# experiment\n"
        "grid.k_list = 12, 16,20\n"
        "   multiplier=eta:r=2   # weight 1\n"
        "\n"
        "tolerances.kernel = 1e-9\n"
        "grid.density = 12\n"
        "output.format = csv\n";
    const RunConfig c = parse_config(text);
    CHECK(c.multiplier == "eta:r=2");
    CHECK(c.weight == 1.0);
    CHECK(c.grid.k_list == std::vector<double>{12, 16, 20});
    CHECK(c.tolerances.kernel == 1e-9);
    CHECK(c.output.format == "csv");
    CHECK(parse_config(serialize(c)) == c);
    CHECK(normalize(normalize(text)) == normalize(text));
    CHECK(normalize(text).find("grid.k_list = 12,16,20\n") != std::string::npos);
    // key order and spacing do not matter
    CHECK(normalize("grid.density=12\ngroup = full") == normalize("group=full\n grid.density = 12 "));

    CHECK_THROWS_AS(parse_config("colour = blue"), DomainError);
    CHECK_THROWS_AS(parse_config("c_max = 10\nc_max = 20"), DomainError);
    CHECK_THROWS_AS(parse_config("c_max = ten"), DomainError);
    CHECK_THROWS_AS(parse_config("c_max = 0"), DomainError);
    CHECK_THROWS_AS(parse_config("tolerances.kernel = -1"), DomainError);
    CHECK_THROWS_AS(parse_config("output.format = xml"), DomainError);
    CHECK_THROWS_AS(parse_config("just text"), DomainError);
    CHECK_THROWS_AS(parse_config("group = gamma9"), DomainError);
    CHECK_THROWS_AS(parse_config("multiplier = eta:r=2\nweight = 12"), DomainError);
}

TEST_CASE("weight, multiplier and group defaults") {
    CHECK(parse_config("weight = 24").multiplier == "trivial:k=24");
    CHECK(parse_config("weight = 24").weight == 24.0);
    CHECK(parse_config("multiplier = theta").group == Subgroup::gamma0(4).descriptor());
    CHECK(parse_config("multiplier = theta").weight == 0.5);
    CHECK_THROWS_AS(parse_config("multiplier = theta\ngroup = full"), DomainError);

    const KeyValues file = parse_key_values("multiplier = trivial:k=12\nweight = 12\ngrid.density = 8");
    const RunConfig merged = config_from(merge(file, {{"weight", "16"}}));
    CHECK(merged.multiplier == "trivial:k=16");
    CHECK(merged.grid.density == 8);
    CHECK_THROWS_AS(config_from(merge(parse_key_values("multiplier = eta:r=2"), {{"weight", "16"}})), DomainError);
}

TEST_CASE("argument parsers") {
    CHECK(parse_element("S") == GroupElement::S());
    CHECK(parse_element("1,2,3,7") == GroupElement(1, 2, 3, 7));
    CHECK_THROWS_AS(parse_element("1,2,3"), DomainError);
    CHECK_THROWS(parse_element("1,2,3,4"));
    CHECK(parse_form("eta:r=24").coefficient(2) == Complex(-24.0));
    CHECK(parse_form("monomial:a=1,b=1,c=0").weight() == 16.0);
    CHECK(parse_form("basis:k=24,j=1").weight() == 24.0);
    CHECK_THROWS_AS(parse_form("eta:r=3"), DomainError);
    CHECK_THROWS_AS(parse_form("monomial:a=1,b=1"), DomainError);
    CHECK_THROWS_AS(parse_form("basis:k=24,j=2"), DomainError);
    CHECK_THROWS_AS(parse_form("theta"), DomainError);
}

TEST_CASE("exit codes") {
    const Outcome one = call({"bessel", "eval", "--kind", "J", "--order", "0", "--x", "0"});
    CHECK(one.code == kExitOk);
    CHECK(one.out == "{\"kind\":\"J\",\"order\":0,\"x\":0,\"value\":1}\n");

    const Outcome unknown = call({"frobnicate"});
    CHECK(unknown.code == kExitUsage);
    CHECK(unknown.out.empty());
    CHECK(unknown.err.find("Usage:") != std::string::npos);

    CHECK(call({"bessel", "eval", "--order", "zero", "--x", "1"}).code == kExitUsage);
    CHECK(call({"bessel", "eval", "--x", "1"}).code == kExitUsage);
    CHECK(call({"bessel", "eval", "--kind", "Q", "--order", "1", "--x", "1"}).code == kExitUsage);
    CHECK(call({"check", "lemmas", "--format", "xml"}).code == kExitUsage);
    CHECK(call({"kloosterman", "--r", "1", "--m", "1", "--c", "4", "--tau", "2,0,0,2"}).code == kExitUsage);
    CHECK(call({"check", "lemmas", "--config", temp_path("missing")}).code == kExitUsage);

    const Outcome help = call({"--help"});
    CHECK(help.code == kExitOk);
    CHECK(help.out.find("suite") != std::string::npos);

    // a failed check exits with 1
    const Outcome strict = call({"bergman", "reproduce", "--x", "0.1", "--y", "1.2", "--reproduce-tol", "1e-2",
                                 "--max-error", "1e-20"});
    CHECK(strict.code == kExitCheckFailed);
    CHECK(nlohmann::json::parse(strict.out)["passed"] == false);
}

TEST_CASE("records") {
    const Outcome k = call({"kloosterman", "--r", "1", "--m", "1", "--c", "7"});
    REQUIRE(k.code == kExitOk);
    const auto kj = nlohmann::json::parse(k.out);
    CHECK(kj["value"][0].get<double>() == doctest::Approx(2.0489173395223053).epsilon(1e-14));
    CHECK(kj["c_max"] == 7);

    const Outcome lemmas = call({"check", "lemmas"});
    CHECK(lemmas.code == kExitOk);
    const auto lj = nlohmann::json::parse(lemmas.out);
    CHECK(lj["suite"] == "lemmas");
    CHECK(lj["max_ratio"].get<double>() <= 1.0);
    CHECK(lj["passed"] == true);

    const Outcome built = call({"forms", "build", "--form", "delta", "--count", "5"});
    REQUIRE(built.code == kExitOk);
    const CuspForm d = form_from_json(built.out);
    CHECK(d.coeff_count() == 5);
    CHECK(d.coefficient(5) == Complex(4830.0));

    const Outcome norm = call({"forms", "norm", "--form", "delta", "--norm-tol", "1e-10"});
    CHECK(nlohmann::json::parse(norm.out)["value"].get<double>() == doctest::Approx(1.0353620568e-6).epsilon(1e-9));
}

TEST_CASE("coefficient square sum of Delta") {
    const Outcome o = call({"coeff-square-sum", "--group", "full", "--multiplier", "trivial:k=12", "--m", "1", "--c-max", "10000"});
    REQUIRE(o.code == kExitOk);
    const auto j = nlohmann::json::parse(o.out);
    CHECK(j["value"].get<double>() == doctest::Approx(1.0 / 1.0353620568e-6).epsilon(1e-9));
    CHECK(j["tail_bound"].get<double>() < 1e-20);
}

TEST_CASE("config file, flag overrides and output path") {
    const std::string cfg = temp_path("config.txt"), csv = temp_path("rows.csv");
    {
        std::ofstream f(cfg);
        f << "output.format = csv\ngrid.samples = 7\ngrid.seed = 5\n";
    }
    const Outcome as_csv = call({"check", "lemmas", "--config", cfg});
    REQUIRE(as_csv.code == kExitOk);
    CHECK(as_csv.out.starts_with("name,k,y,x,lhs,envelope,ratio\n"));
    const Outcome as_json = call({"check", "lemmas", "--config", cfg, "--format", "json"});
    CHECK(nlohmann::json::parse(as_json.out)["suite"] == "lemmas");

    const Outcome to_file = call({"--config", cfg, "check", "lemmas", "--output", csv});
    CHECK(to_file.code == kExitOk);
    CHECK(to_file.out.empty());
    std::ifstream in(csv);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == as_csv.out);
    std::remove(cfg.c_str());
    std::remove(csv.c_str());
}

TEST_CASE("suite all is deterministic") {
    const std::vector<std::string> base = {"suite", "all", "--k", "12,24", "--density", "4", "--samples", "20"};
    auto with_workers = [&](const char* w) {
        auto args = base;
        args.insert(args.end(), {"--workers", w});
        return call(args);
    };
    const Outcome a = with_workers("1"), b = with_workers("3");
    REQUIRE(a.code == kExitOk);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["passed"] == true);
    CHECK(j["suites"].size() == 11);
    for (const auto& s : j["suites"]) {
        CHECK(s.contains("max_ratio"));
        CHECK(s.contains("fitted_constant"));
        CHECK(s["argmax"].contains("k"));
    }
}
