#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "suplab/errors.hpp"
#include "suplab/multiplier.hpp"

namespace suplab::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double to_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
        throw DomainError("config: " + std::string(key) + ": not a number '" + std::string(v) + "'");
    return out;
}

long long to_integer(std::string_view key, std::string_view v, long long lo, long long hi) {
    long long out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || out < lo || out > hi)
        throw DomainError("config: " + std::string(key) + ": expected an integer in [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "], got '" + std::string(v) + "'");
    return out;
}

double positive(std::string_view key, std::string_view v) {
    const double d = to_double(key, v);
    if (!(d > 0.0)) throw DomainError("config: " + std::string(key) + " must be positive");
    return d;
}

std::string shortest(double v) {
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> s = {
        {"group", [](RunConfig& c, std::string_view v) { c.group = v; }},
        {"multiplier", [](RunConfig& c, std::string_view v) { c.multiplier = v; }},
        {"weight", [](RunConfig& c, std::string_view v) { c.weight = positive("weight", v); }},
        {"tolerances.kernel", [](RunConfig& c, std::string_view v) { c.tolerances.kernel = positive("tolerances.kernel", v); }},
        {"tolerances.norm", [](RunConfig& c, std::string_view v) { c.tolerances.norm = positive("tolerances.norm", v); }},
        {"tolerances.reproduce",
         [](RunConfig& c, std::string_view v) { c.tolerances.reproduce = positive("tolerances.reproduce", v); }},
        {"c_max", [](RunConfig& c, std::string_view v) { c.c_max = to_integer("c_max", v, 1, 1'000'000'000); }},
        {"grid.density",
         [](RunConfig& c, std::string_view v) { c.grid.density = static_cast<int>(to_integer("grid.density", v, 0, 10000)); }},
        {"grid.k_list", [](RunConfig& c, std::string_view v) { c.grid.k_list = parse_list(v); }},
        {"grid.y_max", [](RunConfig& c, std::string_view v) { c.grid.y_max = positive("grid.y_max", v); }},
        {"grid.samples",
         [](RunConfig& c, std::string_view v) { c.grid.samples = static_cast<int>(to_integer("grid.samples", v, 1, 1'000'000)); }},
        {"grid.seed",
         [](RunConfig& c, std::string_view v) { c.grid.seed = static_cast<unsigned>(to_integer("grid.seed", v, 0, 4294967295LL)); }},
        {"output.format",
         [](RunConfig& c, std::string_view v) {
             if (v != "json" && v != "csv") throw DomainError("config: output.format must be json or csv");
             c.output.format = v;
         }},
        {"output.path",
         [](RunConfig& c, std::string_view v) {
             if (v.empty()) throw DomainError("config: output.path must not be empty");
             c.output.path = v;
         }},
        {"workers", [](RunConfig& c, std::string_view v) { c.workers = static_cast<int>(to_integer("workers", v, 0, 4096)); }},
    };
    return s;
}

}  // namespace

std::vector<double> parse_list(std::string_view text) {
    std::vector<double> out;
    text = trim(text);
    if (text.empty()) return out;
    for (;;) {
        const auto comma = text.find(',');
        const double v = positive("list entry", trim(text.substr(0, comma)));
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        text = text.substr(comma + 1);
    }
    return out;
}

KeyValues parse_key_values(std::string_view text) {
    KeyValues kv;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "config line " + std::to_string(line_no);
        if (eq == std::string_view::npos) throw DomainError(where + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        if (!setters().contains(key)) throw DomainError(where + ": unknown key '" + key + "'");
        if (!kv.emplace(key, std::string(trim(line.substr(eq + 1)))).second)
            throw DomainError(where + ": duplicate key '" + key + "'");
    }
    return kv;
}

KeyValues merge(KeyValues base, const KeyValues& overrides) {
    if (overrides.contains("weight") && !overrides.contains("multiplier")) {
        const auto it = base.find("multiplier");
        if (it != base.end() && it->second.starts_with("trivial:")) base.erase(it);
    }
    for (const auto& [k, v] : overrides) base[k] = v;
    return base;
}

RunConfig config_from(const KeyValues& kv) {
    RunConfig c;
    for (const auto& [k, v] : kv) {
        const auto it = setters().find(k);
        if (it == setters().end()) throw DomainError("config: unknown key '" + k + "'");
        it->second(c, v);
    }
    if (kv.contains("weight") && !kv.contains("multiplier")) c.multiplier = "trivial:k=" + shortest(c.weight);
    if (!kv.contains("group")) c.group = MultiplierSystem::parse(c.multiplier).group().descriptor();
    const MultiplierSystem sys = MultiplierSystem::parse(c.multiplier, Subgroup::parse(c.group));
    if (kv.contains("weight") && sys.weight() != c.weight)
        throw DomainError("config: weight " + shortest(c.weight) + " disagrees with multiplier '" + c.multiplier + "'");
    c.weight = sys.weight();
    return c;
}

RunConfig parse_config(std::string_view text) { return config_from(parse_key_values(text)); }

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("config: cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize(const RunConfig& c) {
    std::string k_list;
    for (std::size_t i = 0; i < c.grid.k_list.size(); ++i) k_list += (i ? "," : "") + shortest(c.grid.k_list[i]);
    const KeyValues kv = {
        {"group", c.group},
        {"multiplier", c.multiplier},
        {"weight", shortest(c.weight)},
        {"tolerances.kernel", shortest(c.tolerances.kernel)},
        {"tolerances.norm", shortest(c.tolerances.norm)},
        {"tolerances.reproduce", shortest(c.tolerances.reproduce)},
        {"c_max", std::to_string(c.c_max)},
        {"grid.density", std::to_string(c.grid.density)},
        {"grid.k_list", k_list},
        {"grid.y_max", shortest(c.grid.y_max)},
        {"grid.samples", std::to_string(c.grid.samples)},
        {"grid.seed", std::to_string(c.grid.seed)},
        {"output.format", c.output.format},
        {"output.path", c.output.path},
        {"workers", std::to_string(c.workers)},
    };
    std::string out;
    for (const auto& [k, v] : kv) out += k + (v.empty() ? " =" : " = " + v) + "\n";
    return out;
}

std::string normalize(std::string_view text) { return serialize(parse_config(text)); }

}  // namespace suplab::cli
