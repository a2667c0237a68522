#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace suplab::cli {

/// Run settings shared by every subcommand. Text form: one `key = value` per line with dotted
/// keys, `#` comments and blank lines ignored. grid.density = 0 and an empty grid.k_list select
/// each scan's own default.
struct RunConfig {
    std::string group = "full";
    std::string multiplier = "trivial:k=12";
    double weight = 12.0;
    struct Tolerances {
        double kernel = 1e-8;
        double norm = 1e-12;
        double reproduce = 1e-6;
        bool operator==(const Tolerances&) const = default;
    } tolerances;
    long long c_max = 10000;
    struct Grid {
        int density = 0;
        std::vector<double> k_list;
        double y_max = 3.0;
        int samples = 100;
        unsigned seed = 20140401;
        bool operator==(const Grid&) const = default;
    } grid;
    struct Output {
        std::string format = "json";
        std::string path = "-";
        bool operator==(const Output&) const = default;
    } output;
    int workers = 0;

    bool operator==(const RunConfig&) const = default;
};

using KeyValues = std::map<std::string, std::string>;

/// Throws DomainError on malformed lines, duplicate keys or unknown keys.
KeyValues parse_key_values(std::string_view text);

/// `overrides` replace `base` key by key. A weight override without a multiplier override
/// replaces a trivial base multiplier.
KeyValues merge(KeyValues base, const KeyValues& overrides);

/// Defaults updated by `kv`; values are validated and the group and multiplier descriptors parsed.
/// Without a group key the multiplier's default group is used.
RunConfig config_from(const KeyValues& kv);
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Every key in sorted order, numbers in shortest round-trip form.
std::string serialize(const RunConfig& c);
/// serialize(parse_config(text)).
std::string normalize(std::string_view text);

std::vector<double> parse_list(std::string_view text);

}  // namespace suplab::cli
