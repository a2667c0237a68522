#include "suplab/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "suplab/errors.hpp"

namespace suplab {

BoundCheck BoundCheck::make(std::string name, double lhs, double envelope) {
    BoundCheck b;
    b.name = std::move(name);
    b.lhs = lhs;
    b.envelope = envelope;
    b.ratio = lhs / envelope;
    return b;
}

void ScanReport::append(const ScanReport& other) {
    rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
    passed = passed && other.passed;
}

double ScanReport::max_ratio() const {
    double m = 0.0;
    for (const auto& r : rows_) {
        if (!std::isfinite(r.ratio)) return std::numeric_limits<double>::infinity();
        m = std::max(m, r.ratio);
    }
    return m;
}

const BoundCheck& ScanReport::argmax() const {
    if (rows_.empty()) throw DomainError("ScanReport::argmax: empty report");
    std::size_t best = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (!std::isfinite(rows_[i].ratio)) return rows_[i];
        if (rows_[i].ratio > rows_[best].ratio) best = i;
    }
    return rows_[best];
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string ScanReport::csv() const {
    std::ostringstream os;
    os << "name,k,y,x,lhs,envelope,ratio\n";
    for (const auto& r : rows_)
        os << r.name << ',' << format_double(r.k) << ',' << format_double(r.y) << ',' << format_double(r.x)
           << ',' << format_double(r.lhs) << ',' << format_double(r.envelope) << ','
           << format_double(r.ratio) << '\n';
    return os.str();
}

namespace {

std::string json_number(double v) {
    const std::string s = format_double(v);
    return std::isfinite(v) ? s : "\"" + s + "\"";
}

}  // namespace

JsonObject& JsonObject::number(std::string_view key, double v) { return raw(key, json_number(v)); }
JsonObject& JsonObject::integer(std::string_view key, long long v) { return raw(key, std::to_string(v)); }
JsonObject& JsonObject::boolean(std::string_view key, bool v) { return raw(key, v ? "true" : "false"); }
JsonObject& JsonObject::string(std::string_view key, std::string_view v) {
    return raw(key, nlohmann::json(std::string(v)).dump());
}
JsonObject& JsonObject::raw(std::string_view key, std::string json) {
    fields_.emplace_back(nlohmann::json(std::string(key)).dump(), std::move(json));
    return *this;
}

std::string JsonObject::str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (i) out += ',';
        out += fields_[i].first + ':' + fields_[i].second;
    }
    return out + '}';
}

std::string ScanReport::summary_json() const {
    JsonObject am;
    if (!rows_.empty()) {
        const auto& a = argmax();
        am.number("k", a.k).number("y", a.y).number("x", a.x);
    }
    return JsonObject()
        .string("suite", suite_)
        .number("max_ratio", max_ratio())
        .raw("argmax", am.str())
        .number("fitted_constant", fitted_constant())
        .boolean("passed", passed)
        .str();
}

bool ratio_stable(std::vector<std::pair<double, double>> series, double slack) {
    if (series.empty()) return false;
    for (const auto& [p, r] : series)
        if (!std::isfinite(r) || !std::isfinite(p)) return false;
    if (series.size() == 1) return true;
    std::sort(series.begin(), series.end());
    const std::size_t half = series.size() / 2;
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i)
        (i < half ? lo : hi) = std::max(i < half ? lo : hi, series[i].second);
    return hi <= slack * lo;
}

std::vector<std::pair<double, double>> max_ratio_by_k(const ScanReport& report) {
    std::map<double, double> m;
    for (const auto& r : report.rows()) {
        auto [it, inserted] = m.emplace(r.k, r.ratio);
        if (!inserted) it->second = std::max(it->second, r.ratio);
        if (!std::isfinite(r.ratio)) it->second = std::numeric_limits<double>::infinity();
    }
    return {m.begin(), m.end()};
}

}  // namespace suplab
