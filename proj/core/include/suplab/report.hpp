#pragma once

#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace suplab {

/// One evaluated bound: lhs <= constant * envelope is expected, ratio = lhs / envelope.
struct BoundCheck {
    std::string name;
    double k = std::numeric_limits<double>::quiet_NaN();
    double y = std::numeric_limits<double>::quiet_NaN();
    double x = std::numeric_limits<double>::quiet_NaN();
    double lhs = 0.0;
    double envelope = 1.0;
    double ratio = 0.0;
    std::map<std::string, double> params;

    static BoundCheck make(std::string name, double lhs, double envelope);
    BoundCheck& at(double k_, double y_, double x_ = 0.0) {
        k = k_;
        y = y_;
        x = x_;
        return *this;
    }
};

/// Grid of bound evaluations plus the verdict. `fitted_constant` is the smallest constant
/// making every row hold, i.e. the max ratio.
class ScanReport {
public:
    ScanReport() = default;
    explicit ScanReport(std::string suite) : suite_(std::move(suite)) {}

    const std::string& suite() const { return suite_; }
    void add(BoundCheck row) { rows_.push_back(std::move(row)); }
    void append(const ScanReport& other);
    const std::vector<BoundCheck>& rows() const { return rows_; }

    /// Max ratio over rows (NaN and infinity propagate as +infinity); 0 when empty.
    double max_ratio() const;
    /// Row attaining max_ratio; throws DomainError when empty.
    const BoundCheck& argmax() const;
    double fitted_constant() const { return max_ratio(); }

    bool passed = true;
    std::string note;

    /// Rows as CSV with header name,k,y,x,lhs,envelope,ratio.
    std::string csv() const;
    /// {suite, max_ratio, argmax:{k,y,x}, fitted_constant, passed}
    std::string summary_json() const;

private:
    std::string suite_;
    std::vector<BoundCheck> rows_;
};

/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

/// Single-line JSON object with fields in insertion order. Doubles go through format_double;
/// non-finite ones are written as strings.
class JsonObject {
public:
    JsonObject& number(std::string_view key, double v);
    JsonObject& integer(std::string_view key, long long v);
    JsonObject& boolean(std::string_view key, bool v);
    JsonObject& string(std::string_view key, std::string_view v);
    /// `json` must already be a valid JSON value.
    JsonObject& raw(std::string_view key, std::string json);
    std::string str() const;

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

/// Trend test for a bounded-ratio scan. `series` holds (growing parameter, max ratio) pairs.
/// Stable when every ratio is finite and the max over the upper half of the parameter
/// range is at most `slack` times the max over the lower half.
bool ratio_stable(std::vector<std::pair<double, double>> series, double slack = 1.5);

/// Max ratio per distinct value of k.
std::vector<std::pair<double, double>> max_ratio_by_k(const ScanReport& report);

}  // namespace suplab
