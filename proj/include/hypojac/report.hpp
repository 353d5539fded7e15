#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypojac/hypo.hpp"
#include "hypojac/spectral.hpp"

namespace hypojac::report {

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal, locale independent; "inf"/"-inf"/"nan".
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// JSON has no infinity; +∞ is written as null.
inline json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

inline json history_json(const std::vector<std::pair<std::size_t, double>>& h) {
    json arr = json::array();
    for (const auto& [n, v] : h) arr.push_back(json::array({n, number(v)}));
    return arr;
}

inline json to_json(const NormBracket& b) {
    json j;
    j["lower"] = number(b.lower);
    j["upper"] = number(b.upper);
    j["status"] = std::string(to_string(b.status));
    j["trunc"] = b.trunc_used;
    j["history"] = history_json(b.history);
    return j;
}

inline json to_json(const HypoVerdict& v) {
    json j;
    j["threshold_lower"] = number(v.threshold_lower);
    j["threshold_upper"] = number(v.threshold_upper);
    j["status"] = std::string(to_string(v.status));
    j["trunc"] = v.bracket.trunc_used;
    j["n"] = v.n;
    j["measure"] = v.measure;
    j["symbol"] = v.symbol;
    j["essential_lower"] = number(v.essential_lower);
    j["bracket"] = to_json(v.bracket);
    return j;
}

inline json to_json(const Certificate& c) {
    json j;
    j["result"] = std::string(to_string(c.kind));
    j["verdict"] = std::string(to_string(c.verdict));
    j["trunc"] = c.trunc;
    j["min_eigenvalue"] = number(c.min_eigenvalue);
    j["history"] = history_json(c.history);
    return j;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Minimal CSV writer: header row, then rows of preformatted cells.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void write(std::ostream& os) const {
        write_row(os, header_);
        for (const auto& r : rows_) write_row(os, r);
    }

private:
    static void write_row(std::ostream& os, const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << row[i];
        }
        os << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace hypojac::report
