#pragma once

// Spec-string grammar shared by the CLI and tests:
//   measure: beta:<β> | density:<csv file of x,value>
//   symbol:  power:<s> | poly:<c0,c1,...> | sqrtdef | table:<csv file>:<deriv>
// Complex literals are re, re+imi, re-imi or imi. A table derivative is a
// complex literal, "inf", or "auto" (three-point estimate, marked heuristic).

#include <algorithm>
#include <charconv>
#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hypojac/errors.hpp"
#include "hypojac/measures.hpp"
#include "hypojac/symbols.hpp"

namespace hypojac::specs {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_real(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw DomainError("not a number: '" + std::string(s) + "'");
    }
    return v;
}

inline complex parse_complex(std::string_view s) {
    s = trim(s);
    if (s.empty()) {
        throw DomainError("empty complex literal");
    }
    if (s.back() != 'i') {
        return parse_real(s);
    }
    std::string_view body = s.substr(0, s.size() - 1);
    // split at the last sign that is not the leading one or part of an exponent
    for (std::size_t pos = body.size(); pos-- > 1;) {
        const char ch = body[pos];
        if ((ch == '+' || ch == '-') && body[pos - 1] != 'e' && body[pos - 1] != 'E') {
            const std::string_view im = body.substr(pos);
            const double imag = (im == "+" || im == "-") ? (im == "-" ? -1.0 : 1.0) : parse_real(im);
            return {parse_real(body.substr(0, pos)), imag};
        }
    }
    if (body.empty() || body == "+" || body == "-") {
        return {0.0, body == "-" ? -1.0 : 1.0};
    }
    return {0.0, parse_real(body)};
}

inline std::vector<std::vector<double>> read_csv(const std::string& path, std::size_t min_cols) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open table '" + path + "'");
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        std::vector<double> row;
        std::size_t start = 0;
        try {
            while (start <= view.size()) {
                const std::size_t comma = view.find(',', start);
                const std::size_t end = comma == std::string_view::npos ? view.size() : comma;
                row.push_back(parse_real(view.substr(start, end - start)));
                start = end + 1;
            }
        } catch (const DomainError&) {
            if (first) {  // header line
                first = false;
                continue;
            }
            throw DomainError("malformed row in '" + path + "': " + line);
        }
        first = false;
        if (row.size() < min_cols) {
            throw DomainError("row with too few columns in '" + path + "': " + line);
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) {
        throw DomainError("table '" + path + "' needs at least two rows");
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i][0] > rows[i - 1][0])) {
            throw DomainError("table '" + path + "' must have strictly increasing x");
        }
    }
    if (rows.front()[0] > 1e-12 || rows.back()[0] < 1.0 - 1e-12) {
        throw DomainError("table '" + path + "' must span [0,1]");
    }
    return rows;
}

/// Piecewise-linear interpolant through (x_i, y_i).
template <class Value>
struct LinearTable {
    std::vector<double> xs;
    std::vector<Value> ys;

    Value operator()(double x) const {
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs.begin());
        const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return ys[i - 1] * (1.0 - w) + ys[i] * w;
    }

    std::vector<double> interior() const {
        std::vector<double> out;
        for (double x : xs) {
            if (x > 0.0 && x < 1.0) out.push_back(x);
        }
        return out;
    }
};

inline RadialMeasure parse_measure(std::string_view spec) {
    spec = trim(spec);
    if (spec.starts_with("beta:")) {
        return RadialMeasure::beta_weight(parse_real(spec.substr(5)));
    }
    if (spec.starts_with("density:")) {
        const std::string path(spec.substr(8));
        LinearTable<double> table;
        for (const auto& row : read_csv(path, 2)) {
            if (row[1] < 0.0) {
                throw DomainError("density table has negative values");
            }
            table.xs.push_back(row[0]);
            table.ys.push_back(row[1]);
        }
        QuadratureDefined family;
        family.breakpoints = table.interior();
        family.density = std::move(table);
        family.label = path;
        return RadialMeasure::from_density(std::move(family));
    }
    throw DomainError("unknown measure spec '" + std::string(spec) + "'");
}

inline RadialSymbol parse_symbol(std::string_view spec) {
    spec = trim(spec);
    if (spec.starts_with("power:")) {
        return RadialSymbol::power(parse_real(spec.substr(6)));
    }
    if (spec.starts_with("poly:")) {
        std::vector<complex> coeffs;
        std::string_view rest = spec.substr(5);
        while (true) {
            const std::size_t comma = rest.find(',');
            coeffs.push_back(parse_complex(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        return RadialSymbol::poly(std::move(coeffs));
    }
    if (spec == "sqrtdef") {
        return RadialSymbol::sqrt_deficit();
    }
    if (spec.starts_with("table:")) {
        const std::string_view body = spec.substr(6);
        const std::size_t colon = body.rfind(':');
        if (colon == std::string_view::npos || colon == 0) {
            throw DomainError("table symbol needs table:<file>:<deriv>");
        }
        const std::string path(body.substr(0, colon));
        const std::string_view deriv = trim(body.substr(colon + 1));
        LinearTable<complex> table;
        for (const auto& row : read_csv(path, 2)) {
            table.xs.push_back(row[0]);
            table.ys.emplace_back(row[1], row.size() > 2 ? row[2] : 0.0);
        }
        Tabulated t;
        t.breakpoints = table.interior();
        t.label = std::string(body);
        if (deriv == "inf") {
            t.deriv_at_one = DerivStatus::infinite();
        } else if (deriv == "auto") {
            t.deriv_at_one = DerivStatus::finite(three_point_derivative_at_one(table));
            t.heuristic_derivative = true;
        } else {
            t.deriv_at_one = DerivStatus::finite(parse_complex(deriv));
        }
        t.eval = std::move(table);
        return RadialSymbol::tabulated(std::move(t));
    }
    throw DomainError("unknown symbol spec '" + std::string(spec) + "'");
}

}  // namespace hypojac::specs
