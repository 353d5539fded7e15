#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hypojac/errors.hpp"
#include "hypojac/hypo.hpp"
#include "hypojac/model.hpp"
#include "hypojac/report.hpp"
#include "hypojac/specs.hpp"
#include "hypojac/spectral.hpp"

namespace hypojac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitUndetermined = 4;

struct Range {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    std::vector<double> values() const {
        std::vector<double> out;
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
        for (long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
        return out;
    }
};

inline Range parse_range(const std::string& text) {
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
    if (second == std::string::npos) {
        throw DomainError("range must be start:stop:step");
    }
    Range r{specs::parse_real(std::string_view(text).substr(0, first)),
            specs::parse_real(std::string_view(text).substr(first + 1, second - first - 1)),
            specs::parse_real(std::string_view(text).substr(second + 1))};
    if (!(r.step > 0.0) || r.stop < r.start) {
        throw DomainError("range needs a positive step and stop >= start");
    }
    return r;
}

inline complex parse_c(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        return specs::parse_real(text);
    }
    return {specs::parse_real(std::string_view(text).substr(0, comma)),
            specs::parse_real(std::string_view(text).substr(comma + 1))};
}

/// Parsed command line.
struct RunConfig {
    std::string subcommand;
    std::string measure = "beta:0";
    std::string symbol = "power:2";
    int n = 1;
    std::string c = "0";
    double tol = 1e-6;
    std::size_t nmax = std::size_t{1} << 20;
    std::string format;
    std::string out;
    bool strict = false;
    std::string range;
    std::string over = "s";
    std::size_t count = 100;
};

namespace detail {

inline void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--measure", cfg.measure, "beta:<b> or density:<csv>");
    sub->add_option("--symbol", cfg.symbol, "power:<s>, poly:<c0,c1,...>, sqrtdef, table:<csv>:<deriv>");
    sub->add_option("--n", cfg.n, "shift multiplicity")->check(CLI::PositiveNumber);
    sub->add_option("--tol", cfg.tol, "relative stopping increment for the norm bracket");
    sub->add_option("--nmax", cfg.nmax, "largest truncation");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out, "write the report to a file");
    sub->add_flag("--strict", cfg.strict, "exit 4 on an undetermined verdict");
}

inline std::string cell(double v) { return report::format_double(v); }

inline void emit_record(std::ostream& os, const report::json& j, const std::string& format) {
    if (format != "csv") {
        os << report::dump(j);
        return;
    }
    std::vector<std::string> header;
    std::vector<std::string> row;
    for (const auto& [key, value] : j.items()) {
        if (value.is_array() || value.is_object()) continue;
        header.push_back(key);
        if (value.is_null()) {
            row.emplace_back("inf");
        } else if (value.is_string()) {
            row.push_back(value.get<std::string>());
        } else if (value.is_number_float()) {
            row.push_back(cell(value.get<double>()));
        } else {
            row.push_back(value.dump());
        }
    }
    report::CsvTable t(header);
    t.add_row(row);
    t.write(os);
}

inline BracketOptions bracket_options(const RunConfig& cfg) {
    BracketOptions o;
    o.tol = cfg.tol;
    o.n_max = cfg.nmax;
    o.n_start = std::min<std::size_t>(o.n_start, cfg.nmax);
    return o;
}

inline int execute(const RunConfig& cfg, std::ostream& os) {
    if (!(cfg.tol > 0.0)) throw DomainError("--tol must be positive");
    if (cfg.nmax < 256) throw DomainError("--nmax must be at least 256");

    const RadialMeasure mu = specs::parse_measure(cfg.measure);
    const auto model_for = [&](const RadialSymbol& q) { return ShiftDiagonalModel(cfg.n, mu, q); };
    const std::string& sub = cfg.subcommand;

    if (sub == "moments") {
        const Range r = parse_range(cfg.range.empty() ? "0:100:1" : cfg.range);
        if (cfg.format == "json") {
            report::json arr = report::json::array();
            for (double t : r.values()) arr.push_back({{"t", t}, {"gamma", mu.moment(t)}});
            os << report::dump(arr);
        } else {
            report::CsvTable table({"t", "gamma"});
            for (double t : r.values()) table.add_row({cell(t), cell(mu.moment(t))});
            table.write(os);
        }
        return kExitOk;
    }

    if (sub == "sweep") {
        const Range r = parse_range(cfg.range.empty() ? (cfg.over == "c" ? "0:1:0.05" : "1:8:1") : cfg.range);
        if (cfg.over == "s") {
            report::CsvTable table({"s", "threshold_lower", "threshold_upper", "status"});
            report::json arr = report::json::array();
            for (double s : r.values()) {
                const HypoVerdict v = threshold(model_for(RadialSymbol::power(s)), bracket_options(cfg));
                table.add_row({cell(s), cell(v.threshold_lower), cell(v.threshold_upper),
                               std::string(to_string(v.status))});
                arr.push_back({{"s", s},
                               {"threshold_lower", report::number(v.threshold_lower)},
                               {"threshold_upper", report::number(v.threshold_upper)},
                               {"status", std::string(to_string(v.status))}});
            }
            if (cfg.format == "json") os << report::dump(arr); else table.write(os);
        } else {
            const HypoVerdict v = threshold(model_for(specs::parse_symbol(cfg.symbol)), bracket_options(cfg));
            report::CsvTable table({"c", "verdict", "threshold_lower", "threshold_upper", "status"});
            report::json arr = report::json::array();
            for (double c : r.values()) {
                const Verdict verdict = c == 0.0 ? Verdict::Hyponormal : classify(v, c);
                table.add_row({cell(c), std::string(to_string(verdict)), cell(v.threshold_lower),
                               cell(v.threshold_upper), std::string(to_string(v.status))});
                arr.push_back({{"c", c}, {"verdict", std::string(to_string(verdict))}});
            }
            if (cfg.format == "json") os << report::dump(arr); else table.write(os);
        }
        return kExitOk;
    }

    const RadialSymbol q = specs::parse_symbol(cfg.symbol);
    const ShiftDiagonalModel model = model_for(q);

    if (sub == "entries") {
        const BandedJ j = model.j_entries(std::max<std::size_t>(cfg.count, 1));
        const auto* power = std::get_if<Power>(&q.family());
        const bool closed = power != nullptr && mu.beta() && *mu.beta() == 0.0;
        if (cfg.format == "json") {
            report::json arr = report::json::array();
            for (std::size_t k = 0; k < j.size(); ++k) {
                report::json row = {{"k", k}, {"re", j.entries[k].real()}, {"im", j.entries[k].imag()}};
                row["closed_form"] = closed ? report::json(closed_form_entry(cfg.n, power->s, k)) : report::json();
                arr.push_back(row);
            }
            os << report::dump(arr);
        } else {
            report::CsvTable table({"k", "re", "im", "closed_form"});
            for (std::size_t k = 0; k < j.size(); ++k) {
                table.add_row({std::to_string(k), cell(j.entries[k].real()), cell(j.entries[k].imag()),
                               closed ? cell(closed_form_entry(cfg.n, power->s, k)) : std::string()});
            }
            table.write(os);
        }
        return kExitOk;
    }

    if (sub == "norm") {
        emit_record(os, report::to_json(norm_bracket(model, bracket_options(cfg))), cfg.format);
        return kExitOk;
    }

    if (sub == "threshold") {
        emit_record(os, report::to_json(threshold(model, bracket_options(cfg))), cfg.format);
        return kExitOk;
    }

    const complex c = parse_c(cfg.c);
    if (sub == "classify") {
        Verdict verdict = Verdict::Hyponormal;
        report::json j;
        j["c"] = report::json::array({c.real(), c.imag()});
        if (c != 0.0) {
            const HypoVerdict v = threshold(model, bracket_options(cfg));
            verdict = classify(v, c);
            j["verdict"] = std::string(to_string(verdict));
            const report::json detail = report::to_json(v);
            for (const auto& [key, value] : detail.items()) j[key] = value;
        } else {
            j["verdict"] = std::string(to_string(verdict));
        }
        emit_record(os, j, cfg.format);
        return (cfg.strict && verdict == Verdict::Undetermined) ? kExitUndetermined : kExitOk;
    }

    if (sub == "verify") {
        CertificateOptions opts;
        opts.bracket = bracket_options(cfg);
        opts.n_max = std::min<std::size_t>(cfg.nmax, 10000);
        const Certificate cert = verify_certificate(model, c, opts);
        report::json j;
        j["c"] = report::json::array({c.real(), c.imag()});
        const report::json detail = report::to_json(cert);
        for (const auto& [key, value] : detail.items()) j[key] = value;
        emit_record(os, j, cfg.format);
        return (cfg.strict && cert.verdict == Verdict::Undetermined) ? kExitUndetermined : kExitOk;
    }
    throw DomainError("unknown subcommand");
}

}  // namespace detail

/// Entry point of the `hypojac` tool. Reports go to `out` (or --out),
/// diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Hyponormality thresholds for T_{z^n + c q(|z|)} on weighted Bergman spaces", "hypojac"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* moments = app.add_subcommand("moments", "tabulate gamma_t over --range");
    detail::add_common(moments, cfg);
    moments->add_option("--range", cfg.range, "start:stop:step (default 0:100:1)");

    auto* entries = app.add_subcommand("entries", "dump J entries b_k with the closed form when available");
    detail::add_common(entries, cfg);
    entries->add_option("--count", cfg.count, "number of entries");

    auto* norm = app.add_subcommand("norm", "certified bracket for the norm of J");
    detail::add_common(norm, cfg);
    auto* thr = app.add_subcommand("threshold", "admissible radius 1/||J||");
    detail::add_common(thr, cfg);

    auto* cls = app.add_subcommand("classify", "decide hyponormality for a given c");
    detail::add_common(cls, cfg);
    cls->add_option("--c", cfg.c, "re[,im]")->required();

    auto* ver = app.add_subcommand("verify", "brute-force self-commutator check for a given c");
    detail::add_common(ver, cfg);
    ver->add_option("--c", cfg.c, "re[,im]")->required();

    auto* sweep = app.add_subcommand("sweep", "threshold vs s (power symbols) or verdict vs c");
    detail::add_common(sweep, cfg);
    sweep->add_option("--range", cfg.range, "start:stop:step");
    sweep->add_option("--over", cfg.over, "s or c")->check(CLI::IsMember({"s", "c"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "error: " << e.what() << "\n" << app.help();
        return kExitParse;
    }
    for (auto* s : app.get_subcommands()) cfg.subcommand = s->get_name();
    if (cfg.format.empty()) {
        const bool tabular = cfg.subcommand == "moments" || cfg.subcommand == "entries" || cfg.subcommand == "sweep";
        cfg.format = tabular ? "csv" : "json";
    }

    try {
        std::ostringstream buffer;
        const int code = detail::execute(cfg, buffer);
        if (cfg.out.empty()) {
            out << buffer.str();
        } else {
            std::ofstream file(cfg.out, std::ios::binary);
            if (!file) {
                err << "error: cannot write " << cfg.out << "\n";
                return kExitParse;
            }
            file << buffer.str();
        }
        return code;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitParse;
    } catch (const PrecisionError& e) {
        err << "precision error: " << e.what() << " (best estimate " << e.best_estimate() << ", achieved "
            << e.achieved_tolerance() << ")\n";
        return kExitNumeric;
    } catch (const DegeneracyError& e) {
        err << "degenerate model: " << e.what() << " at k=" << e.index() << "\n";
        return kExitNumeric;
    }
}

}  // namespace hypojac::cli
