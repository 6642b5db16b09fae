#pragma once

// CSV / JSON emission of result tables and the experiment-data overlay.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinflip/config.hpp"
#include "spinflip/errors.hpp"
#include "spinflip/sweep.hpp"

namespace spinflip {

enum class TableFormat { csv, json };

inline constexpr std::string_view csv_header =
    "swept_name,swept_value_si,gamma_flip,tau_flip,tau_loss,tau_asymptotic,regime,quad_error";

namespace detail {

/// 17 significant digits in scientific notation: round-trips exactly through strtod.
inline std::string sci(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

inline std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

}  // namespace detail

inline std::string emit_table(const ResultTable& table, TableFormat format) {
    if (table.rows.empty()) throw std::invalid_argument("emit_table: table has no rows");
    std::ostringstream out;
    if (format == TableFormat::csv) {
        out << csv_header << '\n';
        for (const auto& r : table.rows) {
            out << table.swept_name << ',' << detail::sci(r.swept_value) << ',';
            if (r.failed()) {
                out << ",,,," << r.regime << ",\n";
                continue;
            }
            out << detail::sci(r.gamma_flip) << ',' << detail::sci(r.tau_flip) << ','
                << detail::sci(r.tau_loss) << ','
                << (r.tau_asymptotic ? detail::sci(*r.tau_asymptotic) : std::string()) << ','
                << r.regime << ',' << detail::sci(r.quad_error) << '\n';
        }
        return out.str();
    }

    auto num = [](std::optional<double> v) { return v ? detail::sci(*v) : std::string("null"); };
    out << "[\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        const bool ok = !r.failed();
        out << "  {\"swept_name\": " << detail::json_string(table.swept_name)
            << ", \"swept_value_si\": " << detail::sci(r.swept_value)
            << ", \"gamma_flip\": " << num(ok ? std::optional(r.gamma_flip) : std::nullopt)
            << ", \"tau_flip\": " << num(ok ? std::optional(r.tau_flip) : std::nullopt)
            << ", \"tau_loss\": " << num(ok ? std::optional(r.tau_loss) : std::nullopt)
            << ", \"tau_asymptotic\": " << num(r.tau_asymptotic)
            << ", \"regime\": " << detail::json_string(r.regime)
            << ", \"quad_error\": " << num(ok ? std::optional(r.quad_error) : std::nullopt);
        if (r.error) out << ", \"error\": " << detail::json_string(*r.error);
        out << '}' << (i + 1 < table.rows.size() ? "," : "") << '\n';
    }
    out << "]\n";
    return out.str();
}

/// Inverse of emit_table(..., json).
inline ResultTable parse_table_json(std::string_view text) {
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_array() || doc.empty()) throw std::invalid_argument("parse_table_json: expected a non-empty array");
    ResultTable table;
    table.swept_name = doc.front().at("swept_name").get<std::string>();
    for (const auto& j : doc) {
        ResultRow r;
        r.swept_value = j.at("swept_value_si").get<double>();
        r.regime = j.at("regime").get<std::string>();
        if (j.contains("error")) {
            r.error = j.at("error").get<std::string>();
        } else {
            r.gamma_flip = j.at("gamma_flip").get<double>();
            r.tau_flip = j.at("tau_flip").get<double>();
            r.tau_loss = j.at("tau_loss").get<double>();
            r.quad_error = j.at("quad_error").get<double>();
        }
        if (!j.at("tau_asymptotic").is_null()) r.tau_asymptotic = j.at("tau_asymptotic").get<double>();
        table.rows.push_back(std::move(r));
    }
    return table;
}

struct ExperimentPoint {
    double d;                      // m
    double tau_measured;           // s
    std::optional<double> error;   // s
};

/// Reads `d_um,tau_s[,err_s]` rows. Blank lines are skipped; row numbers in
/// errors count file lines from 1 (the header).
inline std::vector<ExperimentPoint> load_experiment_points(std::string_view text) {
    std::vector<std::string> lines;
    {
        std::string s(text);
        std::istringstream in(s);
        for (std::string line; std::getline(in, line);) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.push_back(line);
        }
    }
    auto split = [](std::string_view line) {
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            cells.emplace_back(detail::trim(line.substr(pos, comma - pos)));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        return cells;
    };

    if (lines.empty() || detail::trim(lines.front()).empty()) throw DataError(1, "missing header");
    const auto header = split(lines.front());
    const bool with_errors = header.size() == 3;
    if (!((header.size() == 2 || with_errors) && header[0] == "d_um" && header[1] == "tau_s" &&
          (!with_errors || header[2] == "err_s")))
        throw DataError(1, "header must be 'd_um,tau_s' or 'd_um,tau_s,err_s'");

    std::vector<ExperimentPoint> points;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t row = i + 1;
        if (detail::trim(lines[i]).empty()) continue;
        const auto cells = split(lines[i]);
        if (cells.size() != header.size())
            throw DataError(row, "expected " + std::to_string(header.size()) + " columns");
        std::vector<double> v;
        for (const auto& c : cells) {
            const auto x = detail::parse_double(c);
            if (!x || !std::isfinite(*x)) throw DataError(row, "not a number: '" + c + "'");
            if (!(*x > 0.0)) throw DataError(row, "values must be positive");
            v.push_back(*x);
        }
        points.push_back({v[0] * 1e-6, v[1], with_errors ? std::optional(v[2]) : std::nullopt});
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const ExperimentPoint& a, const ExperimentPoint& b) { return a.d < b.d; });
    return points;
}

struct OverlayRow {
    ExperimentPoint point;
    double tau_model = 0.0;  // trap-loss lifetime, s
    double ratio = 0.0;      // tau_model / tau_measured
    std::optional<std::string> error;
};

inline std::vector<OverlayRow> overlay(const RunContext& ctx, const std::vector<ExperimentPoint>& points) {
    std::vector<OverlayRow> rows;
    for (const auto& pt : points) {
        PointContext p = ctx.point;
        p.d = pt.d;
        const auto r = evaluate_point(p, ctx.loss, ctx.green, ctx.regime_ratio, pt.d);
        OverlayRow o{pt, r.tau_loss, r.failed() ? 0.0 : r.tau_loss / pt.tau_measured, r.error};
        rows.push_back(o);
    }
    return rows;
}

inline std::string emit_overlay_csv(const std::vector<OverlayRow>& rows) {
    std::ostringstream out;
    out << "d_um,tau_measured_s,err_s,tau_model_s,ratio_model_over_measured\n";
    for (const auto& r : rows) {
        out << detail::sci(r.point.d * 1e6) << ',' << detail::sci(r.point.tau_measured) << ','
            << (r.point.error ? detail::sci(*r.point.error) : std::string()) << ',';
        if (r.error) out << ",\n";
        else out << detail::sci(r.tau_model) << ',' << detail::sci(r.ratio) << '\n';
    }
    return out.str();
}

}  // namespace spinflip
