#pragma once

// Parameter sweeps over the full Green-tensor computation.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "spinflip/asymptotics.hpp"
#include "spinflip/config.hpp"
#include "spinflip/errors.hpp"
#include "spinflip/spin_flip.hpp"

namespace spinflip {

struct ResultRow {
    double swept_value = 0.0;  // SI
    double gamma_flip = 0.0;   // 1/s
    double tau_flip = 0.0;     // s
    double tau_loss = 0.0;     // s
    std::optional<double> tau_asymptotic;
    std::string regime;
    double quad_error = 0.0;   // bound on gamma_flip from quadrature, 1/s
    std::optional<std::string> error;  // set when the point failed

    bool failed() const { return error.has_value(); }
    bool operator==(const ResultRow&) const = default;
};

struct ResultTable {
    std::string swept_name;
    std::vector<ResultRow> rows;

    bool operator==(const ResultTable&) const = default;
};

/// Full computation at one point plus the matching closed-form law, if any.
inline ResultRow evaluate_point(const PointContext& p, const LossModel& loss, const GreenOptions& green,
                                double regime_ratio, double swept_value) {
    ResultRow row;
    row.swept_value = swept_value;
    try {
        const auto t = p.transition();
        const auto detail = flip_rate_detail(t, p.d, p.stack(), p.T, green);
        row.gamma_flip = detail.gamma;
        row.tau_flip = 1.0 / detail.gamma;
        row.tau_loss = 1.0 / trap_loss_rate(detail.gamma, loss);
        const auto& k = constants;
        const double moment = k.gS * k.muB;
        row.quad_error = k.mu0 * 2.0 * moment * moment / k.hbar * (detail.n_thermal + 1.0) *
                         t.weight_total() * detail.green.abs_error_estimate;

        const RegimeInputs r = p.regime_inputs();
        const Regime regime = classify_regime(r, regime_ratio);
        row.regime = std::string(to_string(regime));
        if (regime != Regime::crossover) row.tau_asymptotic = asymptotic_lifetime(r, regime);
    } catch (const std::exception& ex) {
        row = ResultRow{};
        row.swept_value = swept_value;
        row.regime = "failed";
        row.error = ex.what();
    }
    return row;
}

inline PointContext with_swept(PointContext p, SweepVariable v, double value) {
    switch (v) {
        case SweepVariable::distance: p.d = value; break;
        case SweepVariable::skin_depth:
            p.film.kind = FilmSpec::Kind::skin_depth;
            p.film.delta = value;
            p.film.delta_omega = p.omega;
            break;
        case SweepVariable::thickness: p.h = value; break;
        case SweepVariable::temperature: p.T = value; break;
        case SweepVariable::frequency: p.omega = 2.0 * pi * value; break;
    }
    return p;
}

/// One row per grid point, in grid order. Points are independent and may be
/// evaluated on several threads; failures are recorded in their row.
inline ResultTable run_sweep(const RunContext& ctx, unsigned threads = 0) {
    if (!ctx.sweep) throw ConfigError("run_sweep: configuration has no sweep");
    const SweepSpec& spec = *ctx.sweep;
    const std::vector<double> values = spec.grid.values();

    ResultTable table;
    table.swept_name = std::string(to_string(spec.variable));
    table.rows.resize(values.size());

    auto work = [&](std::size_t i) {
        const PointContext p = with_swept(ctx.point, spec.variable, values[i]);
        table.rows[i] = evaluate_point(p, ctx.loss, ctx.green, ctx.regime_ratio, values[i]);
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, values.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < values.size(); ++i) work(i);
        return table;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < values.size(); i = next++) work(i);
        });
    for (auto& th : pool) th.join();
    return table;
}

/// Single-point table, labelled as a distance evaluation.
inline ResultTable run_point(const RunContext& ctx) {
    ResultTable table;
    table.swept_name = "distance";
    table.rows.push_back(evaluate_point(ctx.point, ctx.loss, ctx.green, ctx.regime_ratio, ctx.point.d));
    return table;
}

}  // namespace spinflip
