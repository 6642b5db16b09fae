#pragma once

// Adaptive one-dimensional quadrature for complex-valued integrands.
//
// Globally adaptive bisection over a 10-point Gauss / 21-point Kronrod pair.
// The local error estimate is the raw |K21 - G10| difference, which bounds the
// error of the returned K21 value generously. Integrands must be free of side
// effects; identical inputs give bit-identical outcomes.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spinflip/errors.hpp"

namespace spinflip::quad {

using complex = std::complex<double>;

enum class Singularity {
    none,
    /// Integrand behaves like 1/sqrt(b - x) at the upper endpoint; handled by x = b - t^2.
    inverse_sqrt_at_upper,
};

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-300;
    std::size_t max_subdivisions = 2000;
    Singularity singularity = Singularity::none;
};

struct QuadratureOutcome {
    complex value{};
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;

    QuadratureOutcome& operator+=(const QuadratureOutcome& o) {
        value += o.value;
        error_estimate += o.error_estimate;
        evaluations += o.evaluations;
        converged = converged && o.converged;
        return *this;
    }
};

namespace detail {

inline constexpr std::array<double, 11> kronrod_nodes{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

inline constexpr std::array<double, 11> kronrod_weights{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980221859, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7, 9).
inline constexpr std::array<double, 5> gauss_weights{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a;
    double b;
    complex value;
    double error;

    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const complex fc = f(center);
    complex kronrod = fc * kronrod_weights[10];
    complex gauss{};
    for (std::size_t i = 0; i < 10; ++i) {
        const double dx = half * kronrod_nodes[i];
        const complex sum = f(center - dx) + f(center + dx);
        kronrod += kronrod_weights[i] * sum;
        if (i % 2 == 1) gauss += gauss_weights[i / 2] * sum;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

inline constexpr std::size_t evals_per_panel = 21;

template <class F>
QuadratureOutcome adaptive(F& f, std::span<const double> breaks, const QuadratureSpec& spec) {
    std::priority_queue<Panel> queue;
    QuadratureOutcome out;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i] < breaks[i + 1])) continue;
        queue.push(gauss_kronrod(f, breaks[i], breaks[i + 1]));
        out.evaluations += evals_per_panel;
    }

    auto totals = [&queue]() {
        // Copy so the summation order is the queue's storage order, which is deterministic.
        std::pair<complex, double> t{};
        auto copy = queue;
        while (!copy.empty()) {
            t.first += copy.top().value;
            t.second += copy.top().error;
            copy.pop();
        }
        return t;
    };

    const auto initial = totals();
    complex value = initial.first;
    double error = initial.second;
    std::size_t subdivisions = queue.size();
    auto tolerance = [&] { return std::max(spec.rel_tol * std::abs(value), spec.abs_tol); };

    while (error > tolerance() && subdivisions < spec.max_subdivisions && !queue.empty()) {
        const Panel worst = queue.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) break;  // interval exhausted at double precision
        queue.pop();
        const Panel left = gauss_kronrod(f, worst.a, mid);
        const Panel right = gauss_kronrod(f, mid, worst.b);
        out.evaluations += 2 * evals_per_panel;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++subdivisions;
    }

    // Re-sum from scratch to shed the drift of incremental updates.
    auto [v, e] = totals();
    out.value = v;
    out.error_estimate = e;
    out.converged = e <= std::max(spec.rel_tol * std::abs(v), spec.abs_tol);
    return out;
}

inline void check_spec(const QuadratureSpec& spec) {
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0))
        throw DomainError("quadrature: tolerances must be positive");
    if (spec.max_subdivisions < 1) throw DomainError("quadrature: max_subdivisions must be >= 1");
}

}  // namespace detail

/// Integrate f over [breaks.front(), breaks.back()] using the interior points as the
/// initial partition. Breakpoints must be non-decreasing.
template <class F>
QuadratureOutcome integrate_finite(F&& f, std::span<const double> breaks,
                                   const QuadratureSpec& spec = {}) {
    detail::check_spec(spec);
    if (breaks.size() < 2 || !(breaks.front() < breaks.back()))
        throw DomainError("integrate_finite: need a < b");
    if (!std::is_sorted(breaks.begin(), breaks.end()))
        throw DomainError("integrate_finite: breakpoints must be sorted");

    if (spec.singularity == Singularity::none) return detail::adaptive(f, breaks, spec);

    // x = b - t^2, dx = -2t dt: the 1/sqrt(b - x) factor becomes 1/t and cancels.
    const double b = breaks.back();
    std::vector<double> t_breaks(breaks.size());
    std::transform(breaks.rbegin(), breaks.rend(), t_breaks.begin(),
                   [b](double x) { return std::sqrt(b - x); });
    t_breaks.front() = 0.0;
    auto g = [&f, b](double t) -> complex { return 2.0 * t * f(b - t * t); };
    return detail::adaptive(g, t_breaks, spec);
}

template <class F>
QuadratureOutcome integrate_finite(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    const std::array<double, 2> breaks{a, b};
    return integrate_finite(f, std::span<const double>(breaks), spec);
}

/// Integrate f over [a, inf) for integrands bounded by C exp(-(x - a) / decay_scale).
/// Panels of width 3 decay_scale are summed until two consecutive panels each fall
/// below max(abs_tol, rel_tol |sum|).
template <class F>
QuadratureOutcome integrate_decaying_tail(F&& f, double a, double decay_scale,
                                          const QuadratureSpec& spec = {},
                                          std::size_t max_panels = 4000) {
    detail::check_spec(spec);
    if (!(decay_scale > 0.0)) throw DomainError("integrate_decaying_tail: decay_scale must be positive");
    if (spec.singularity != Singularity::none)
        throw DomainError("integrate_decaying_tail: endpoint singularities are not supported");

    const double width = 3.0 * decay_scale;
    QuadratureOutcome total;
    total.converged = true;
    int quiet_panels = 0;
    for (std::size_t k = 0; k < max_panels; ++k) {
        QuadratureSpec panel_spec = spec;
        panel_spec.abs_tol = std::max(spec.abs_tol, 0.1 * spec.rel_tol * std::abs(total.value));
        const double lo = a + static_cast<double>(k) * width;
        const auto panel = integrate_finite(f, lo, lo + width, panel_spec);
        total += panel;
        const double threshold = std::max(spec.abs_tol, spec.rel_tol * std::abs(total.value));
        quiet_panels = std::abs(panel.value) < threshold ? quiet_panels + 1 : 0;
        if (quiet_panels == 2) {
            total.error_estimate += std::abs(panel.value);  // geometric-tail bound
            return total;
        }
    }
    total.converged = false;
    return total;
}

}  // namespace spinflip::quad
