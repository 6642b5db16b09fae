#pragma once

// Closed-form lifetime laws in the three scale-separated regimes of a
// conducting layer, and the skin depth that minimises the lifetime.
//
//   tau = (8/3)^2 tau0/(n+1) (omega/c)^3 * { d^4/(3 delta)     delta << d, h
//                                           { delta^2 d / 2     delta, h >> d
//                                           { delta^2 d^2/(2h)  delta >> d >> h

#include <cmath>
#include <string_view>

#include "spinflip/constants.hpp"
#include "spinflip/errors.hpp"
#include "spinflip/quantities.hpp"

namespace spinflip {

struct RegimeInputs {
    double d;      // m
    double delta;  // m
    double h;      // m, may be infinite
    double omega;  // rad/s
    double T;      // K
    double tau0;   // s
};

enum class Regime { thick_small_delta, thick_large_delta, thin_film, crossover };

constexpr std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::thick_small_delta: return "thick_small_delta";
        case Regime::thick_large_delta: return "thick_large_delta";
        case Regime::thin_film: return "thin_film";
        case Regime::crossover: return "crossover";
    }
    return "crossover";
}

inline void validate(const RegimeInputs& r) {
    if (!(r.d > 0.0) || !(r.delta > 0.0) || !(r.h > 0.0))
        throw DomainError("RegimeInputs: lengths must be positive");
    if (!(r.omega > 0.0)) throw DomainError("RegimeInputs: omega must be positive");
    if (!(r.tau0 > 0.0)) throw DomainError("RegimeInputs: tau0 must be positive");
}

/// A "much less than" holds when the ratio of the two scales reaches `ratio`.
inline Regime classify_regime(const RegimeInputs& r, double ratio = 10.0) {
    validate(r);
    auto much_less = [ratio](double small, double large) { return ratio * small <= large; };
    if (much_less(r.delta, r.d) && much_less(r.delta, r.h)) return Regime::thick_small_delta;
    if (much_less(r.d, r.delta) && much_less(r.d, r.h)) return Regime::thick_large_delta;
    if (much_less(r.d, r.delta) && much_less(r.h, r.d)) return Regime::thin_film;
    return Regime::crossover;
}

inline double asymptotic_lifetime(const RegimeInputs& r, Regime regime) {
    validate(r);
    const double k0 = vacuum_wavenumber(r.omega);
    const double scale =
        (64.0 / 9.0) * r.tau0 / (thermal_occupation(r.omega, r.T) + 1.0) * k0 * k0 * k0;
    switch (regime) {
        case Regime::thick_small_delta: return scale * std::pow(r.d, 4) / (3.0 * r.delta);
        case Regime::thick_large_delta: return scale * r.delta * r.delta * r.d / 2.0;
        case Regime::thin_film: return scale * r.delta * r.delta * r.d * r.d / (2.0 * r.h);
        case Regime::crossover: break;
    }
    throw DomainError("asymptotic_lifetime: no closed form in the crossover region; "
                      "evaluate the full Green-tensor integral instead");
}

/// Skin depth of maximal coupling: d for a thick slab, sqrt(h d) for a film.
inline double delta_min(double d, double h) {
    if (!(d > 0.0)) throw DomainError("delta_min: d must be positive");
    if (!(h > 0.0)) throw DomainError("delta_min: h must be positive");
    return std::isinf(h) ? d : std::sqrt(h * d);
}

}  // namespace spinflip
