#pragma once

// Flat `key = value` run configuration with unit suffixes.
//
//   # Cu slab, 50 um away
//   material = Cu
//   d = 50 um
//   f = 560 kHz
//   T = 300 K
//
// Dimensioned values require a unit; everything is converted to SI here and
// nowhere else.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "spinflip/asymptotics.hpp"
#include "spinflip/errors.hpp"
#include "spinflip/layered_green.hpp"
#include "spinflip/quantities.hpp"
#include "spinflip/spin_flip.hpp"

namespace spinflip {

enum class Dimension { length, frequency, temperature, time, rate, conductivity, dimensionless };

struct UnitSuffix {
    std::string_view name;
    Dimension dimension;
    double to_si;
};

inline constexpr std::array<UnitSuffix, 16> unit_table{{
    {"nm", Dimension::length, 1e-9},
    {"um", Dimension::length, 1e-6},
    {"mm", Dimension::length, 1e-3},
    {"m", Dimension::length, 1.0},
    {"Hz", Dimension::frequency, 1.0},
    {"kHz", Dimension::frequency, 1e3},
    {"MHz", Dimension::frequency, 1e6},
    {"GHz", Dimension::frequency, 1e9},
    {"K", Dimension::temperature, 1.0},
    {"mK", Dimension::temperature, 1e-3},
    {"s", Dimension::time, 1.0},
    {"ms", Dimension::time, 1e-3},
    {"1/s", Dimension::rate, 1.0},
    {"/s", Dimension::rate, 1.0},
    {"s^-1", Dimension::rate, 1.0},
    {"S/m", Dimension::conductivity, 1.0},
}};

inline const UnitSuffix& find_unit(std::string_view name) {
    for (const auto& u : unit_table)
        if (u.name == name) return u;
    throw UnitError("unknown unit '" + std::string(name) + "'");
}

inline double to_si(double value, std::string_view unit) { return value * find_unit(unit).to_si; }
inline double from_si(double value, std::string_view unit) { return value / find_unit(unit).to_si; }

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return v;
}

}  // namespace detail

struct ConfigEntry {
    std::string value;
    std::size_t line;
};

using ConfigDocument = std::map<std::string, ConfigEntry, std::less<>>;

/// Splits a document into key/value entries. Syntax problems raise ParseError
/// with the offending line; keys are not interpreted here.
inline ConfigDocument parse_document(std::string_view text) {
    ConfigDocument doc;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "empty key");
        if (value.empty()) throw ParseError(line_no, "empty value for '" + std::string(key) + "'");
        if (doc.count(key) != 0) throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
        doc.emplace(std::string(key), ConfigEntry{std::string(value), line_no});
    }
    return doc;
}

/// Parses "50 um", "50um", "inf" (lengths only) into SI.
inline double parse_quantity(const ConfigEntry& e, Dimension dim) {
    std::string_view v = e.value;
    if (dim == Dimension::length && (v == "inf" || v == "infinite")) return infinite_thickness;
    std::size_t split = 0;
    while (split < v.size() && (std::isdigit(static_cast<unsigned char>(v[split])) || v[split] == '.' ||
                                v[split] == '-' || v[split] == '+' ||
                                ((v[split] == 'e' || v[split] == 'E') && split > 0 &&
                                 split + 1 < v.size() &&
                                 (std::isdigit(static_cast<unsigned char>(v[split + 1])) ||
                                  v[split + 1] == '-' || v[split + 1] == '+'))))
        ++split;
    const auto number = detail::parse_double(v.substr(0, split));
    if (!number) throw ParseError(e.line, "expected a number in '" + e.value + "'");
    const auto unit = detail::trim(v.substr(split));
    if (dim == Dimension::dimensionless) {
        if (!unit.empty()) throw UnitError("line " + std::to_string(e.line) + ": '" + e.value + "' takes no unit");
        return *number;
    }
    if (unit.empty()) {
        if (dim == Dimension::conductivity) return *number;
        throw UnitError("line " + std::to_string(e.line) + ": '" + e.value + "' needs a unit");
    }
    const UnitSuffix* u = nullptr;
    try {
        u = &find_unit(unit);
    } catch (const UnitError&) {
        throw UnitError("line " + std::to_string(e.line) + ": unknown unit '" + std::string(unit) + "'");
    }
    if (u->dimension != dim)
        throw UnitError("line " + std::to_string(e.line) + ": unit '" + std::string(unit) +
                        "' has the wrong dimension");
    return *number * u->to_si;
}

enum class SweepVariable { distance, skin_depth, thickness, temperature, frequency };

constexpr std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::distance: return "distance";
        case SweepVariable::skin_depth: return "skin_depth";
        case SweepVariable::thickness: return "thickness";
        case SweepVariable::temperature: return "temperature";
        case SweepVariable::frequency: return "frequency";
    }
    return "distance";
}

inline SweepVariable sweep_variable_from(std::string_view name) {
    for (auto v : {SweepVariable::distance, SweepVariable::skin_depth, SweepVariable::thickness,
                   SweepVariable::temperature, SweepVariable::frequency})
        if (to_string(v) == name) return v;
    throw LookupError("unknown sweep variable '" + std::string(name) +
                      "'; valid: distance, skin_depth, thickness, temperature, frequency");
}

constexpr Dimension dimension_of(SweepVariable v) {
    switch (v) {
        case SweepVariable::distance:
        case SweepVariable::skin_depth:
        case SweepVariable::thickness: return Dimension::length;
        case SweepVariable::temperature: return Dimension::temperature;
        case SweepVariable::frequency: return Dimension::frequency;
    }
    return Dimension::length;
}

enum class Spacing { linear, log };

struct Grid {
    double min;
    double max;
    std::size_t points;
    Spacing spacing = Spacing::log;

    void validate() const {
        if (!(min <= max)) throw ConfigError("sweep grid: need min <= max");
        if (points < 2) throw ConfigError("sweep grid: need at least 2 points");
        if (spacing == Spacing::log && !(min > 0.0)) throw ConfigError("sweep grid: log spacing needs min > 0");
    }

    std::vector<double> values() const {
        validate();
        std::vector<double> out(points);
        for (std::size_t i = 0; i < points; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(points - 1);
            out[i] = spacing == Spacing::linear
                         ? min + t * (max - min)
                         : std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
        }
        out.front() = min;
        out.back() = max;
        return out;
    }
};

/// How to build the film at a given (omega, T); kept symbolic so sweeps over
/// temperature and frequency rebuild it consistently.
struct FilmSpec {
    enum class Kind { preset, skin_depth, conductor } kind = Kind::skin_depth;
    std::string preset;       // Kind::preset
    double delta = 0.0;       // Kind::skin_depth, at delta_omega
    double delta_omega = 0.0;
    double sigma = 0.0;       // Kind::conductor
    double sc_cap = 100.0;

    Material build(double T) const {
        switch (kind) {
            case Kind::preset: {
                Material m = material_preset(preset, T);
                if (const auto* sc = m.get_if<SuperconductorMedium>())
                    return Material::superconductor(sc->Tc, sc->gap_over_kBTc, sc->sigma_normal, sc->T, sc_cap);
                return m;
            }
            case Kind::skin_depth: return Material::skin_depth_defined(delta, delta_omega);
            case Kind::conductor: return Material::conductor(sigma);
        }
        throw LookupError("FilmSpec: unknown kind");
    }
};

/// One evaluation point: geometry, material, transition and thermal state.
struct PointContext {
    FilmSpec film;
    double d = 0.0;
    double h = infinite_thickness;
    double substrate_eps = 1.0;
    double omega = 0.0;
    double T = 0.0;
    double F = 2.0, mF_i = 2.0, mF_f = 1.0, I_nuclear = 1.5;

    LayerStack stack() const {
        const Material substrate = substrate_eps == 1.0 ? Material::vacuum() : Material::dielectric(substrate_eps);
        if (std::isinf(h)) return LayerStack::thick_slab(film.build(T));
        return LayerStack::film_on_substrate(film.build(T), h, substrate);
    }

    SpinTransition transition() const {
        const auto m = spin_matrix_elements(F, mF_i, mF_f, I_nuclear);
        return {omega, m.S_inplane, m.S_normal, "(" + fmt_q(F) + "," + fmt_q(mF_i) + ")->(" + fmt_q(F) + "," + fmt_q(mF_f) + ")"};
    }

    RegimeInputs regime_inputs() const {
        return {d, effective_skin_depth(film.build(T), omega), h, omega, T, free_space_lifetime(transition())};
    }

private:
    static std::string fmt_q(double x) {
        std::ostringstream os;
        os << x;
        return os.str();
    }
};

struct SweepSpec {
    SweepVariable variable = SweepVariable::distance;
    Grid grid{1e-6, 1e-4, 2, Spacing::log};
};

struct RunContext {
    PointContext point;
    LossModel loss;
    bool background_given = false;
    std::optional<SweepSpec> sweep;
    GreenOptions green;
    double regime_ratio = 10.0;
};

namespace detail {

inline const std::vector<std::string_view>& known_keys() {
    static const std::vector<std::string_view> keys{
        "material", "delta", "delta_f", "sigma", "sc_cap", "d", "h", "substrate_eps", "f", "T",
        "F", "mF_i", "mF_f", "I_nuclear", "loss_factor", "background_rate", "background_lifetime",
        "sweep", "sweep_min", "sweep_max", "sweep_points", "sweep_spacing", "tol", "max_subdivisions", "regime_ratio"};
    return keys;
}

}  // namespace detail

/// Default entries for the distance-sweep figure: 2 um copper-like film
/// (skin depth 103 um at 400 kHz) on silicon, 400 K, 5/3 loss factor.
/// The background-gas rate has no default and must come from the user.
inline constexpr std::string_view fig2_preset = R"(material = drude
delta = 103 um
delta_f = 400 kHz
f = 400 kHz
T = 400 K
h = 2 um
substrate_eps = 11.7
loss_factor = 1.6666666666666667
sweep = distance
sweep_min = 0.5 um
sweep_max = 100 um
sweep_points = 60
sweep_spacing = log
)";

/// Skin-depth sweep at d = 50 um, 560 kHz, 300 K; thickness set per variant.
inline constexpr std::string_view fig3_preset = R"(material = drude
delta = 1 um
d = 50 um
f = 560 kHz
T = 300 K
sweep = skin_depth
sweep_min = 0.1 um
sweep_max = 1000 um
sweep_points = 81
sweep_spacing = log
)";

/// Validates a document (user entries override `defaults`) and converts it to SI.
/// The swept quantity, if any, need not appear as a fixed key.
inline RunContext parse_config(std::string_view text, std::string_view defaults = {}) {
    ConfigDocument doc = parse_document(text);
    for (const auto& [key, entry] : doc) {
        const auto& keys = detail::known_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw UnknownKeyError(key);
    }
    if (!defaults.empty()) {
        for (auto& [key, entry] : parse_document(defaults)) doc.emplace(key, entry);  // user wins
    }

    auto get = [&doc](std::string_view key) -> const ConfigEntry* {
        const auto it = doc.find(key);
        return it == doc.end() ? nullptr : &it->second;
    };
    auto require = [&](std::string_view key) -> const ConfigEntry& {
        const auto* e = get(key);
        if (e == nullptr) throw MissingKeyError(std::string(key));
        return *e;
    };
    auto number = [&](std::string_view key, Dimension dim, double fallback) {
        const auto* e = get(key);
        return e == nullptr ? fallback : parse_quantity(*e, dim);
    };

    RunContext ctx;
    auto& p = ctx.point;

    if (const auto* s = get("sweep")) {
        SweepSpec spec;
        try {
            spec.variable = sweep_variable_from(s->value);
        } catch (const LookupError& ex) {
            throw ParseError(s->line, ex.what());
        }
        const Dimension dim = dimension_of(spec.variable);
        spec.grid.min = parse_quantity(require("sweep_min"), dim);
        spec.grid.max = parse_quantity(require("sweep_max"), dim);
        const double points = parse_quantity(require("sweep_points"), Dimension::dimensionless);
        if (!(points >= 2.0) || points != std::floor(points))
            throw ParseError(require("sweep_points").line, "sweep_points must be an integer >= 2");
        spec.grid.points = static_cast<std::size_t>(points);
        if (const auto* sp = get("sweep_spacing")) {
            if (sp->value == "log") spec.grid.spacing = Spacing::log;
            else if (sp->value == "linear") spec.grid.spacing = Spacing::linear;
            else throw ParseError(sp->line, "sweep_spacing must be 'log' or 'linear'");
        }
        spec.grid.validate();
        ctx.sweep = spec;
    }
    const auto swept = ctx.sweep ? std::optional(ctx.sweep->variable) : std::nullopt;
    auto is_swept = [&swept](SweepVariable v) { return swept && *swept == v; };

    // Swept quantities take a placeholder from the grid so the fixed context stays complete.
    p.omega = is_swept(SweepVariable::frequency)
                  ? 2.0 * pi * ctx.sweep->grid.min
                  : 2.0 * pi * parse_quantity(require("f"), Dimension::frequency);
    p.T = is_swept(SweepVariable::temperature) ? ctx.sweep->grid.min
                                              : parse_quantity(require("T"), Dimension::temperature);
    p.d = is_swept(SweepVariable::distance) ? ctx.sweep->grid.min
                                           : parse_quantity(require("d"), Dimension::length);
    p.h = is_swept(SweepVariable::thickness) ? ctx.sweep->grid.min
                                            : number("h", Dimension::length, infinite_thickness);
    p.substrate_eps = number("substrate_eps", Dimension::dimensionless, 1.0);

    const auto& material = require("material");
    p.film.sc_cap = number("sc_cap", Dimension::dimensionless, 100.0);
    if (material.value == "drude" || is_swept(SweepVariable::skin_depth)) {
        p.film.kind = FilmSpec::Kind::skin_depth;
        p.film.delta = is_swept(SweepVariable::skin_depth) ? ctx.sweep->grid.min
                                                           : parse_quantity(require("delta"), Dimension::length);
        const auto* df = get("delta_f");
        if (df == nullptr && is_swept(SweepVariable::frequency)) throw MissingKeyError("delta_f");
        p.film.delta_omega = df ? 2.0 * pi * parse_quantity(*df, Dimension::frequency) : p.omega;
    } else if (material.value == "conductor") {
        p.film.kind = FilmSpec::Kind::conductor;
        p.film.sigma = parse_quantity(require("sigma"), Dimension::conductivity);
    } else {
        p.film.kind = FilmSpec::Kind::preset;
        p.film.preset = material.value;
        try {
            (void)material_preset(p.film.preset, std::max(p.T, 1e-3));
        } catch (const LookupError& ex) {
            throw ParseError(material.line, ex.what());
        }
    }

    p.F = number("F", Dimension::dimensionless, 2.0);
    p.mF_i = number("mF_i", Dimension::dimensionless, 2.0);
    p.mF_f = number("mF_f", Dimension::dimensionless, 1.0);
    p.I_nuclear = number("I_nuclear", Dimension::dimensionless, 1.5);

    ctx.loss.flip_to_loss_factor = number("loss_factor", Dimension::dimensionless, 5.0 / 3.0);
    const auto* rate = get("background_rate");
    const auto* lifetime = get("background_lifetime");
    if (rate != nullptr && lifetime != nullptr)
        throw ParseError(lifetime->line, "give either background_rate or background_lifetime, not both");
    if (rate != nullptr) {
        ctx.loss.background_rate = parse_quantity(*rate, Dimension::rate);
        ctx.background_given = true;
    } else if (lifetime != nullptr) {
        ctx.loss.background_rate = 1.0 / parse_quantity(*lifetime, Dimension::time);
        ctx.background_given = true;
    }

    ctx.green.rel_tol = number("tol", Dimension::dimensionless, 1e-8);
    if (const auto* m = get("max_subdivisions")) {
        const double n = parse_quantity(*m, Dimension::dimensionless);
        if (!(n >= 1.0) || n != std::floor(n)) throw ParseError(m->line, "max_subdivisions must be an integer >= 1");
        ctx.green.max_subdivisions = static_cast<std::size_t>(n);
    }
    ctx.regime_ratio = number("regime_ratio", Dimension::dimensionless, 10.0);

    // Surface the physics-level validation as configuration errors.
    try {
        if (!(p.d > 0.0)) throw DomainError("d must be positive");
        if (!(p.h > 0.0)) throw DomainError("h must be positive");
        if (!(p.T >= 0.0)) throw DomainError("T must be non-negative");
        if (!(ctx.green.rel_tol > 0.0)) throw DomainError("tol must be positive");
        if (!(ctx.loss.flip_to_loss_factor > 0.0)) throw DomainError("loss_factor must be positive");
        if (!(ctx.loss.background_rate >= 0.0)) throw DomainError("background rate must be non-negative");
        (void)p.stack();
        (void)p.transition();
    } catch (const DomainError& ex) {
        throw ConfigError(std::string("invalid configuration: ") + ex.what());
    } catch (const LookupError& ex) {
        throw ConfigError(std::string("invalid configuration: ") + ex.what());
    }
    return ctx;
}

}  // namespace spinflip
