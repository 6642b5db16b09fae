#pragma once

// Thermal occupation, skin depth relations, and material dispersion models.
//
// Time convention is exp(-i omega t): passive media have Im(eps) > 0.

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <string_view>
#include <variant>

#include "spinflip/constants.hpp"
#include "spinflip/errors.hpp"

namespace spinflip {

using complex = std::complex<double>;

/// Mean thermal photon number per mode, 1/(exp(hbar omega / kB T) - 1).
inline double thermal_occupation(double omega, double T) {
    if (!(omega > 0.0)) throw DomainError("thermal_occupation: omega must be positive");
    if (!(T >= 0.0)) throw DomainError("thermal_occupation: temperature must be non-negative");
    if (T == 0.0) return 0.0;
    const double x = constants.hbar * omega / (constants.kB * T);
    return 1.0 / std::expm1(x);
}

/// delta = sqrt(2 / (mu0 omega sigma)).
inline double skin_depth_from_conductivity(double sigma, double omega) {
    if (!(sigma > 0.0) || !(omega > 0.0))
        throw DomainError("skin_depth_from_conductivity: sigma and omega must be positive");
    return std::sqrt(2.0 / (constants.mu0 * omega * sigma));
}

inline double conductivity_from_skin_depth(double delta, double omega) {
    if (!(delta > 0.0) || !(omega > 0.0))
        throw DomainError("conductivity_from_skin_depth: delta and omega must be positive");
    return 2.0 / (constants.mu0 * omega * delta * delta);
}

struct VacuumMedium {};

struct DielectricMedium {
    double eps_r;
};

struct ConductorMedium {
    double sigma;  // S/m
};

/// Ohmic conductor specified through its skin depth at a reference frequency.
struct SkinDepthMedium {
    double delta;      // m, at omega_ref
    double omega_ref;  // rad/s
};

/// Two-fluid superconductor: thermally broken pairs conduct like a normal metal,
/// with a Boltzmann-type enhancement of the low-frequency conductivity below Tc.
struct SuperconductorMedium {
    double Tc;               // K
    double gap_over_kBTc;    // Delta(0) / (kB Tc)
    double sigma_normal;     // S/m, just above Tc
    double T;                // K
    double max_enhancement = 100.0;
};

class Material {
public:
    using Kind = std::variant<VacuumMedium, DielectricMedium, ConductorMedium, SkinDepthMedium,
                              SuperconductorMedium>;

    static Material vacuum() { return Material(VacuumMedium{}); }

    static Material dielectric(double eps_r) {
        if (!(eps_r >= 1.0)) throw DomainError("dielectric: eps_r must be >= 1");
        return Material(DielectricMedium{eps_r});
    }

    static Material conductor(double sigma) {
        if (!(sigma > 0.0)) throw DomainError("conductor: sigma must be positive");
        return Material(ConductorMedium{sigma});
    }

    static Material skin_depth_defined(double delta, double omega_ref) {
        if (!(delta > 0.0)) throw DomainError("skin_depth_defined: delta must be positive");
        if (!(omega_ref > 0.0)) throw DomainError("skin_depth_defined: omega_ref must be positive");
        return Material(SkinDepthMedium{delta, omega_ref});
    }

    static Material superconductor(double Tc, double gap_over_kBTc, double sigma_normal, double T,
                                   double max_enhancement = 100.0) {
        if (!(Tc > 0.0) || !(gap_over_kBTc > 0.0))
            throw DomainError("superconductor: Tc and gap ratio must be positive");
        if (!(sigma_normal > 0.0)) throw DomainError("superconductor: sigma_normal must be positive");
        if (!(T > 0.0)) throw DomainError("superconductor: T must be positive");
        if (!(max_enhancement >= 1.0))
            throw DomainError("superconductor: max_enhancement must be >= 1");
        return Material(SuperconductorMedium{Tc, gap_over_kBTc, sigma_normal, T, max_enhancement});
    }

    const Kind& kind() const noexcept { return kind_; }

    bool is_lossy() const noexcept {
        return !std::holds_alternative<VacuumMedium>(kind_) &&
               !std::holds_alternative<DielectricMedium>(kind_);
    }

    template <class T>
    const T* get_if() const noexcept { return std::get_if<T>(&kind_); }

private:
    explicit Material(Kind k) : kind_(k) {}
    Kind kind_;
};

struct EffectiveConductivity {
    double sigma;
    bool normal_state;
};

/// sigma_eff(T) = sigma_n * min(cap, exp(2 Delta(0) (1/kB T - 1/kB Tc))) below Tc,
/// sigma_n at and above Tc.
inline EffectiveConductivity superconductor_effective_conductivity(const SuperconductorMedium& m) {
    if (!(m.T > 0.0)) throw DomainError("superconductor_effective_conductivity: T must be positive");
    if (m.T >= m.Tc) return {m.sigma_normal, true};
    // Delta(0)/kB = gap_ratio * Tc, so the exponent is dimensionless.
    const double exponent = 2.0 * m.gap_over_kBTc * m.Tc * (1.0 / m.T - 1.0 / m.Tc);
    const double enhancement =
        exponent >= std::log(m.max_enhancement) ? m.max_enhancement : std::exp(exponent);
    return {m.sigma_normal * enhancement, false};
}

inline EffectiveConductivity superconductor_effective_conductivity(const Material& m) {
    const auto* sc = m.get_if<SuperconductorMedium>();
    if (sc == nullptr)
        throw DomainError("superconductor_effective_conductivity: material is not a superconductor");
    return superconductor_effective_conductivity(*sc);
}

/// Conductivity governing the Drude response; +inf is never returned, 0 for lossless media.
inline double effective_conductivity(const Material& m) {
    struct Visitor {
        double operator()(const VacuumMedium&) const { return 0.0; }
        double operator()(const DielectricMedium&) const { return 0.0; }
        double operator()(const ConductorMedium& c) const { return c.sigma; }
        double operator()(const SkinDepthMedium& s) const {
            return conductivity_from_skin_depth(s.delta, s.omega_ref);
        }
        double operator()(const SuperconductorMedium& s) const {
            return superconductor_effective_conductivity(s).sigma;
        }
    };
    return std::visit(Visitor{}, m.kind());
}

/// Skin depth at omega; +inf for lossless media.
inline double effective_skin_depth(const Material& m, double omega) {
    if (!(omega > 0.0)) throw DomainError("effective_skin_depth: omega must be positive");
    if (const auto* s = m.get_if<SkinDepthMedium>()) {
        // constant sigma: delta scales as omega^-1/2
        return s->delta * std::sqrt(s->omega_ref / omega);
    }
    const double sigma = effective_conductivity(m);
    if (sigma == 0.0) return std::numeric_limits<double>::infinity();
    return skin_depth_from_conductivity(sigma, omega);
}

/// Relative permittivity: 1 for vacuum, eps_r for dielectrics, and the Drude form
/// 1 + 2i (c / (omega delta))^2 for conductors.
inline complex drude_permittivity(const Material& m, double omega) {
    if (!(omega > 0.0)) throw DomainError("drude_permittivity: omega must be positive");
    if (m.get_if<VacuumMedium>()) return {1.0, 0.0};
    if (const auto* d = m.get_if<DielectricMedium>()) return {d->eps_r, 0.0};
    const double delta = effective_skin_depth(m, omega);
    const double x = constants.c / (omega * delta);
    return {1.0, 2.0 * x * x};
}

/// Named material presets. Cu and Al are pinned by their skin depths at 560 kHz;
/// Nb uses its measured normal-state conductivity and Tc = 9.3 K, Delta(0) = 2.1 kB Tc.
inline Material material_preset(std::string_view name, double T) {
    const double omega_560k = angular_frequency(560e3);
    if (name == "Cu") return Material::skin_depth_defined(85e-6, omega_560k);
    if (name == "Al") return Material::skin_depth_defined(110e-6, omega_560k);
    if (name == "Nb_normal") return Material::conductor(2e9);
    if (name == "Nb_super") return Material::superconductor(9.3, 2.1, 2e9, T);
    if (name == "custom")
        throw LookupError("material preset 'custom' has no values; construct a Material directly "
                          "(Material::conductor, Material::skin_depth_defined, ...)");
    throw LookupError("unknown material preset '" + std::string(name) +
                      "'; valid names: Cu, Al, Nb_normal, Nb_super, custom");
}

}  // namespace spinflip
