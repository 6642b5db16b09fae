#pragma once

// Imaginary part of the scattered curl-curl Green tensor above a planar
// vacuum / film / substrate stack.
//
// Axes are surface-adapted: two in-plane axes and the surface normal. The
// magnetic (curl-curl) tensor at coincident points is diagonal with
//
//   I_par  = Im (i/8pi) Int dq (q/kz) exp(2i kz d) [k0^2 r_p - kz^2 r_s]
//   I_norm = Im (i/4pi) Int dq (q^3/kz) exp(2i kz d) r_s
//
// i.e. the electric-dipole layered forms with the roles of s and p exchanged.
// The wavenumber integral is split at q = k0. The propagating part is written
// in kz itself, where q dq / kz = -dkz; the evanescent part in
// kappa = sqrt(q^2 - k0^2), where q dq / kz = -i dkappa.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "spinflip/constants.hpp"
#include "spinflip/errors.hpp"
#include "spinflip/quadrature.hpp"
#include "spinflip/quantities.hpp"

namespace spinflip {

enum class Polarization { s, p };

inline constexpr double infinite_thickness = std::numeric_limits<double>::infinity();

struct LayerStack {
    Material film = Material::vacuum();
    double h = infinite_thickness;  // film thickness [m]
    Material substrate = Material::vacuum();
    Material top = Material::vacuum();

    static LayerStack thick_slab(Material film) {
        return LayerStack{film, infinite_thickness, Material::vacuum(), Material::vacuum()};
    }

    static LayerStack film_on_substrate(Material film, double h, Material substrate) {
        if (!(h > 0.0)) throw DomainError("LayerStack: film thickness must be positive");
        return LayerStack{film, h, substrate, Material::vacuum()};
    }
};

enum class SurfaceAxis { in_plane_1, in_plane_2, normal };

struct GreenResult {
    // All three in 1/m^3 (G itself is in 1/m).
    double I_par = 0.0;
    double I_norm = 0.0;
    double I_free = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;

    /// Scattered diagonal element along a surface-adapted axis. Both in-plane axes
    /// read the same integral.
    double scattered(SurfaceAxis axis) const noexcept {
        return axis == SurfaceAxis::normal ? I_norm : I_par;
    }
};

struct GreenOptions {
    double rel_tol = 1e-8;
    std::size_t max_subdivisions = 2000;
};

namespace detail {

/// sqrt with Im >= 0; for a real positive argument the root is real positive.
inline complex upper_sqrt(complex z) {
    complex r = std::sqrt(z);
    if (r.imag() < 0.0 || (r.imag() == 0.0 && r.real() < 0.0)) r = -r;
    return r;
}

/// kz of a layer with permittivity eps, given beta = q^2 - k0^2:
/// kz^2 = eps k0^2 - q^2 = (eps - 1) k0^2 - beta, written to avoid cancellation.
inline complex kz_from_beta(complex eps, double k0, double beta) {
    return upper_sqrt((eps - 1.0) * (k0 * k0) - beta);
}

inline complex interface_s(complex eps_a, complex eps_b, complex kza, complex kzb, double k0) {
    if (eps_a == eps_b) return {0.0, 0.0};
    // (kza - kzb) / (kza + kzb) with kza^2 - kzb^2 = (eps_a - eps_b) k0^2
    const complex sum = kza + kzb;
    return (eps_a - eps_b) * (k0 * k0) / (sum * sum);
}

inline complex interface_p(complex eps_a, complex eps_b, complex kza, complex kzb, double k0) {
    if (eps_a == eps_b) return {0.0, 0.0};
    const complex diff = (eps_a - eps_b) * (k0 * k0) / (kza + kzb);  // kza - kzb
    // eps_b kza - eps_a kzb; the larger permittivity multiplies only the small difference.
    const complex num = std::abs(eps_a) <= std::abs(eps_b) ? (eps_b - eps_a) * kza + eps_a * diff
                                                           : (eps_b - eps_a) * kzb + eps_b * diff;
    return num / (eps_b * kza + eps_a * kzb);
}

struct StackOptics {
    complex eps_top;
    complex eps_film;
    complex eps_sub;
    double h;
    double k0;

    StackOptics(const LayerStack& stack, double omega)
        : eps_top(drude_permittivity(stack.top, omega)),
          eps_film(drude_permittivity(stack.film, omega)),
          eps_sub(drude_permittivity(stack.substrate, omega)),
          h(stack.h),
          k0(vacuum_wavenumber(omega)) {}
};

struct Reflection {
    complex s;
    complex p;
};

/// exp(z) - 1 without cancellation for small |z|.
inline complex expm1(complex z) {
    const double s = std::sin(0.5 * z.imag());
    return {std::expm1(z.real()) * std::cos(z.imag()) - 2.0 * s * s, std::exp(z.real()) * std::sin(z.imag())};
}

/// (r01 + r12 P) / (1 + r01 r12 P) for r01 = 1 - t, r12 = -1 + u, P = 1 - c.
/// Good conductors push both coefficients towards +-1, where only the
/// complements t, u carry the information.
inline complex stack_combine(complex t, complex u, complex c) {
    const complex num = u - t + c * (1.0 - u);
    const complex den = t + u + c - t * u - t * c - u * c + t * u * c;
    return num / den;
}

/// Generalized reflection coefficients of the three-layer stack seen from the top layer.
inline Reflection stack_reflection(const StackOptics& o, double beta) {
    const complex kz0 = kz_from_beta(o.eps_top, o.k0, beta);
    const complex kz1 = kz_from_beta(o.eps_film, o.k0, beta);
    const Reflection r01{interface_s(o.eps_top, o.eps_film, kz0, kz1, o.k0),
                         interface_p(o.eps_top, o.eps_film, kz0, kz1, o.k0)};
    if (std::isinf(o.h) || o.eps_film == o.eps_sub) return r01;
    const complex two_i_kz_h = complex(0.0, 2.0) * kz1 * o.h;
    if (std::exp(two_i_kz_h) == complex(0.0, 0.0)) return r01;
    const complex c = -expm1(two_i_kz_h);
    const complex kz2 = kz_from_beta(o.eps_sub, o.k0, beta);
    // s: r01 = -1 + a, r12 = 1 - b, so r = -combine(a, b, c).
    const complex a = 2.0 * kz0 / (kz0 + kz1);
    const complex b = 2.0 * kz2 / (kz1 + kz2);
    // p: r01 = 1 - t, r12 = -1 + u.
    const complex t = 2.0 * o.eps_top * kz1 / (o.eps_film * kz0 + o.eps_top * kz1);
    const complex u = 2.0 * o.eps_sub * kz1 / (o.eps_sub * kz1 + o.eps_film * kz2);
    return {-stack_combine(a, b, c), stack_combine(t, u, c)};
}

inline double beta_of(double q, double k0) { return (q - k0) * (q + k0); }

/// Initial partition of the evanescent range: geometric steps across every
/// length scale of the problem, up to kappa_split.
inline std::vector<double> evanescent_breaks(double d, const LayerStack& stack, double omega,
                                             double kappa_split) {
    std::vector<double> scales{1.0 / d};
    const double delta_film = effective_skin_depth(stack.film, omega);
    const double delta_sub = effective_skin_depth(stack.substrate, omega);
    if (std::isfinite(delta_film)) scales.push_back(1.0 / delta_film);
    if (std::isfinite(delta_sub)) scales.push_back(1.0 / delta_sub);
    if (std::isfinite(stack.h)) {
        scales.push_back(1.0 / stack.h);
        if (std::isfinite(delta_film)) scales.push_back(stack.h / (delta_film * delta_film));
    }
    const double lo = 1e-2 * *std::min_element(scales.begin(), scales.end());
    std::vector<double> breaks{0.0};
    for (double x = lo; x < kappa_split; x *= 4.0) breaks.push_back(x);
    // Kinks where a dielectric layer switches from propagating to evanescent.
    const double k0 = vacuum_wavenumber(omega);
    for (const Material* m : {&stack.film, &stack.substrate}) {
        const complex eps = drude_permittivity(*m, omega);
        if (eps.real() > 1.0) {
            const double kink = k0 * std::sqrt(eps.real() - 1.0);
            if (kink < kappa_split) breaks.push_back(kink);
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.push_back(kappa_split);
    return breaks;
}

}  // namespace detail

/// Normal wavenumber sqrt(eps omega^2/c^2 - q^2) on the branch Im >= 0.
inline complex normal_wavenumber(double q, complex eps, double omega) {
    if (!(q >= 0.0)) throw DomainError("normal_wavenumber: q must be non-negative");
    const double k0 = vacuum_wavenumber(omega);
    return detail::kz_from_beta(eps, k0, detail::beta_of(q, k0));
}

/// Single-interface reflection coefficient from medium a into medium b.
inline complex fresnel_interface(double q, double omega, complex eps_a, complex eps_b,
                                 Polarization pol) {
    if (!(q >= 0.0)) throw DomainError("fresnel_interface: q must be non-negative");
    const double k0 = vacuum_wavenumber(omega);
    const double beta = detail::beta_of(q, k0);
    const complex kza = detail::kz_from_beta(eps_a, k0, beta);
    const complex kzb = detail::kz_from_beta(eps_b, k0, beta);
    return pol == Polarization::s ? detail::interface_s(eps_a, eps_b, kza, kzb, k0)
                                  : detail::interface_p(eps_a, eps_b, kza, kzb, k0);
}

/// Generalized reflection coefficient of top / film(h) / substrate.
inline complex fresnel_stack(double q, double omega, const LayerStack& stack, Polarization pol) {
    if (!(q >= 0.0)) throw DomainError("fresnel_stack: q must be non-negative");
    const detail::StackOptics optics(stack, omega);
    const auto r = detail::stack_reflection(optics, detail::beta_of(q, optics.k0));
    return pol == Polarization::s ? r.s : r.p;
}

/// Free-space diagonal element of Im[curl curl G], k0^3 / 6pi.
inline double im_curlcurl_free(double omega) {
    if (!(omega > 0.0)) throw DomainError("im_curlcurl_free: omega must be positive");
    const double k0 = vacuum_wavenumber(omega);
    return k0 * k0 * k0 / (6.0 * pi);
}

/// Scattered part of Im[curl curl G(r_A, r_A, omega)] at height d above the stack.
inline GreenResult im_curlcurl_scattered(double d, double omega, const LayerStack& stack,
                                         const GreenOptions& options = {}) {
    if (!(d > 0.0)) throw DomainError("im_curlcurl_scattered: d must be positive");
    if (!(omega > 0.0)) throw DomainError("im_curlcurl_scattered: omega must be positive");
    if (!std::holds_alternative<VacuumMedium>(stack.top.kind()))
        throw DomainError("im_curlcurl_scattered: the atom must sit in a vacuum top layer");

    const detail::StackOptics optics(stack, omega);
    const double k0 = optics.k0;
    const double k0sq = k0 * k0;

    // Packs (I_par, I_norm) integrands as (real, imag) so both share one adaptive pass.
    auto evanescent = [&](double kappa) -> complex {
        const double kappa2 = kappa * kappa;
        const auto r = detail::stack_reflection(optics, kappa2);
        const double decay = std::exp(-2.0 * kappa * d);
        const double par = decay * (k0sq * r.p.imag() + kappa2 * r.s.imag()) / (8.0 * pi);
        const double norm = decay * (kappa2 + k0sq) * r.s.imag() / (4.0 * pi);
        return {par, norm};
    };

    // Propagating waves, parametrised by kz in [0, k0]: (q / kz) dq = -dkz removes
    // the inverse-square-root endpoint of the q form.
    auto propagating = [&](double kz) -> complex {
        const auto r = detail::stack_reflection(optics, -kz * kz);
        const complex i_phase = complex(0.0, 1.0) * std::exp(complex(0.0, 2.0 * kz * d));
        const double par = (i_phase * (k0sq * r.p - kz * kz * r.s)).imag() / (8.0 * pi);
        const double norm = (i_phase * (k0sq - kz * kz) * r.s).imag() / (4.0 * pi);
        return {par, norm};
    };

    const double delta_film = effective_skin_depth(stack.film, omega);
    double kappa_split = 30.0 / (2.0 * d);
    if (std::isfinite(delta_film)) kappa_split = std::max(kappa_split, 10.0 / delta_film);

    quad::QuadratureSpec spec;
    spec.rel_tol = options.rel_tol;
    spec.max_subdivisions = options.max_subdivisions;

    const auto breaks = detail::evanescent_breaks(d, stack, omega, kappa_split);
    quad::QuadratureOutcome total = quad::integrate_finite(evanescent, std::span<const double>(breaks), spec);

    quad::QuadratureSpec tail_spec = spec;
    tail_spec.abs_tol = std::max(spec.abs_tol, 0.1 * spec.rel_tol * std::abs(total.value));
    total += quad::integrate_decaying_tail(evanescent, kappa_split, 1.0 / (2.0 * d), tail_spec);

    // One initial panel per half period of exp(2i kz d).
    const auto prop_panels = static_cast<std::size_t>(std::min(1000.0, std::ceil(2.0 * k0 * d / pi)));
    std::vector<double> prop_breaks(prop_panels + 1);
    for (std::size_t i = 0; i <= prop_panels; ++i)
        prop_breaks[i] = k0 * static_cast<double>(i) / static_cast<double>(prop_panels);
    total += quad::integrate_finite(propagating, std::span<const double>(prop_breaks), tail_spec);

    GreenResult out;
    out.I_par = total.value.real();
    out.I_norm = total.value.imag();
    out.I_free = im_curlcurl_free(omega);
    out.abs_error_estimate = total.error_estimate;
    out.evaluations = total.evaluations;

    const double tol = std::max(spec.rel_tol * std::abs(total.value), spec.abs_tol);
    if (!total.converged && total.error_estimate > tol) {
        throw AccuracyError("im_curlcurl_scattered: quadrature did not converge (estimate " +
                                std::to_string(out.I_norm) + ", error bound " +
                                std::to_string(total.error_estimate) + ")",
                            out.I_norm, total.error_estimate);
    }
    return out;
}

}  // namespace spinflip
