#pragma once

// Spin-flip rate of a trapped ground-state atom from the magnetic Green tensor.

#include <cmath>
#include <complex>
#include <string>

#include "spinflip/constants.hpp"
#include "spinflip/errors.hpp"
#include "spinflip/layered_green.hpp"
#include "spinflip/quantities.hpp"

namespace spinflip {

/// Electron-spin matrix elements <f|S_j|i> along the two axes perpendicular to
/// the bias field: one in the surface plane, one along the surface normal.
struct SpinMatrixElements {
    complex S_inplane;
    complex S_normal;
};

struct SpinTransition {
    double omega;  // rad/s
    complex S_inplane;
    complex S_normal;
    std::string label;

    double weight_inplane() const { return std::norm(S_inplane); }
    double weight_normal() const { return std::norm(S_normal); }
    double weight_total() const { return weight_inplane() + weight_normal(); }
};

/// Converts flip rates into trap-loss rates. A flip from the stretched state
/// leaves the atom in a still-trapped sublevel, so loss takes longer than one flip;
/// the factor multiplies the flip-limited lifetime.
struct LossModel {
    double flip_to_loss_factor = 5.0 / 3.0;
    double background_rate = 0.0;  // 1/s
};

namespace detail {

inline bool is_half_integer_multiple(double x) {
    const double twice = 2.0 * x;
    return std::abs(twice - std::round(twice)) < 1e-12;
}

}  // namespace detail

/// Matrix elements for |F, mF_i> -> |F, mF_f> within one hyperfine manifold of an
/// alkali ground state (electron spin 1/2, nuclear spin I). The electron spin is
/// projected onto F: S -> g F with g = [F(F+1) + 3/4 - I(I+1)] / [2F(F+1)].
inline SpinMatrixElements spin_matrix_elements(double F, double mF_i, double mF_f, double I) {
    for (double x : {F, mF_i, mF_f, I})
        if (!detail::is_half_integer_multiple(x))
            throw DomainError("spin_matrix_elements: quantum numbers must be multiples of 1/2");
    if (!(I >= 0.0)) throw DomainError("spin_matrix_elements: nuclear spin must be non-negative");
    if (!(std::abs(F - (I + 0.5)) < 1e-12 || (I >= 0.5 && std::abs(F - (I - 0.5)) < 1e-12)))
        throw DomainError("spin_matrix_elements: F must equal I +- 1/2");
    if (std::abs(mF_i) > F + 1e-12 || std::abs(mF_f) > F + 1e-12)
        throw DomainError("spin_matrix_elements: |mF| must not exceed F");
    if (!detail::is_half_integer_multiple(mF_i - F) || !detail::is_half_integer_multiple(mF_f - F) ||
        std::abs(std::remainder(mF_i - F, 1.0)) > 1e-12)
        throw DomainError("spin_matrix_elements: mF must differ from F by an integer");
    const double dm = mF_f - mF_i;
    if (std::abs(std::abs(dm) - 1.0) > 1e-12)
        throw DomainError("spin_matrix_elements: forbidden transition, need |delta mF| = 1");

    const double FF = F * (F + 1.0);
    const double g = (FF + 0.75 - I * (I + 1.0)) / (2.0 * FF);
    // <F, mF +- 1 | F_+- | F, mF> = sqrt(F(F+1) - mF mF_f)
    const double ladder = g * std::sqrt(FF - mF_i * mF_f);
    // S_x = (S+ + S-)/2, S_y = (S+ - S-)/(2i); only one ladder operator connects the states.
    const complex sx(0.5 * ladder, 0.0);
    const complex sy = dm > 0 ? complex(0.0, -0.5 * ladder) : complex(0.0, 0.5 * ladder);
    return {sx, sy};
}

/// 87Rb |F=2, mF=2> -> |2, 1> at the given transition frequency.
inline SpinTransition rubidium87_stretched_transition(double omega) {
    const auto m = spin_matrix_elements(2.0, 2.0, 1.0, 1.5);
    return {omega, m.S_inplane, m.S_normal, "(2,2)->(2,1)"};
}

inline void validate(const SpinTransition& t) {
    if (!(t.omega > 0.0)) throw DomainError("SpinTransition: omega must be positive");
    if (!(t.weight_total() > 0.0))
        throw DomainError("SpinTransition: at least one matrix element must be nonzero");
}

/// tau0 = 3 pi hbar c^3 / (mu0 omega^3 sum_j |<f| gS muB S_j |i>|^2).
inline double free_space_lifetime(const SpinTransition& t) {
    validate(t);
    const auto& k = constants;
    const double moment = k.gS * k.muB;
    return 3.0 * pi * k.hbar * std::pow(k.c, 3) /
           (k.mu0 * std::pow(t.omega, 3) * moment * moment * t.weight_total());
}

struct FlipRateDetail {
    double gamma = 0.0;  // 1/s
    double n_thermal = 0.0;
    GreenResult green;
};

inline FlipRateDetail flip_rate_detail(const SpinTransition& t, double d, const LayerStack& stack,
                                       double T, const GreenOptions& options = {}) {
    validate(t);
    const auto& k = constants;
    FlipRateDetail out;
    out.n_thermal = thermal_occupation(t.omega, T);
    out.green = im_curlcurl_scattered(d, t.omega, stack, options);
    const double moment = k.gS * k.muB;
    const double prefactor = k.mu0 * 2.0 * moment * moment / k.hbar;
    // In-plane/normal cross terms vanish for a planar stack.
    const double contraction = t.weight_inplane() * (out.green.I_free + out.green.I_par) +
                               t.weight_normal() * (out.green.I_free + out.green.I_norm);
    out.gamma = prefactor * (out.n_thermal + 1.0) * contraction;
    return out;
}

inline double flip_rate(const SpinTransition& t, double d, const LayerStack& stack, double T,
                        const GreenOptions& options = {}) {
    return flip_rate_detail(t, d, stack, T, options).gamma;
}

inline double trap_loss_rate(double gamma_flip, const LossModel& m) {
    if (!(gamma_flip >= 0.0)) throw DomainError("trap_loss_rate: gamma_flip must be non-negative");
    if (!(m.flip_to_loss_factor > 0.0))
        throw DomainError("trap_loss_rate: flip_to_loss_factor must be positive");
    if (!(m.background_rate >= 0.0))
        throw DomainError("trap_loss_rate: background_rate must be non-negative");
    return gamma_flip / m.flip_to_loss_factor + m.background_rate;
}

}  // namespace spinflip
