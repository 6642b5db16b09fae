#pragma once

// SI physical constants (CODATA 2018 exact/recommended values).

#include <numbers>

namespace spinflip {

inline constexpr double pi = std::numbers::pi;

struct PhysicalConstants {
    double mu0 = 1.25663706212e-6;    // H/m
    double hbar = 1.054571817e-34;    // J s
    double kB = 1.380649e-23;         // J/K
    double c = 299792458.0;           // m/s
    double muB = 9.2740100783e-24;    // J/T
    double gS = 2.0;
};

inline constexpr PhysicalConstants constants{};

/// Vacuum wavenumber omega/c.
constexpr double vacuum_wavenumber(double omega) { return omega / constants.c; }

constexpr double angular_frequency(double f_hz) { return 2.0 * pi * f_hz; }

}  // namespace spinflip
