#pragma once

// Test-only oracle: the scattered electric Green dyadic G(r, r') above a
// vacuum / film / substrate stack at *separated* points, followed by a
// finite-difference curl x G x curl' at coincidence.
//
// Shares no code with the library's integration path: its own Fresnel
// coefficients (plain textbook forms), its own Gauss-Legendre rule, a
// propagating segment parametrised by kz instead of q, and the full angular
// (Bessel) structure of the plane-wave expansion.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
// Field sums and differences run in extended precision: the curl-curl is a strong
// cancellation of the quasi-static part of G.
using real = long double;
using lcplx = std::complex<real>;
using Tensor = std::array<std::array<lcplx, 3>, 3>;

inline constexpr double pi = std::numbers::pi;

struct Medium {
    cplx eps_film;
    cplx eps_sub;
    double h;  // may be infinite
    double k0;
};

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
struct GaussLegendre {
    std::vector<double> x, w;
    explicit GaussLegendre(int n) : x(n), w(n) {
        for (int i = 0; i < n; ++i) {
            double z = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (z * p1 - p0) / (z * z - 1.0);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};

/// J_n(u) / u^n from the power series (the oracle only needs small u).
inline real bessel_scaled(int n, real u) {
    real fact_n = 1.0;
    for (int k = 2; k <= n; ++k) fact_n *= k;
    const real y = 0.25L * u * u;
    real term = 1.0L / (std::pow(2.0L, n) * fact_n);
    real sum = term;
    for (int k = 1; k < 60; ++k) {
        term *= -y / (k * static_cast<real>(k + n));
        sum += term;
        if (std::abs(term) < 1e-21L * std::abs(sum)) break;
    }
    return sum;
}

inline cplx branch_sqrt(cplx z) {
    cplx r = std::sqrt(z);
    return r.imag() < 0.0 ? -r : r;
}

struct Coefficients {
    cplx rs, rp;
};

/// Plain Fresnel recursion in terms of the normal wavenumbers of each layer.
inline Coefficients fresnel(const Medium& m, cplx kz0, cplx kz1, cplx kz2) {
    const cplx e0 = 1.0, e1 = m.eps_film, e2 = m.eps_sub;
    const cplx rs01 = (kz0 - kz1) / (kz0 + kz1);
    const cplx rp01 = (e1 * kz0 - e0 * kz1) / (e1 * kz0 + e0 * kz1);
    if (std::isinf(m.h)) return {rs01, rp01};
    const cplx rs12 = (kz1 - kz2) / (kz1 + kz2);
    const cplx rp12 = (e2 * kz1 - e1 * kz2) / (e2 * kz1 + e1 * kz2);
    const cplx ph = std::exp(cplx(0.0, 2.0) * kz1 * m.h);
    return {(rs01 + rs12 * ph) / (1.0 + rs01 * rs12 * ph), (rp01 + rp12 * ph) / (1.0 + rp01 * rp12 * ph)};
}

/// Angular-averaged plane-wave dyads at lateral offset (X, Y) for in-plane wavenumber q.
struct Angular {
    real J0, J1c, J1s, J2c, J2s;
    Angular(real q, real X, real Y) {
        const real rho2 = X * X + Y * Y;
        const real u = q * std::sqrt(rho2);
        J0 = bessel_scaled(0, u);
        const real j1 = q * bessel_scaled(1, u);      // J1(u)/rho
        const real j2 = q * q * bessel_scaled(2, u);  // J2(u)/rho^2
        J1c = j1 * X;
        J1s = j1 * Y;
        J2c = j2 * (X * X - Y * Y);
        J2s = j2 * 2.0 * X * Y;
    }
};

/// Integrand bracket r_s SS + (r_p / k0^2) M for normal wavenumber kz (vacuum).
inline Tensor bracket(const Coefficients& coef, real kz, real q, real k0, const Angular& a) {
    Tensor t{};
    const lcplx rs(coef.rs);
    const real kz2 = kz * kz;
    const lcplx ikzq(0.0L, kz * q);
    const lcplx rp = lcplx(coef.rp) / (k0 * k0);
    t[0][0] = rs * (0.5 * (a.J0 + a.J2c)) + rp * (-kz2 * 0.5 * (a.J0 - a.J2c));
    t[1][1] = rs * (0.5 * (a.J0 - a.J2c)) + rp * (-kz2 * 0.5 * (a.J0 + a.J2c));
    t[0][1] = t[1][0] = rs * (0.5 * a.J2s) + rp * (kz2 * 0.5 * a.J2s);
    t[0][2] = rp * (-ikzq * a.J1c);
    t[1][2] = rp * (-ikzq * a.J1s);
    t[2][0] = rp * (ikzq * a.J1c);
    t[2][1] = rp * (ikzq * a.J1s);
    t[2][2] = rp * (q * q * a.J0);
    return t;
}

/// Evanescent bracket with kz = i kappa kept in real arithmetic so that the real
/// and imaginary parts of the reflection coefficients never mix.
inline Tensor bracket_evanescent(const Coefficients& coef, real kappa, real q, real k0, const Angular& a) {
    Tensor t{};
    const lcplx rs(coef.rs);
    const real k2 = kappa * kappa;
    const real kq = kappa * q;
    const lcplx rp = lcplx(coef.rp) / (k0 * k0);
    t[0][0] = rs * (0.5 * (a.J0 + a.J2c)) + rp * (k2 * 0.5 * (a.J0 - a.J2c));
    t[1][1] = rs * (0.5 * (a.J0 - a.J2c)) + rp * (k2 * 0.5 * (a.J0 + a.J2c));
    t[0][1] = t[1][0] = rs * (0.5 * a.J2s) + rp * (-k2 * 0.5 * a.J2s);
    t[0][2] = rp * (kq * a.J1c);
    t[1][2] = rp * (kq * a.J1s);
    t[2][0] = rp * (-kq * a.J1c);
    t[2][1] = rp * (-kq * a.J1s);
    t[2][2] = rp * (q * q * a.J0);
    return t;
}

/// Fixed composite quadrature rule (identical nodes for every stencil point, so
/// the finite differences see a smooth function of the offsets).
class ScatteredDyadic {
public:
    ScatteredDyadic(const Medium& m, double d, double delta_film) : m_(m), gl_(24) {
        double lo = 1.0 / d;
        if (std::isfinite(delta_film)) lo = std::min({lo, 1.0 / delta_film});
        if (std::isfinite(m.h)) {
            lo = std::min(lo, 1.0 / m.h);
            if (std::isfinite(delta_film)) lo = std::min(lo, m.h / (delta_film * delta_film));
        }
        lo *= 1e-3;
        const double hi = 70.0 / (2.0 * d);
        breaks_.push_back(0.0);
        for (double x = lo; x < hi; x *= 2.0) breaks_.push_back(x);
        breaks_.push_back(hi);
        // Branch points where a lower layer turns from propagating to evanescent:
        // grade the panels geometrically towards each from both sides.
        for (cplx e : {m.eps_film, m.eps_sub}) {
            if (!(e.real() > 1.0) || std::abs(e.imag()) > 1e-3 * e.real()) continue;
            const double kb = m.k0 * std::sqrt(e.real() - 1.0);
            if (!(kb < hi)) continue;
            breaks_.push_back(kb);
            for (int j = 1; j <= 30; ++j) {
                breaks_.push_back(kb * (1.0 - std::ldexp(1.0, -j)));
                breaks_.push_back(kb * (1.0 + std::ldexp(1.0, -j)));
            }
        }
        std::sort(breaks_.begin(), breaks_.end());
        breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());

        const int prop_panels = 8;
        for (int i = 0; i < prop_panels; ++i) {
            const double a = m.k0 * i / prop_panels, b = m.k0 * (i + 1) / prop_panels;
            for (std::size_t j = 0; j < gl_.x.size(); ++j) {
                const double t = 0.5 * (a + b) + 0.5 * (b - a) * gl_.x[j];
                prop_nodes_.push_back({t, 0.5 * (b - a) * gl_.w[j]});
            }
        }
        for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
            const double a = breaks_[i], b = breaks_[i + 1];
            for (std::size_t j = 0; j < gl_.x.size(); ++j) {
                const double k = 0.5 * (a + b) + 0.5 * (b - a) * gl_.x[j];
                ev_nodes_.push_back({k, 0.5 * (b - a) * gl_.w[j]});
            }
        }
        const double k0 = m.k0, k02 = k0 * k0;
        for (const auto& n : ev_nodes_) {
            const double q2 = n.x * n.x + k02;
            const cplx kz0(0.0, n.x);
            const cplx kz1 = branch_sqrt(m.eps_film * k02 - q2);
            const cplx kz2 = branch_sqrt(m.eps_sub * k02 - q2);
            ev_r_.push_back(fresnel(m, kz0, kz1, kz2));
        }
        for (const auto& n : prop_nodes_) {
            const double q2 = k02 - n.x * n.x;
            const cplx kz1 = branch_sqrt(m.eps_film * k02 - q2);
            const cplx kz2 = branch_sqrt(m.eps_sub * k02 - q2);
            prop_r_.push_back(fresnel(m, cplx(n.x, 0.0), kz1, kz2));
        }
    }

    /// G(r, r') with r - r' = (X, Y, .) laterally and z + z' = Z.
    Tensor operator()(real X, real Y, real Z) const {
        Tensor g{};
        const real k0 = m_.k0;
        for (std::size_t i = 0; i < ev_nodes_.size(); ++i) {
            const real kappa = ev_nodes_[i].x;
            const real q = std::sqrt(kappa * kappa + k0 * k0);
            const Angular a(q, X, Y);
            const Tensor b = bracket_evanescent(ev_r_[i], kappa, q, k0, a);
            const real wgt = ev_nodes_[i].w * std::exp(-kappa * Z) / (4.0L * pi);
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) g[r][c] += wgt * b[r][c];
        }
        for (std::size_t i = 0; i < prop_nodes_.size(); ++i) {
            const real t = prop_nodes_[i].x;
            const real q = std::sqrt(k0 * k0 - t * t);
            const Angular a(q, X, Y);
            const Tensor b = bracket(prop_r_[i], t, q, k0, a);
            const lcplx wgt = static_cast<real>(prop_nodes_[i].w) * std::exp(lcplx(0.0L, t * Z)) * lcplx(0.0L, 1.0L / (4.0L * pi));
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) g[r][c] += wgt * b[r][c];
        }
        return g;
    }

private:
    struct Node {
        double x, w;
    };
    Medium m_;
    GaussLegendre gl_;
    std::vector<double> breaks_;
    std::vector<Node> ev_nodes_, prop_nodes_;
    std::vector<Coefficients> ev_r_, prop_r_;
};

/// [curl x G x curl']_ij at r = r' = (0, 0, d), by eighth-order central differences
/// of step s. The quasi-static part of G is nearly curl-free, so the result is a
/// strong cancellation; high order lets s stay large enough to keep roundoff small.
inline Tensor finite_difference_curlcurl(const ScatteredDyadic& G, double d, double step) {
    const real Z0 = 2.0L * d, s = step;
    constexpr real c1[5] = {0.0L, 4.0L / 5, -1.0L / 5, 4.0L / 105, -1.0L / 280};
    constexpr real c2[5] = {-205.0L / 72, 8.0L / 5, -1.0L / 5, 8.0L / 315, -1.0L / 560};
    auto at = [&](int ia, int ka, int ic, int kc) {
        real off[3] = {0.0L, 0.0L, 0.0L};
        off[ia] += ka * s;
        off[ic] += kc * s;
        return G(off[0], off[1], Z0 + off[2]);
    };
    auto accumulate = [](Tensor& t, const Tensor& g, real w) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t[i][j] += w * g[i][j];
    };
    // second derivatives D_a D_c G in (X, Y, Z)
    std::array<std::array<Tensor, 3>, 3> dd{};
    for (int a = 0; a < 3; ++a) {
        for (int c = a; c < 3; ++c) {
            Tensor t{};
            if (a == c) {
                accumulate(t, at(a, 0, a, 0), c2[0] / (s * s));
                for (int k = 1; k <= 4; ++k) {
                    accumulate(t, at(a, k, a, 0), c2[k] / (s * s));
                    accumulate(t, at(a, -k, a, 0), c2[k] / (s * s));
                }
            } else {
                for (int k = 1; k <= 4; ++k)
                    for (int l = 1; l <= 4; ++l) {
                        const real w = c1[k] * c1[l] / (s * s);
                        accumulate(t, at(a, k, c, l), w);
                        accumulate(t, at(a, k, c, -l), -w);
                        accumulate(t, at(a, -k, c, l), -w);
                        accumulate(t, at(a, -k, c, -l), w);
                    }
            }
            dd[a][c] = dd[c][a] = t;
        }
    }
    // d/dx' = -D_X, d/dy' = -D_Y, d/dz' = +D_Z
    constexpr real primed_sign[3] = {-1.0L, -1.0L, 1.0L};
    auto levi = [](int i, int j, int k) -> real {
        if (i == j || j == k || i == k) return 0.0;
        return ((i + 1) % 3 == j) ? 1.0 : -1.0;
    };
    Tensor h{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    const real e1 = levi(i, a, b);
                    if (e1 == 0.0) continue;
                    for (int c = 0; c < 3; ++c)
                        for (int e = 0; e < 3; ++e) {
                            const real e2 = levi(j, c, e);
                            if (e2 == 0.0) continue;
                            h[i][j] += e1 * e2 * primed_sign[c] * dd[a][c][b][e];
                        }
                }
    return h;
}

}  // namespace oracle
