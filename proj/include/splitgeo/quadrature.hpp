#pragma once

// Adaptive Gauss-Kronrod 15(7) quadrature with absolute-error control.
// Works for real- and complex-valued integrands over a real interval.

#include <array>
#include <cmath>
#include <complex>
#include <type_traits>

#include "errors.hpp"

namespace splitgeo::quad {

namespace gk15 {
// Kronrod-15 abscissae (non-negative half) and weights; the embedded
// Gauss-7 rule sits on abscissae 0, 2, 4, 6.
inline constexpr std::array<double, 8> xk = {
    0.00000000000000000e+00, 2.07784955007898468e-01, 4.05845151377397167e-01,
    5.86087235467691130e-01, 7.41531185599394440e-01, 8.64864423359769073e-01,
    9.49107912342758525e-01, 9.91455371120812639e-01,
};
inline constexpr std::array<double, 8> wk = {
    2.09482141084727828e-01, 2.04432940075298892e-01, 1.90350578064785410e-01,
    1.69004726639267903e-01, 1.40653259715525919e-01, 1.04790010322250184e-01,
    6.30920926299785533e-02, 2.29353220105292250e-02,
};
inline constexpr std::array<double, 4> wg = {
    4.17959183673469388e-01, 3.81830050505118945e-01, 2.79705391489276668e-01,
    1.29484966168869693e-01,
};
} // namespace gk15

template <typename F>
using value_t = std::invoke_result_t<F, double>;

// Single GK15 panel: returns (Kronrod estimate, |K - G| error estimate).
template <typename F>
auto panel(F&& f, double a, double b) {
    using R = value_t<F>;
    const double mid = 0.5 * (a + b), hl = 0.5 * (b - a);
    const R fc = f(mid);
    R ik = gk15::wk[0] * fc;
    R ig = gk15::wg[0] * fc;
    for (int i = 1; i < 8; ++i) {
        const R fp = f(mid + hl * gk15::xk[i]);
        const R fm = f(mid - hl * gk15::xk[i]);
        ik += gk15::wk[i] * (fp + fm);
        if (i % 2 == 0) ig += gk15::wg[i / 2] * (fp + fm);
    }
    ik *= hl;
    ig *= hl;
    return std::pair<R, double>{ik, std::abs(ik - ig)};
}

namespace detail {
template <typename F>
auto recurse(F&& f, double a, double b, double abs_tol, int depth) -> value_t<F> {
    auto [val, err] = panel(f, a, b);
    if (err <= abs_tol || std::abs(b - a) < 1e-14 * (1.0 + std::abs(a))) {
        if (err > abs_tol && depth <= 0)
            throw QuadratureError("quadrature failed to reach the requested tolerance");
        return val;
    }
    if (depth <= 0)
        throw QuadratureError("quadrature failed to reach the requested tolerance");
    const double mid = 0.5 * (a + b);
    return recurse(f, a, mid, abs_tol / 2.0, depth - 1) +
           recurse(f, mid, b, abs_tol / 2.0, depth - 1);
}
} // namespace detail

// Integral of f over [a, b] to the given absolute tolerance.
template <typename F>
auto integrate(F&& f, double a, double b, double abs_tol, int max_depth = 48) -> value_t<F> {
    if (a == b) return value_t<F>{};
    return detail::recurse(f, a, b, abs_tol, max_depth);
}

// Contour integral of a complex integrand along the straight segment
// z0 -> z1, to the given absolute tolerance.
template <typename F>
std::complex<double> integrate_segment(F&& f, std::complex<double> z0, std::complex<double> z1,
                                       double abs_tol, int max_depth = 48) {
    const std::complex<double> dz = z1 - z0;
    if (dz == std::complex<double>(0.0, 0.0)) return {};
    auto g = [&](double t) { return f(z0 + t * dz) * dz; };
    return integrate(g, 0.0, 1.0, abs_tol, max_depth);
}

} // namespace splitgeo::quad
