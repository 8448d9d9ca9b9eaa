#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dop853.hpp"
#include "errors.hpp"
#include "metric.hpp"

namespace splitgeo {

// Point on the 8D phase space: affine parameter, position, covariant momentum.
struct PhaseState {
    double s = 0.0;
    Vec4 x{};
    Vec4 p{};
};

enum class CausalClass { Timelike, Null, Spacelike };

enum class StopReason { SpanEnd, CoordinateSingularityHit };

struct PathDiagnostics {
    double hamiltonian_drift = 0.0; // max |H(s) - H(s0)| / max(1, |H(s0)|)
    long steps_accepted = 0;
    long steps_rejected = 0;
    StopReason reason = StopReason::SpanEnd;
    int singular_axis = -1; // global coordinate index when a chart boundary was hit
    double s_exit = 0.0;    // exit parameter, localized to 1e-10 in s
};

struct GeodesicPath {
    std::vector<PhaseState> samples; // strictly increasing in s
    double abs_tol = 0.0;
    double rel_tol = 0.0;
    PathDiagnostics diagnostics;
};

inline Vec4 momentum_from_velocity(const SplitMetric& m, const Vec4& x, const Vec4& v) {
    const auto g = m.components(x);
    Vec4 p;
    for (int a = 0; a < 4; ++a) p[a] = g.g[a] * v[a];
    return p;
}

inline Vec4 velocity_from_momentum(const SplitMetric& m, const Vec4& x, const Vec4& p) {
    const auto g = m.components(x);
    Vec4 v;
    for (int a = 0; a < 4; ++a) v[a] = g.ginv[a] * p[a];
    return v;
}

inline PhaseState state_from_velocity(const SplitMetric& m, double s, const Vec4& x,
                                      const Vec4& v) {
    return PhaseState{s, x, momentum_from_velocity(m, x, v)};
}

// H = g^{ab} p_a p_b with the causal class read off the sign (1e-12 band).
inline std::pair<double, CausalClass> hamiltonian(const SplitMetric& m, const PhaseState& st) {
    const auto g = m.components(st.x);
    double h = 0.0;
    for (int a = 0; a < 4; ++a) h += g.ginv[a] * st.p[a] * st.p[a];
    CausalClass cls = CausalClass::Null;
    if (h > 1e-12)
        cls = CausalClass::Timelike;
    else if (h < -1e-12)
        cls = CausalClass::Spacelike;
    return {h, cls};
}

// First-order form of the two decoupled geodesic systems, in velocities.
// The hyperbolic pair uses only alpha, the elliptic pair only beta.
inline std::pair<Vec4, Vec4> geodesic_rhs(const SplitMetric& m, const Vec4& x, const Vec4& v) {
    const double au = m.alpha()(x[0], x[1], 1, 0);
    const double av = m.alpha()(x[0], x[1], 0, 1);
    const double bu = m.beta()(x[2], x[3], 1, 0);
    const double bv = m.beta()(x[2], x[3], 0, 1);
    Vec4 dv;
    dv[0] = -(v[0] * v[1] * av + 0.5 * (v[0] * v[0] + v[1] * v[1]) * au);
    dv[1] = -(0.5 * (v[0] * v[0] + v[1] * v[1]) * av + v[0] * v[1] * au);
    dv[2] = -(v[2] * v[3] * bv + 0.5 * (v[2] * v[2] - v[3] * v[3]) * bu);
    dv[3] = -(0.5 * (v[3] * v[3] - v[2] * v[2]) * bv + v[2] * v[3] * bu);
    return {v, dv};
}

// Light-cone variables of the hyperbolic block: z0 = x0 + x1, z1 = x0 - x1,
// applied to positions and velocities alike.
inline std::array<double, 4> to_lightcone(const std::array<double, 4>& s) {
    return {s[0] + s[1], s[0] - s[1], s[2] + s[3], s[2] - s[3]};
}

inline std::array<double, 4> from_lightcone(const std::array<double, 4>& z) {
    return {(z[0] + z[1]) / 2.0, (z[0] - z[1]) / 2.0, (z[2] + z[3]) / 2.0,
            (z[2] - z[3]) / 2.0};
}

namespace detail {

// Localizes the domain-exit parameter by bisecting a second-order Taylor
// model of the last accepted state against the chart predicate.
inline double refine_exit(const SplitMetric& m, const PhaseState& last, const Vec4& v,
                          const Vec4& a, double bracket, int& axis) {
    auto position = [&](double d) {
        Vec4 xx;
        for (int i = 0; i < 4; ++i) xx[i] = last.x[i] + d * v[i] + 0.5 * d * d * a[i];
        return xx;
    };
    double lo = 0.0, hi = bracket;
    // The bracket end must actually be outside; expand if the wall sits
    // slightly beyond the failed trial step.
    for (int i = 0; i < 60 && m.in_domain(position(hi)); ++i) hi *= 2.0;
    if (m.in_domain(position(hi))) {
        // The chart failed by numerical overflow rather than by crossing a
        // domain wall (a coordinate running away in finite parameter).
        // Pin the failure to the fastest-moving coordinate.
        axis = 0;
        for (int i = 1; i < 4; ++i)
            if (std::abs(v[i]) > std::abs(v[axis])) axis = i;
        return last.s;
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (m.in_domain(position(mid)) ? lo : hi) = mid;
    }
    const Vec4 outside = position(hi);
    if (!m.alpha().in_domain(outside[0], outside[1]))
        axis = m.alpha().domain_hint().violating_axis(outside[0], outside[1]);
    else
        axis = 2 + m.beta().domain_hint().violating_axis(outside[2], outside[3]);
    return last.s + lo;
}

} // namespace detail

// Integrates the geodesic equations with an adaptive embedded 8(5,3) pair.
// The state advances in velocities; samples are stored with covariant
// momenta.  `stops` lists parameter values that must appear exactly among
// the samples.  Terminates at the span end or, when the trajectory leaves a
// chart (e.g. x1 -> 0 for the hyperbolic Liouville built-in), with
// StopReason::CoordinateSingularityHit and the offending coordinate;
// a persistent error-control underflow throws StepUnderflowError.
inline GeodesicPath integrate(const SplitMetric& m, const PhaseState& init,
                              std::pair<double, double> s_span,
                              std::pair<double, double> tol,
                              std::span<const double> stops = {}) {
    const auto [abs_tol, rel_tol] = tol;
    for (double t : {abs_tol, rel_tol})
        if (!(t >= 1e-14 && t <= 1e-2))
            throw ValidationError("tolerances must lie in [1e-14, 1e-2]");
    if (s_span.first == s_span.second)
        throw ValidationError("degenerate s span");
    if (!m.in_domain(init.x)) throw OutOfDomainError("initial state outside domain");

    using State = std::array<double, 8>;
    auto rhs = [&m](double, const State& y) {
        const Vec4 x{y[0], y[1], y[2], y[3]};
        const Vec4 v{y[4], y[5], y[6], y[7]};
        const auto [dx, dv] = geodesic_rhs(m, x, v);
        return State{dx[0], dx[1], dx[2], dx[3], dv[0], dv[1], dv[2], dv[3]};
    };

    const Vec4 v0 = velocity_from_momentum(m, init.x, init.p);
    State y0{init.x[0], init.x[1], init.x[2], init.x[3], v0[0], v0[1], v0[2], v0[3]};

    GeodesicPath path;
    path.abs_tol = abs_tol;
    path.rel_tol = rel_tol;
    Vec4 last_v{}, last_a{};
    auto on_accept = [&](double s, const State& y, const State& yp) {
        const Vec4 x{y[0], y[1], y[2], y[3]};
        const Vec4 v{y[4], y[5], y[6], y[7]};
        path.samples.push_back(PhaseState{s, x, momentum_from_velocity(m, x, v)});
        last_v = v;
        last_a = {yp[4], yp[5], yp[6], yp[7]};
    };

    ode::Controls ctl;
    ctl.abs_tol = abs_tol;
    ctl.rel_tol = rel_tol;
    const auto res = ode::integrate_dop853<8>(rhs, s_span.first, s_span.second, y0, ctl,
                                              stops, on_accept);

    path.diagnostics.steps_accepted = res.accepted;
    path.diagnostics.steps_rejected = res.rejected;
    if (res.termination == ode::Termination::DomainBlocked) {
        path.diagnostics.reason = StopReason::CoordinateSingularityHit;
        const double bracket = std::max(res.h_block, 1e-12);
        Vec4 fullv{res.y[4], res.y[5], res.y[6], res.y[7]};
        path.diagnostics.s_exit = detail::refine_exit(m, path.samples.back(), fullv, last_a,
                                                      bracket, path.diagnostics.singular_axis);
    } else if (res.termination == ode::Termination::ErrorFloor) {
        // Distinguish a coordinate running away at finite parameter (a chart
        // failure, like the span of the conformal wedge) from a genuine
        // error-control stall.
        double scale0 = 1.0, scale1 = 0.0;
        for (int i = 0; i < 4; ++i) {
            scale0 = std::max({scale0, std::abs(init.x[i]), std::abs(v0[i])});
            scale1 = std::max({scale1, std::abs(res.y[i]), std::abs(res.y[i + 4])});
        }
        if (scale1 < 1e8 * scale0)
            throw StepUnderflowError("step size underflow at s = " + std::to_string(res.s_end));
        path.diagnostics.reason = StopReason::CoordinateSingularityHit;
        path.diagnostics.s_exit = res.s_end;
        int axis = 0;
        for (int i = 1; i < 4; ++i)
            if (std::abs(res.y[i + 4]) > std::abs(res.y[axis + 4])) axis = i;
        path.diagnostics.singular_axis = axis;
    } else {
        path.diagnostics.reason = StopReason::SpanEnd;
        path.diagnostics.s_exit = res.s_end;
    }

    const double h0 = hamiltonian(m, path.samples.front()).first;
    double drift = 0.0;
    for (const auto& st : path.samples)
        drift = std::max(drift, std::abs(hamiltonian(m, st).first - h0));
    path.diagnostics.hamiltonian_drift = drift / std::max(1.0, std::abs(h0));
    return path;
}

} // namespace splitgeo
