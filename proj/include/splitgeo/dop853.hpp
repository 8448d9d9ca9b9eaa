#pragma once

// Embedded Dormand-Prince 8(5,3) stepper after Hairer, Norsett & Wanner,
// "Solving Ordinary Differential Equations I" (DOP853).  Step control is a
// PI controller on the combined 5th/3rd order error estimate.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "errors.hpp"

namespace splitgeo::ode {

namespace dp853 {
// Nodes
inline constexpr double c2 = 0.526001519587677318785587544488e-01;
inline constexpr double c3 = 0.789002279381515978178381316732e-01;
inline constexpr double c4 = 0.118350341907227396726757197510e+00;
inline constexpr double c5 = 0.281649658092772603273242802490e+00;
inline constexpr double c6 = 0.333333333333333333333333333333e+00;
inline constexpr double c7 = 0.25e+00;
inline constexpr double c8 = 0.307692307692307692307692307692e+00;
inline constexpr double c9 = 0.651282051282051282051282051282e+00;
inline constexpr double c10 = 0.6e+00;
inline constexpr double c11 = 0.857142857142857142857142857142e+00;

// Runge-Kutta matrix (nonzero entries)
inline constexpr double a21 = 5.26001519587677318785587544488e-2;
inline constexpr double a31 = 1.97250569845378994544595329183e-2;
inline constexpr double a32 = 5.91751709536136983633785987549e-2;
inline constexpr double a41 = 2.95875854768068491816892993775e-2;
inline constexpr double a43 = 8.87627564304205475450678981324e-2;
inline constexpr double a51 = 2.41365134159266685502369798665e-1;
inline constexpr double a53 = -8.84549479328286085344864962717e-1;
inline constexpr double a54 = 9.24834003261792003115737966543e-1;
inline constexpr double a61 = 3.7037037037037037037037037037e-2;
inline constexpr double a64 = 1.70828608729473871279604482173e-1;
inline constexpr double a65 = 1.25467687566822425016691814123e-1;
inline constexpr double a71 = 3.7109375e-2;
inline constexpr double a74 = 1.70252211019544039314978060272e-1;
inline constexpr double a75 = 6.02165389804559606850219397283e-2;
inline constexpr double a76 = -1.7578125e-2;
inline constexpr double a81 = 3.70920001185047927108779319836e-2;
inline constexpr double a84 = 1.70383925712239993810214054705e-1;
inline constexpr double a85 = 1.07262030446373284651809199168e-1;
inline constexpr double a86 = -1.53194377486244017527936158236e-2;
inline constexpr double a87 = 8.27378916381402288758473766002e-3;
inline constexpr double a91 = 6.24110958716075717114429577812e-1;
inline constexpr double a94 = -3.36089262944694129406857109825e0;
inline constexpr double a95 = -8.68219346841726006818189891453e-1;
inline constexpr double a96 = 2.75920996994467083049415600797e1;
inline constexpr double a97 = 2.01540675504778934086186788979e1;
inline constexpr double a98 = -4.34898841810699588477366255144e1;
inline constexpr double a101 = 4.77662536438264365890433908527e-1;
inline constexpr double a104 = -2.48811461997166764192642586468e0;
inline constexpr double a105 = -5.90290826836842996371446475743e-1;
inline constexpr double a106 = 2.12300514481811942347288949897e1;
inline constexpr double a107 = 1.52792336328824235832596922938e1;
inline constexpr double a108 = -3.32882109689848629194453265587e1;
inline constexpr double a109 = -2.03312017085086261358222928593e-2;
inline constexpr double a111 = -9.3714243008598732571704021658e-1;
inline constexpr double a114 = 5.18637242884406370830023853209e0;
inline constexpr double a115 = 1.09143734899672957818500254654e0;
inline constexpr double a116 = -8.14978701074692612513997267357e0;
inline constexpr double a117 = -1.85200656599969598641566180701e1;
inline constexpr double a118 = 2.27394870993505042818970056734e1;
inline constexpr double a119 = 2.49360555267965238987089396762e0;
inline constexpr double a1110 = -3.0467644718982195003823669022e0;
inline constexpr double a121 = 2.27331014751653820792359768449e0;
inline constexpr double a124 = -1.05344954667372501984066689879e1;
inline constexpr double a125 = -2.00087205822486249909675718444e0;
inline constexpr double a126 = -1.79589318631187989172765950534e1;
inline constexpr double a127 = 2.79488845294199600508499808837e1;
inline constexpr double a128 = -2.85899827713502369474065508674e0;
inline constexpr double a129 = -8.87285693353062954433549289258e0;
inline constexpr double a1210 = 1.23605671757943030647266201528e1;
inline constexpr double a1211 = 6.43392746015763530355970484046e-1;

// 8th-order weights
inline constexpr double b1 = 5.42937341165687622380535766363e-2;
inline constexpr double b6 = 4.45031289275240888144113950566e0;
inline constexpr double b7 = 1.89151789931450038304281599044e0;
inline constexpr double b8 = -5.8012039600105847814672114227e0;
inline constexpr double b9 = 3.1116436695781989440891606237e-1;
inline constexpr double b10 = -1.52160949662516078556178806805e-1;
inline constexpr double b11 = 2.01365400804030348374776537501e-1;
inline constexpr double b12 = 4.47106157277725905176885569043e-2;

// 3rd-order error estimator
inline constexpr double e31 = 0.244094488188976377952755905512e+00;
inline constexpr double e32 = 0.733846688281611857341361741547e+00;
inline constexpr double e33 = 0.220588235294117647058823529412e-01;

// 5th-order error estimator
inline constexpr double e51 = 0.1312004499419488073250102996e-01;
inline constexpr double e56 = -0.1225156446376204440720569753e+01;
inline constexpr double e57 = -0.4957589496572501915214079952e+00;
inline constexpr double e58 = 0.1664377182454986536961530415e+01;
inline constexpr double e59 = -0.3503288487499736816886487290e+00;
inline constexpr double e510 = 0.3341791187130174790297318841e+00;
inline constexpr double e511 = 0.8192320648511571246570742613e-01;
inline constexpr double e512 = -0.2235530786388629525884427845e-01;
} // namespace dp853

enum class Termination {
    ReachedEnd,    // integrated through the whole span
    DomainBlocked, // right-hand side kept leaving its domain; stopped at the boundary
    ErrorFloor,    // error control forced the step below the representable floor
};

template <std::size_t N>
struct Result {
    Termination termination = Termination::ReachedEnd;
    double s_end = 0.0;        // parameter actually reached
    double h_block = 0.0;      // first step size that hit the domain wall (DomainBlocked)
    std::array<double, N> y{}; // state at s_end
    std::array<double, N> yp{};
    long accepted = 0;
    long rejected = 0;
};

struct Controls {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    double safety = 0.9;
    double alpha = 0.125; // proportional exponent (order 8 pair)
    double beta = 0.04;   // integral exponent of the PI controller
    double min_scale = 1.0 / 3.0;
    double max_scale = 6.0;
    long max_steps = 20'000'000;
};

// Integrates y' = rhs(s, y) from s0 to s1 (either direction).
//
// rhs may throw OutOfDomainError or DomainError to signal that a stage point
// left the problem domain: the step is retried with a smaller h, and when h
// underflows the integration stops with Termination::DomainBlocked at the
// last accepted state.  A persistent error-control underflow instead throws
// StepUnderflowError.  `stops` lists parameter values the stepper must land
// on exactly (sorted in integration direction).  `on_accept(s, y, yp)` is
// invoked for the initial state and after every accepted step.
template <std::size_t N, typename Rhs, typename OnAccept>
Result<N> integrate_dop853(Rhs&& rhs, double s0, double s1, std::array<double, N> y0,
                           const Controls& ctl, std::span<const double> stops,
                           OnAccept&& on_accept) {
    using State = std::array<double, N>;
    using namespace dp853;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    const double dir = (s1 >= s0) ? 1.0 : -1.0;
    const double span = std::abs(s1 - s0);
    if (span == 0.0) throw InvalidParameterError("degenerate integration span");

    double s = s0;
    State y = y0;
    State k1;
    bool domain_ok = true;
    auto eval = [&](double ss, const State& yy, State& out) -> bool {
        try {
            out = rhs(ss, yy);
        } catch (const OutOfDomainError&) {
            return false;
        } catch (const DomainError&) {
            return false;
        }
        for (double c : out)
            if (!std::isfinite(c)) return false;
        return true;
    };

    if (!eval(s, y, k1)) throw OutOfDomainError("initial state outside domain");
    on_accept(s, y, k1);

    // Initial step: classic ||y||/||f|| heuristic; the controller corrects it.
    double h;
    {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = ctl.abs_tol + ctl.rel_tol * std::abs(y[i]);
            d0 += (y[i] / sk) * (y[i] / sk);
            d1 += (k1[i] / sk) * (k1[i] / sk);
        }
        h = (d0 > 1e-10 && d1 > 1e-10) ? 0.01 * std::sqrt(d0 / d1) : 1e-6;
        h = std::min(h, span);
    }

    std::size_t stop_idx = 0;
    auto next_target = [&]() {
        while (stop_idx < stops.size() && dir * (stops[stop_idx] - s) <= span * 1e-15)
            ++stop_idx;
        return stop_idx < stops.size() && dir * (stops[stop_idx] - s1) < 0.0 ? stops[stop_idx]
                                                                             : s1;
    };

    Result<N> res;
    double err_old = 1e-4;
    double domain_h_cap = std::numeric_limits<double>::infinity();
    bool last_fail_domain = false;
    State k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12, yw, bsum;

    for (long step = 0; step < ctl.max_steps; ++step) {
        if (dir * (s1 - s) <= span * 1e-15) {
            res.termination = Termination::ReachedEnd;
            res.s_end = s;
            res.y = y;
            res.yp = k1;
            return res;
        }
        const double target = next_target();
        h = std::min(h, domain_h_cap);

        const double h_floor = 16.0 * eps * std::max(std::abs(s), 1e-3 * span);
        if (h < h_floor) {
            res.termination =
                last_fail_domain ? Termination::DomainBlocked : Termination::ErrorFloor;
            res.s_end = s;
            res.h_block = h;
            res.y = y;
            res.yp = k1;
            return res;
        }

        bool hit_target = false;
        const double h_unclamped = h;
        if (h >= dir * (target - s) * (1.0 - 1e-12)) {
            h = dir * (target - s);
            hit_target = true;
        }

        const double hd = dir * h;
        auto stage = [&](double c, const State& arg, State& out) {
            return eval(s + c * hd, arg, out);
        };
        auto comb = [&](State& out, std::initializer_list<std::pair<const State*, double>> terms) {
            for (std::size_t i = 0; i < N; ++i) {
                double acc = 0.0;
                for (const auto& [kv, w] : terms) acc += w * (*kv)[i];
                out[i] = y[i] + hd * acc;
            }
        };

        bool ok = true;
        do {
            comb(yw, {{&k1, a21}});
            if (!(ok = stage(c2, yw, k2))) break;
            comb(yw, {{&k1, a31}, {&k2, a32}});
            if (!(ok = stage(c3, yw, k3))) break;
            comb(yw, {{&k1, a41}, {&k3, a43}});
            if (!(ok = stage(c4, yw, k4))) break;
            comb(yw, {{&k1, a51}, {&k3, a53}, {&k4, a54}});
            if (!(ok = stage(c5, yw, k5))) break;
            comb(yw, {{&k1, a61}, {&k4, a64}, {&k5, a65}});
            if (!(ok = stage(c6, yw, k6))) break;
            comb(yw, {{&k1, a71}, {&k4, a74}, {&k5, a75}, {&k6, a76}});
            if (!(ok = stage(c7, yw, k7))) break;
            comb(yw, {{&k1, a81}, {&k4, a84}, {&k5, a85}, {&k6, a86}, {&k7, a87}});
            if (!(ok = stage(c8, yw, k8))) break;
            comb(yw, {{&k1, a91}, {&k4, a94}, {&k5, a95}, {&k6, a96}, {&k7, a97}, {&k8, a98}});
            if (!(ok = stage(c9, yw, k9))) break;
            comb(yw, {{&k1, a101},
                      {&k4, a104},
                      {&k5, a105},
                      {&k6, a106},
                      {&k7, a107},
                      {&k8, a108},
                      {&k9, a109}});
            if (!(ok = stage(c10, yw, k10))) break;
            comb(yw, {{&k1, a111},
                      {&k4, a114},
                      {&k5, a115},
                      {&k6, a116},
                      {&k7, a117},
                      {&k8, a118},
                      {&k9, a119},
                      {&k10, a1110}});
            if (!(ok = stage(c11, yw, k11))) break;
            comb(yw, {{&k1, a121},
                      {&k4, a124},
                      {&k5, a125},
                      {&k6, a126},
                      {&k7, a127},
                      {&k8, a128},
                      {&k9, a129},
                      {&k10, a1210},
                      {&k11, a1211}});
            if (!(ok = stage(1.0, yw, k12))) break;
            for (std::size_t i = 0; i < N; ++i) {
                bsum[i] = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] +
                          b10 * k10[i] + b11 * k11[i] + b12 * k12[i];
                yw[i] = y[i] + hd * bsum[i];
            }
            // The 8th-order result must itself be evaluable (FSAL-style k1 of
            // the next step) and inside the domain.
            ok = eval(s + hd, yw, k2);
        } while (false);

        if (!ok) {
            ++res.rejected;
            last_fail_domain = true;
            domain_h_cap = 0.5 * h;
            h *= 0.5;
            continue;
        }

        // Combined 5th/3rd order error estimate (Hairer's dop853 formula).
        double err3 = 0.0, err5 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(yw[i]));
            const double e3 = bsum[i] - e31 * k1[i] - e32 * k9[i] - e33 * k12[i];
            const double e5 = e51 * k1[i] + e56 * k6[i] + e57 * k7[i] + e58 * k8[i] +
                              e59 * k9[i] + e510 * k10[i] + e511 * k11[i] + e512 * k12[i];
            err3 += (e3 / sk) * (e3 / sk);
            err5 += (e5 / sk) * (e5 / sk);
        }
        double deno = err5 + 0.01 * err3;
        if (deno <= 0.0) deno = 1.0;
        const double err = h * err5 * std::sqrt(1.0 / (static_cast<double>(N) * deno));

        if (err <= 1.0) {
            const bool was_reject = last_fail_domain;
            last_fail_domain = false;
            domain_h_cap *= 4.0;
            ++res.accepted;
            s = hit_target ? target : s + hd;
            y = yw;
            k1 = k2; // derivative at the accepted point, already evaluated
            on_accept(s, y, k1);
            double scale = (err == 0.0) ? ctl.max_scale
                                        : ctl.safety * std::pow(err, -ctl.alpha) *
                                              std::pow(err_old, ctl.beta);
            scale = std::clamp(scale, ctl.min_scale, ctl.max_scale);
            if (was_reject) scale = std::min(scale, 1.0);
            // A step clamped onto a forced stop says nothing about accuracy;
            // resume from the controller's unclamped proposal.
            h = (hit_target ? h_unclamped : h) * scale;
            err_old = std::max(err, 1e-4);
        } else {
            ++res.rejected;
            last_fail_domain = false;
            h *= std::max(ctl.safety * std::pow(err, -ctl.alpha), ctl.min_scale);
        }
    }
    throw Error("dop853: maximum number of steps exceeded");
}

} // namespace splitgeo::ode
