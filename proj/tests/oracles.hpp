#pragma once

// Test-only oracles, kept independent of the library's evaluation paths:
//  * Jet2: forward-mode 2-jet arithmetic for exact derivative cross-checks;
//  * central finite differences for first/second derivatives;
//  * finite-difference Christoffel and Riemann constructions.

#include <array>
#include <cmath>
#include <functional>
#include <random>

#include "splitgeo/metric.hpp"

namespace oracles {

// Value with first and second derivatives with respect to two variables.
struct Jet2 {
    double v = 0, du = 0, dv = 0, duu = 0, duv = 0, dvv = 0;

    static Jet2 var_u(double x) { return {x, 1, 0, 0, 0, 0}; }
    static Jet2 var_v(double x) { return {x, 0, 1, 0, 0, 0}; }
    static Jet2 c(double x) { return {x, 0, 0, 0, 0, 0}; }

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        return {a.v + b.v, a.du + b.du, a.dv + b.dv, a.duu + b.duu, a.duv + b.duv,
                a.dvv + b.dvv};
    }
    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        return {a.v - b.v, a.du - b.du, a.dv - b.dv, a.duu - b.duu, a.duv - b.duv,
                a.dvv - b.dvv};
    }
    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        return {a.v * b.v,
                a.du * b.v + a.v * b.du,
                a.dv * b.v + a.v * b.dv,
                a.duu * b.v + 2 * a.du * b.du + a.v * b.duu,
                a.duv * b.v + a.du * b.dv + a.dv * b.du + a.v * b.duv,
                a.dvv * b.v + 2 * a.dv * b.dv + a.v * b.dvv};
    }
    friend Jet2 operator*(double s, const Jet2& a) { return Jet2::c(s) * a; }

    // f(g) with f', f'' supplied.
    static Jet2 compose(const Jet2& g, double f, double f1, double f2) {
        return {f,
                f1 * g.du,
                f1 * g.dv,
                f2 * g.du * g.du + f1 * g.duu,
                f2 * g.du * g.dv + f1 * g.duv,
                f2 * g.dv * g.dv + f1 * g.dvv};
    }
};

inline Jet2 tanh(const Jet2& g) {
    const double t = std::tanh(g.v);
    const double s = 1.0 - t * t;
    return Jet2::compose(g, t, s, -2.0 * t * s);
}

inline double pick(const Jet2& j, int du, int dv) {
    if (du == 0 && dv == 0) return j.v;
    if (du == 1 && dv == 0) return j.du;
    if (du == 0 && dv == 1) return j.dv;
    if (du == 2 && dv == 0) return j.duu;
    if (du == 1 && dv == 1) return j.duv;
    return j.dvv;
}

// Central finite differences of a scalar function of two variables.
inline double fd1(const std::function<double(double, double)>& f, double u, double v, int axis,
                  double h = 1e-5) {
    return axis == 0 ? (f(u + h, v) - f(u - h, v)) / (2 * h)
                     : (f(u, v + h) - f(u, v - h)) / (2 * h);
}

// Finite-difference Christoffels from metric components,
// Gamma^a_{bc} = 1/2 g^{aa} (d_b g_{ac} + d_c g_{ab} - d_a g_{bc}) for a
// diagonal metric.
inline splitgeo::Christoffels fd_christoffel(const splitgeo::SplitMetric& m,
                                             const splitgeo::Vec4& x, double h = 1e-5) {
    using namespace splitgeo;
    auto gat = [&](const Vec4& p) { return m.components(p).g; };
    double dg[4][4]; // dg[a][c] = d g_aa / dx^c
    for (int c = 0; c < 4; ++c) {
        Vec4 xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        const auto gp = gat(xp), gm = gat(xm);
        for (int a = 0; a < 4; ++a) dg[a][c] = (gp[a] - gm[a]) / (2 * h);
    }
    const auto comp = m.components(x);
    Christoffels out;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) {
                double t = 0.0;
                if (a == c) t += dg[a][b];
                if (a == b) t += dg[a][c];
                if (b == c) t -= dg[b][a];
                out.gamma[a][b][c] = 0.5 * comp.ginv[a] * t;
            }
    return out;
}

// Finite-difference Riemann tensor from the library's exact Christoffels:
// R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb} + quadratic terms.
inline void fd_riemann(const splitgeo::SplitMetric& m, const splitgeo::Vec4& x,
                       double up[4][4][4][4], double h = 1e-5) {
    using namespace splitgeo;
    Christoffels g0 = m.christoffel(x);
    double dgam[4][4][4][4]; // d Gamma^a_{bc} / dx^d
    for (int d = 0; d < 4; ++d) {
        Vec4 xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        const auto gp = m.christoffel(xp), gm = m.christoffel(xm);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c)
                    dgam[a][b][c][d] = (gp.gamma[a][b][c] - gm.gamma[a][b][c]) / (2 * h);
    }
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    double val = dgam[a][d][b][c] - dgam[a][c][b][d];
                    for (int e = 0; e < 4; ++e)
                        val += g0.gamma[a][c][e] * g0.gamma[e][d][b] -
                               g0.gamma[a][d][e] * g0.gamma[e][c][b];
                    up[a][b][c][d] = val;
                }
}

inline double fd_kretschmann(const splitgeo::SplitMetric& m, const splitgeo::Vec4& x,
                             double h = 1e-5) {
    using namespace splitgeo;
    double up[4][4][4][4];
    fd_riemann(m, x, up, h);
    const auto comp = m.components(x);
    double k = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    const double down = comp.g[a] * up[a][b][c][d];
                    k += down * down * comp.ginv[a] * comp.ginv[b] * comp.ginv[c] *
                         comp.ginv[d];
                }
    return k;
}

inline std::pair<double, double> fd_block_curvatures(const splitgeo::SplitMetric& m,
                                                     const splitgeo::Vec4& x, double h = 1e-5) {
    using namespace splitgeo;
    double up[4][4][4][4];
    fd_riemann(m, x, up, h);
    const auto comp = m.components(x);
    auto block_sum = [&](int lo) {
        double s = 0.0;
        for (int i = lo; i < lo + 2; ++i)
            for (int j = lo; j < lo + 2; ++j)
                s += comp.ginv[i] * comp.ginv[j] * comp.g[i] * up[i][j][i][j];
        return s;
    };
    return {block_sum(0), block_sum(2)};
}

} // namespace oracles
