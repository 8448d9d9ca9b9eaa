#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "errors.hpp"
#include "potential.hpp"

namespace splitgeo {

using Vec4 = std::array<double, 4>;

// Diagonal metric values and their inverses at a point.
struct MetricComponents {
    Vec4 g;    // g_aa
    Vec4 ginv; // g^aa = 1 / g_aa
};

// Gamma[a][b][c] = Gamma^a_{bc}, symmetric in (b, c).
struct Christoffels {
    double gamma[4][4][4] = {};
};

// Full Riemann tensor: up[a][b][c][d] = R^a_{bcd}, down = R_{abcd}.
struct RiemannTensor {
    double up[4][4][4][4] = {};
    double down[4][4][4][4] = {};
};

// Sign convention for the exponential term of the elliptic residual:
// Minus gives  beta_uu + beta_vv - c e^beta  (vacuum Liouville system),
// Plus  gives  beta_uu + beta_vv + c e^beta  (electromagnetic coupling).
enum class EllipticSign { Minus, Plus };

// Liouville-equation residual of a single potential.  Hyperbolic block:
// p_uu - p_vv + c e^p.  Elliptic block: p_uu + p_vv -+ c e^p per `sign`.
inline double liouville_residual(const Potential& p, double coeff, double u, double v,
                                 EllipticSign sign = EllipticSign::Minus) {
    const double exp_term = coeff * std::exp(p(u, v));
    if (p.block() == Block::Hyperbolic) return p(u, v, 2, 0) - p(u, v, 0, 2) + exp_term;
    const double lap = p(u, v, 2, 0) + p(u, v, 0, 2);
    return sign == EllipticSign::Minus ? lap - exp_term : lap + exp_term;
}

// The 4D block metric g = e^alpha (dx0^2 - dx1^2) - e^beta (dx2^2 + dx3^2)
// with cosmological constant lambda.  Immutable; all members are pure.
class SplitMetric {
  public:
    SplitMetric(Potential alpha, Potential beta, double lambda)
        : alpha_(std::move(alpha)), beta_(std::move(beta)), lambda_(lambda) {
        if (alpha_.block() != Block::Hyperbolic)
            throw BlockMismatchError("alpha must live on the hyperbolic block");
        if (beta_.block() != Block::Elliptic)
            throw BlockMismatchError("beta must live on the elliptic block");
    }

    const Potential& alpha() const { return alpha_; }
    const Potential& beta() const { return beta_; }
    double lambda() const { return lambda_; }

    bool in_domain(const Vec4& x) const {
        return alpha_.in_domain(x[0], x[1]) && beta_.in_domain(x[2], x[3]);
    }

    // Diagonal components (e^a, -e^a, -e^b, -e^b) and their inverses.
    MetricComponents components(const Vec4& x) const {
        const double ea = std::exp(alpha_(x[0], x[1]));
        const double eb = std::exp(beta_(x[2], x[3]));
        MetricComponents m;
        m.g = {ea, -ea, -eb, -eb};
        for (int a = 0; a < 4; ++a) m.ginv[a] = 1.0 / m.g[a];
        return m;
    }

    // Block-diagonal connection; symbols mixing the two blocks vanish.
    Christoffels christoffel(const Vec4& x) const {
        const double au = alpha_(x[0], x[1], 1, 0) / 2.0;
        const double av = alpha_(x[0], x[1], 0, 1) / 2.0;
        const double bu = beta_(x[2], x[3], 1, 0) / 2.0;
        const double bv = beta_(x[2], x[3], 0, 1) / 2.0;
        Christoffels c;
        fill_block(c, 0, au, av, /*elliptic=*/false);
        fill_block(c, 2, bu, bv, /*elliptic=*/true);
        return c;
    }

    // Full curvature tensor assembled from the connection and its exact
    // first derivatives; computed on demand, never cached across points.
    RiemannTensor riemann(const Vec4& x) const {
        const auto c = christoffel(x);
        // dgamma[a][b][c][d] = d Gamma^a_{bc} / dx^d, nonzero within blocks only.
        double dg[4][4][4][4] = {};
        const double auu = alpha_(x[0], x[1], 2, 0) / 2.0;
        const double auv = alpha_(x[0], x[1], 1, 1) / 2.0;
        const double avv = alpha_(x[0], x[1], 0, 2) / 2.0;
        const double buu = beta_(x[2], x[3], 2, 0) / 2.0;
        const double buv = beta_(x[2], x[3], 1, 1) / 2.0;
        const double bvv = beta_(x[2], x[3], 0, 2) / 2.0;
        fill_block_grad(dg, 0, auu, auv, avv, /*elliptic=*/false);
        fill_block_grad(dg, 2, buu, buv, bvv, /*elliptic=*/true);

        RiemannTensor r;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int cc = 0; cc < 4; ++cc)
                    for (int d = 0; d < 4; ++d) {
                        double val = dg[a][d][b][cc] - dg[a][cc][b][d];
                        for (int e = 0; e < 4; ++e)
                            val += c.gamma[a][cc][e] * c.gamma[e][d][b] -
                                   c.gamma[a][d][e] * c.gamma[e][cc][b];
                        r.up[a][b][cc][d] = val;
                    }
        const auto m = components(x);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int cc = 0; cc < 4; ++cc)
                    for (int d = 0; d < 4; ++d)
                        r.down[a][b][cc][d] = m.g[a] * r.up[a][b][cc][d];
        return r;
    }

    // K = R_abcd R^abcd, contracted all-down against all-up through the
    // diagonal inverse metric.
    double kretschmann(const Vec4& x) const {
        const auto r = riemann(x);
        const auto m = components(x);
        double k = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c)
                    for (int d = 0; d < 4; ++d) {
                        const double rdown = r.down[a][b][c][d];
                        if (rdown == 0.0) continue;
                        k += rdown * rdown * m.ginv[a] * m.ginv[b] * m.ginv[c] * m.ginv[d];
                    }
        return k;
    }

    // Scalar curvature of each 2D block, R = sum_{ij in block} R^{ij}_{ij}.
    std::pair<double, double> block_scalar_curvatures(const Vec4& x) const {
        const auto r = riemann(x);
        const auto m = components(x);
        auto block_sum = [&](int lo) {
            double s = 0.0;
            for (int i = lo; i < lo + 2; ++i)
                for (int j = lo; j < lo + 2; ++j)
                    s += m.ginv[i] * m.ginv[j] * r.down[i][j][i][j];
            return s;
        };
        return {block_sum(0), block_sum(2)};
    }

  private:
    // Conformal 2D blocks share one symbol pattern; the elliptic one flips
    // the off-diagonal second-coordinate terms.
    static void fill_block(Christoffels& c, int lo, double hu, double hv, bool elliptic) {
        const int i = lo, j = lo + 1;
        c.gamma[i][i][i] = hu;
        c.gamma[i][i][j] = c.gamma[i][j][i] = hv;
        c.gamma[i][j][j] = elliptic ? -hu : hu;
        c.gamma[j][i][i] = elliptic ? -hv : hv;
        c.gamma[j][i][j] = c.gamma[j][j][i] = hu;
        c.gamma[j][j][j] = hv;
    }

    static void fill_block_grad(double dg[4][4][4][4], int lo, double huu, double huv,
                                double hvv, bool elliptic) {
        const int i = lo, j = lo + 1;
        // derivative with respect to the first block coordinate
        dg[i][i][i][i] = huu;
        dg[i][i][j][i] = dg[i][j][i][i] = huv;
        dg[i][j][j][i] = elliptic ? -huu : huu;
        dg[j][i][i][i] = elliptic ? -huv : huv;
        dg[j][i][j][i] = dg[j][j][i][i] = huu;
        dg[j][j][j][i] = huv;
        // derivative with respect to the second block coordinate
        dg[i][i][i][j] = huv;
        dg[i][i][j][j] = dg[i][j][i][j] = hvv;
        dg[i][j][j][j] = elliptic ? -huv : huv;
        dg[j][i][i][j] = elliptic ? -hvv : hvv;
        dg[j][i][j][j] = dg[j][j][i][j] = huv;
        dg[j][j][j][j] = hvv;
    }

    Potential alpha_;
    Potential beta_;
    double lambda_;
};

} // namespace splitgeo
