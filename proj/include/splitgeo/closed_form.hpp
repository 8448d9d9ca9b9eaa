#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <utility>

#include "errors.hpp"
#include "geodesic.hpp"
#include "potential.hpp"
#include "quadrature.hpp"

namespace splitgeo {

using cplx = std::complex<double>;

namespace detail {

// Principal logarithm with explicit floor and branch-cut policing: values
// on (or hugging) the negative real axis terminate the evaluation instead
// of silently jumping sheets.
inline cplx principal_log(cplx w) {
    const double mod = std::abs(w);
    if (mod < kLogFloor) throw LogDomainError("complex log argument has zero modulus");
    if (w.real() < 0.0 && std::abs(w.imag()) <= 1e-12 * mod)
        throw BranchCutError("complex log argument on the principal branch cut");
    return std::log(w);
}

inline double positive_log(double w, const char* what) {
    if (!(w > 0.0) || w < kLogFloor) throw LogDomainError(what);
    return std::log(w);
}

// Solution of z'' + c (z')^2 = 0 through (z0, dz0) at s = 0.
inline cplx log_flow(cplx z0, cplx dz0, cplx c, double s) {
    if (std::abs(c * dz0) < 1e-300) return z0 + dz0 * s;
    if (std::abs(c) < 1e-12) return z0 + dz0 * s;
    return z0 + principal_log(1.0 + c * dz0 * s) / c;
}

inline cplx log_flow_dot(cplx dz0, cplx c, double s) {
    if (std::abs(c) < 1e-12) return dz0;
    return dz0 / (1.0 + c * dz0 * s);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Hyperbolic block, linear potential alpha = A x0 + B x1 + C.
//
// In light-cone variables the two characteristic slopes are (A+B)/2 and
// (A-B)/2; z0 follows the printed closed form with A+B, z1 the mirrored
// form with A-B (degenerating to an affine function when A = B).
// ---------------------------------------------------------------------------
class HyperbolicLinearClosedForm {
  public:
    HyperbolicLinearClosedForm(double A, double B, double C, double D, double E, double F,
                               double G)
        : A_(A), B_(B), C_(C), D_(D), E_(E), F_(F), G_(G) {
        if (std::abs(A + B) < 1e-12)
            throw InvalidParameterError("hyperbolic linear closed form requires A + B != 0");
    }

    // (z0, z1) at parameter s.
    std::array<double, 2> eval_z(double s) const {
        const double ab = A_ + B_;
        const double z0 =
            -2.0 * detail::positive_log(2.0 / ((D_ * s + E_) * ab),
                                        "z0 log argument non-positive") / ab;
        double z1;
        const double amb = A_ - B_;
        if (std::abs(amb) < 1e-12) {
            z1 = F_ * s + G_;
        } else {
            z1 = -2.0 *
                 detail::positive_log(2.0 / ((F_ * s + G_) * amb),
                                      "z1 log argument non-positive") /
                 amb;
        }
        return {z0, z1};
    }

    std::array<double, 2> eval_z_dot(double s) const {
        const double dz0 = 2.0 * D_ / ((A_ + B_) * (D_ * s + E_));
        const double amb = A_ - B_;
        const double dz1 = std::abs(amb) < 1e-12 ? F_ : 2.0 * F_ / (amb * (F_ * s + G_));
        return {dz0, dz1};
    }

    // (x0, x1) at parameter s.
    std::array<double, 2> eval_x(double s) const {
        const auto z = eval_z(s);
        return {(z[0] + z[1]) / 2.0, (z[0] - z[1]) / 2.0};
    }

    std::array<double, 2> eval_x_dot(double s) const {
        const auto dz = eval_z_dot(s);
        return {(dz[0] + dz[1]) / 2.0, (dz[0] - dz[1]) / 2.0};
    }

    // The potential this trajectory solves.
    Potential matching_alpha() const { return Potential::linear(Block::Hyperbolic, A_, B_, C_); }

    double A_, B_, C_; // potential constants
    double D_, E_, F_, G_; // data constants
};

// ---------------------------------------------------------------------------
// Hyperbolic block, tanh-cubic potential; z1 is defined implicitly by
//   integral_0^{z1} exp(P(tanh(B a + A))) da + G s + H = 0,
// solved by adaptive quadrature plus bracketed bisection/secant.  The
// integrand is strictly positive, so the root is unique.
// ---------------------------------------------------------------------------
class HyperbolicTanhClosedForm {
  public:
    HyperbolicTanhClosedForm(double A, double B, double C, double D, double E, double F,
                             double G, double H, double J, double window = 64.0)
        : A_(A), B_(B), C_(C), D_(D), E_(E), F_(F), G_(G), H_(H), J_(J), window_(window) {}

    double integrand(double a) const {
        const double t = std::tanh(B_ * a + A_);
        return std::exp(detail::tanh_poly(t, C_, D_, E_, F_));
    }

    // (z0, z1) at parameter s; the implicit equation is solved to |eq| < tol.
    std::array<double, 2> eval_z(double s, double tol = 1e-10) const {
        if (!(tol >= 1e-14 && tol <= 1e-4))
            throw ValidationError("implicit root tolerance must lie in [1e-14, 1e-4]");
        const double z0 = A_ * s + J_;
        const double rhs = -(G_ * s + H_);
        const double z1 = solve_phi_equals(rhs, tol);
        return {z0, z1};
    }

    std::array<double, 2> eval_z_dot(double s, double tol = 1e-10) const {
        const auto z = eval_z(s, tol);
        return {A_, -G_ / integrand(z[1])};
    }

    std::array<double, 2> eval_x(double s, double tol = 1e-10) const {
        const auto z = eval_z(s, tol);
        return {(z[0] + z[1]) / 2.0, (z[0] - z[1]) / 2.0};
    }

    std::array<double, 2> eval_x_dot(double s, double tol = 1e-10) const {
        const auto dz = eval_z_dot(s, tol);
        return {(dz[0] + dz[1]) / 2.0, (dz[0] - dz[1]) / 2.0};
    }

    // Antiderivative of the integrand from 0, strictly increasing.
    double phi(double z, double tol) const {
        return quad::integrate([this](double a) { return integrand(a); }, 0.0, z, tol);
    }

    // The equation's integration variable runs along z1 = x0 - x1, so the
    // matching travelling-wave potential has its argument negated.
    Potential matching_alpha() const {
        return Potential::tanh_cubic(Block::Hyperbolic, A_, -B_, C_, D_, E_, F_);
    }

    double A_, B_, C_, D_, E_, F_; // potential constants
    double G_, H_, J_;             // data constants
    double window_;                // bracket search half-width

  private:
    double solve_phi_equals(double rhs, double tol) const {
        const double qtol = tol / 10.0;
        auto equation = [&](double z) { return phi(z, qtol) - rhs; };
        // Expand a bracket around 0; phi is monotone so one sign change exists
        // whenever the window reaches it.
        double lo = -1.0, hi = 1.0;
        double flo = equation(lo), fhi = equation(hi);
        while (flo > 0.0 && lo > -window_) {
            lo *= 2.0;
            flo = equation(lo);
        }
        while (fhi < 0.0 && hi < window_) {
            hi *= 2.0;
            fhi = equation(hi);
        }
        if (flo > 0.0 || fhi < 0.0)
            throw BracketFailureError("no sign change inside the implicit-root search window");
        // Bisection with secant acceleration.
        double fm = flo;
        for (int it = 0; it < 200; ++it) {
            double mid;
            if (std::abs(fhi - flo) > 1e-300) {
                mid = lo - flo * (hi - lo) / (fhi - flo); // secant proposal
                if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
            } else {
                mid = 0.5 * (lo + hi);
            }
            fm = equation(mid);
            if (std::abs(fm) < tol) return mid;
            if (fm < 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
                fhi = fm;
            }
            if (hi - lo < 1e-15 * std::max(1.0, std::abs(lo))) return 0.5 * (lo + hi);
        }
        throw BracketFailureError("implicit root iteration did not converge");
    }
};

// ---------------------------------------------------------------------------
// Elliptic block, linear potential.  Complex characteristics z2 = i x2 + x3,
// z3 = i x2 - x3 decouple the system into z'' + c (z')^2 = 0 with complex
// slopes.  Two construction modes:
//   * raw: the printed closed form with caller-supplied complex constants;
//   * fitted: constants derived from a real potential beta = A x2 + B x3 + C
//     and real initial data, which keeps the mapped-back trajectory real.
// The imaginary residue of the mapped-back point is always reported.
// ---------------------------------------------------------------------------
struct EllipticPoint {
    double x2 = 0.0;
    double x3 = 0.0;
    double imag_residue = 0.0;
};

class EllipticLinearClosedForm {
  public:
    // Raw mode: z2 = -2 Log(2/((A-iB)(Ds+E)))/(A-iB), z3 likewise with A+iB
    // and (Fs+G).
    static EllipticLinearClosedForm raw(cplx A, cplx B, cplx D, cplx E, cplx F, cplx G) {
        const cplx cm = (A - cplx(0, 1) * B) / 2.0;
        const cplx cp = (A + cplx(0, 1) * B) / 2.0;
        if (std::abs(cm) < 1e-12 || std::abs(cp) < 1e-12)
            throw InvalidParameterError("elliptic linear closed form requires A -+ iB != 0");
        EllipticLinearClosedForm cf;
        cf.raw_ = true;
        cf.c2_ = cm;
        cf.c3_ = cp;
        cf.D_ = D;
        cf.E_ = E;
        cf.F_ = F;
        cf.G_ = G;
        return cf;
    }

    // Fitted mode: characteristic slopes follow from the real potential and
    // the four complex constants from real initial data (x2, x3, v2, v3).
    static EllipticLinearClosedForm fit(double A, double B, double C, double x2, double x3,
                                        double v2, double v3) {
        EllipticLinearClosedForm cf;
        cf.raw_ = false;
        cf.A_ = A;
        cf.B_ = B;
        cf.C_ = C;
        cf.c2_ = cplx(B, -A) / 2.0;
        cf.c3_ = -cplx(B, A) / 2.0;
        cf.z20_ = cplx(x3, x2);
        cf.z30_ = cplx(-x3, x2);
        cf.dz20_ = cplx(v3, v2);
        cf.dz30_ = cplx(-v3, v2);
        return cf;
    }

    std::array<cplx, 2> eval_z(double s) const {
        if (raw_) {
            const cplx z2 = -detail::principal_log(2.0 / (2.0 * c2_ * (D_ * s + E_))) / c2_;
            const cplx z3 = -detail::principal_log(2.0 / (2.0 * c3_ * (F_ * s + G_))) / c3_;
            return {z2, z3};
        }
        return {detail::log_flow(z20_, dz20_, c2_, s), detail::log_flow(z30_, dz30_, c3_, s)};
    }

    std::array<cplx, 2> eval_z_dot(double s) const {
        if (raw_) {
            return {D_ / (c2_ * (D_ * s + E_)), F_ / (c3_ * (F_ * s + G_))};
        }
        return {detail::log_flow_dot(dz20_, c2_, s), detail::log_flow_dot(dz30_, c3_, s)};
    }

    // Mapped-back block point; throws NonRealResultError when the imaginary
    // residue exceeds max_imag.
    EllipticPoint eval(double s, double max_imag = 1e-6) const {
        const auto z = eval_z(s);
        const cplx x2 = (z[0] + z[1]) / cplx(0.0, 2.0);
        const cplx x3 = (z[0] - z[1]) / 2.0;
        EllipticPoint pt;
        pt.imag_residue = std::max(std::abs(x2.imag()), std::abs(x3.imag()));
        pt.x2 = x2.real();
        pt.x3 = x3.real();
        if (pt.imag_residue > max_imag)
            throw NonRealResultError("mapped-back elliptic point has imaginary residue " +
                                     std::to_string(pt.imag_residue));
        return pt;
    }

    std::array<double, 2> eval_x_dot(double s) const {
        const auto dz = eval_z_dot(s);
        const cplx v2 = (dz[0] + dz[1]) / cplx(0.0, 2.0);
        const cplx v3 = (dz[0] - dz[1]) / 2.0;
        return {v2.real(), v3.real()};
    }

    Potential matching_beta() const {
        if (raw_)
            throw InvalidParameterError("raw-mode elliptic closed form has no real potential");
        return Potential::linear(Block::Elliptic, A_, B_, C_);
    }

    cplx c2() const { return c2_; }
    cplx c3() const { return c3_; }

  private:
    EllipticLinearClosedForm() = default;

    bool raw_ = false;
    double A_ = 0, B_ = 0, C_ = 0;
    cplx c2_, c3_;
    cplx D_, E_, F_, G_;         // raw-mode data constants
    cplx z20_, z30_, dz20_, dz30_; // fitted-mode initial data
};

// ---------------------------------------------------------------------------
// Elliptic block, tanh-cubic family: z2(s) = slope*s + J and z3 defined by
// the implicit equation with complex-contour quadrature.  The underlying
// potential is genuinely complex; mapped-back trajectories from real initial
// data generally carry an O(1) imaginary residue, which is reported rather
// than hidden.
// ---------------------------------------------------------------------------
class EllipticTanhClosedForm {
  public:
    EllipticTanhClosedForm(double A, double B, double C, double D, double E, double F,
                           cplx slope, cplx J, cplx G, cplx H)
        : A_(A), B_(B), C_(C), D_(D), E_(E), F_(F), slope_(slope), J_(J), G_(G), H_(H) {}

    // Fit the data constants from real initial data; the z3 fit anchors the
    // incremental contour quadrature at z3(0).
    static EllipticTanhClosedForm fit(double A, double B, double C, double D, double E,
                                      double F, double x2, double x3, double v2, double v3,
                                      double qtol = 1e-12) {
        const cplx z30(-x3, x2);
        const cplx dz30(-v3, v2);
        EllipticTanhClosedForm cf(A, B, C, D, E, F, cplx(v3, v2), cplx(x3, x2), cplx(0, 0),
                                  cplx(0, 0));
        cf.G_ = -cf.integrand(z30) * dz30;
        cf.H_ = -cf.phi(z30, qtol);
        cf.anchor_ = z30;
        cf.have_anchor_ = true;
        return cf;
    }

    cplx integrand(cplx a) const {
        const cplx t = std::tanh(B_ * a + A_);
        const cplx val = std::exp(detail::tanh_poly(t, C_, D_, E_, F_));
        if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
            throw DomainError("elliptic implicit integrand hit a pole of tanh");
        return val;
    }

    std::array<cplx, 2> eval_z(double s, double tol = 1e-10) const {
        if (!(tol >= 1e-14 && tol <= 1e-4))
            throw ValidationError("implicit root tolerance must lie in [1e-14, 1e-4]");
        const cplx z2 = slope_ * s + J_;
        const cplx z3 = solve_z3(s, tol);
        return {z2, z3};
    }

    EllipticPoint eval(double s, double tol = 1e-10,
                       double max_imag = std::numeric_limits<double>::infinity()) const {
        const auto z = eval_z(s, tol);
        const cplx x2 = (z[0] + z[1]) / cplx(0.0, 2.0);
        const cplx x3 = (z[0] - z[1]) / 2.0;
        EllipticPoint pt;
        pt.imag_residue = std::max(std::abs(x2.imag()), std::abs(x3.imag()));
        pt.x2 = x2.real();
        pt.x3 = x3.real();
        if (pt.imag_residue > max_imag)
            throw NonRealResultError("mapped-back elliptic point has imaginary residue " +
                                     std::to_string(pt.imag_residue));
        return pt;
    }

    cplx phi(cplx z, double tol) const {
        return quad::integrate_segment([this](cplx a) { return integrand(a); }, cplx(0, 0), z,
                                       tol);
    }

    double A_, B_, C_, D_, E_, F_;
    cplx slope_, J_, G_, H_;

  private:
    cplx anchor_{0.0, 0.0};
    bool have_anchor_ = false;
    // Path-continued Newton solve of phi(z3) + G s + H = 0.
    cplx solve_z3(double s, double tol) const {
        const double qtol = tol / 10.0;
        // Start from the s = 0 root: exact for fitted constants, otherwise
        // located by Newton from the origin.
        cplx z = have_anchor_ ? anchor_ : seed_root(qtol, tol);
        cplx phi_z = phi(z, qtol);
        const int chunks = std::max(1, static_cast<int>(std::ceil(std::abs(s) / 0.25)));
        for (int c = 1; c <= chunks; ++c) {
            const double sc = s * static_cast<double>(c) / chunks;
            const cplx target = -(G_ * sc + H_);
            bool done = false;
            for (int it = 0; it < 60; ++it) {
                const cplx resid = phi_z - target;
                if (std::abs(resid) < tol) {
                    done = true;
                    break;
                }
                const cplx step = -resid / integrand(z);
                const cplx znew = z + step;
                phi_z += quad::integrate_segment([this](cplx a) { return integrand(a); }, z,
                                                 znew, qtol);
                z = znew;
            }
            if (!done && std::abs(phi_z - target) >= tol)
                throw BracketFailureError("elliptic implicit Newton iteration stalled");
        }
        return z;
    }

    // Root of phi(z) = -H used when the s = 0 anchor is not the origin.
    cplx seed_root(double qtol, double tol) const {
        cplx z(0, 0);
        cplx phi_z(0, 0);
        for (int it = 0; it < 80; ++it) {
            const cplx resid = phi_z + H_;
            if (std::abs(resid) < tol) return z;
            const cplx znew = z - resid / integrand(z);
            phi_z += quad::integrate_segment([this](cplx a) { return integrand(a); }, z, znew,
                                             qtol);
            z = znew;
        }
        throw BracketFailureError("elliptic implicit seed root did not converge");
    }
};

// ---------------------------------------------------------------------------
// Path comparison
// ---------------------------------------------------------------------------
struct PathComparison {
    double max_error = 0.0;
    double s_at_max = 0.0;
};

// Maximum position-space distance between a numeric path and a closed-form
// trajectory sampled at the same parameters.
inline PathComparison compare_paths(const GeodesicPath& numeric,
                                    const std::function<Vec4(double)>& closed) {
    PathComparison cmp;
    for (const auto& st : numeric.samples) {
        const Vec4 ref = closed(st.s);
        double d2 = 0.0;
        for (int i = 0; i < 4; ++i) d2 += (st.x[i] - ref[i]) * (st.x[i] - ref[i]);
        const double d = std::sqrt(d2);
        if (d > cmp.max_error) {
            cmp.max_error = d;
            cmp.s_at_max = st.s;
        }
    }
    return cmp;
}

} // namespace splitgeo
