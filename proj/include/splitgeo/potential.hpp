#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "domain.hpp"
#include "errors.hpp"

namespace splitgeo {

// The two 2D factors of the split metric: (x0, x1) with signature (+,-)
// and (x2, x3) with definite signature.
enum class Block { Hyperbolic, Elliptic };

enum class PotentialKind {
    Constant,
    Linear,
    TanhCubic,
    LiouvilleAnsatz,
    HyperbolicLiouvilleBuiltin,
    EllipticLiouvilleBuiltin,
    UserCallable,
};

// Real form taken by the elliptic tanh-cubic family.  The complex-analytic
// family has argument x3 - i*x2; RealWave replaces it by the real
// travelling-wave argument x3 - x2, ComplexRe/ComplexIm project the
// complex-analytic value onto its real or imaginary part.
enum class EllipticTanhForm { RealWave, ComplexRe, ComplexIm };

// One-dimensional profile with two derivatives, used by the Liouville ansatz.
struct Curve {
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
};

// Scalar field with exact partial derivatives.  Called as f(u, v, du, dv);
// seeds of the Liouville ansatz must support total order <= 3, user
// potentials total order <= 2.
using ScalarField = std::function<double(double, double, int, int)>;

// Floor below which a logarithm argument is treated as a domain failure
// instead of silently producing -inf.
inline constexpr double kLogFloor = 1e-300;

namespace detail {

inline void check_deriv_order(int du, int dv) {
    const bool ok = du >= 0 && dv >= 0 && du + dv <= 2 && !(du == 2 && dv == 1) &&
                    !(du == 1 && dv == 2);
    if (!ok)
        throw UnsupportedDerivativeError("derivative order (" + std::to_string(du) + "," +
                                         std::to_string(dv) + ") is not supported");
}

// Cubic-in-tanh profile P(t) = F t^3 + E t^2 + D t + C and its derivatives.
template <typename T>
inline T tanh_poly(T t, double C, double D, double E, double F) {
    return ((F * t + E) * t + D) * t + C;
}
template <typename T>
inline T tanh_poly_d1(T t, double D, double E, double F) {
    return (3.0 * F * t + 2.0 * E) * t + D;
}
template <typename T>
inline T tanh_poly_d2(T t, double E, double F) {
    return 6.0 * F * t + 2.0 * E;
}

} // namespace detail

// An immutable conformal-factor field alpha(x0, x1) or beta(x2, x3) with
// exact partial derivatives up to total order 2.  Evaluation is pure and
// safe to call concurrently.
class Potential {
  public:
    // eval_potential: value or exact partial derivative at a block point.
    double operator()(double u, double v, int du = 0, int dv = 0) const {
        detail::check_deriv_order(du, dv);
        if (!impl_->dom.contains(u, v))
            throw OutOfDomainError("point (" + std::to_string(u) + ", " + std::to_string(v) +
                                   ") outside potential domain");
        return eval(u, v, du, dv);
    }

    Block block() const { return impl_->block; }
    PotentialKind kind() const { return impl_->kind; }
    const std::vector<double>& params() const { return impl_->par; }
    const Domain& domain_hint() const { return impl_->dom; }
    bool in_domain(double u, double v) const { return impl_->dom.contains(u, v); }
    EllipticTanhForm elliptic_form() const { return impl_->form; }

    static Potential constant(Block b, double c) {
        return Potential({PotentialKind::Constant, b, {c}, Domain::all()});
    }

    // A u + B v + C on the block coordinates.
    static Potential linear(Block b, double A, double B, double C) {
        return Potential({PotentialKind::Linear, b, {A, B, C}, Domain::all()});
    }

    // F t^3 + E t^2 + D t + C with t = tanh(B w + A).  Hyperbolic block:
    // w = x1 - x0.  Elliptic block: w per `form` (see EllipticTanhForm).
    static Potential tanh_cubic(Block b, double A, double B, double C, double D, double E,
                                double F, EllipticTanhForm form = EllipticTanhForm::RealWave) {
        for (double p : {A, B, C, D, E, F})
            if (!std::isfinite(p))
                throw InvalidParameterError("tanh-cubic parameters must be finite");
        Impl impl{PotentialKind::TanhCubic, b, {A, B, C, D, E, F}, Domain::all()};
        impl.form = form;
        return Potential(std::move(impl));
    }

    // ln(h(seed) * (seed_u^2 -+ seed_v^2)): minus for the hyperbolic block
    // (seed a wave-equation solution), plus for the elliptic one (seed
    // harmonic).  The seed must provide partials to total order 3.
    static Potential liouville_ansatz(Block b, Curve h, ScalarField seed) {
        Impl impl{PotentialKind::LiouvilleAnsatz, b, {}, Domain::all()};
        impl.h = std::move(h);
        impl.field = std::move(seed);
        return Potential(std::move(impl));
    }

    // Exact Liouville-equation solutions used to exercise lambda != 0:
    // hyperbolic  alpha = -ln(lambda x1^2)          on x1 != 0,
    // elliptic    beta  = ln(4 / (lambda (1-r^2)^2)) on the open unit disk.
    static Potential liouville_builtin(Block b, double lambda) {
        if (!(lambda > 0.0))
            throw InvalidLambdaError("liouville_builtin requires lambda > 0");
        if (b == Block::Hyperbolic)
            return Potential({PotentialKind::HyperbolicLiouvilleBuiltin, b, {lambda},
                              Domain::nonzero_axis(1)});
        return Potential({PotentialKind::EllipticLiouvilleBuiltin, b, {lambda},
                          Domain::open_disk(1.0)});
    }

    // User potentials supply their own derivative callables (total order <= 2).
    static Potential user(Block b, ScalarField f, Domain hint = Domain::all()) {
        Impl impl{PotentialKind::UserCallable, b, {}, hint};
        impl.field = std::move(f);
        return Potential(std::move(impl));
    }

  private:
    struct Impl {
        PotentialKind kind;
        Block block;
        std::vector<double> par;
        Domain dom;
        EllipticTanhForm form = EllipticTanhForm::RealWave;
        Curve h;
        ScalarField field;
    };

    explicit Potential(Impl impl) : impl_(std::make_shared<const Impl>(std::move(impl))) {}

    double eval(double u, double v, int du, int dv) const {
        const auto& par = impl_->par;
        switch (impl_->kind) {
            case PotentialKind::Constant:
                return (du == 0 && dv == 0) ? par[0] : 0.0;

            case PotentialKind::Linear: {
                if (du == 0 && dv == 0) return par[0] * u + par[1] * v + par[2];
                if (du == 1 && dv == 0) return par[0];
                if (du == 0 && dv == 1) return par[1];
                return 0.0;
            }

            case PotentialKind::TanhCubic: {
                if (impl_->block == Block::Elliptic &&
                    impl_->form != EllipticTanhForm::RealWave)
                    return eval_tanh_complex(u, v, du, dv);
                return eval_tanh_real(u, v, du, dv);
            }

            case PotentialKind::LiouvilleAnsatz:
                return eval_ansatz(u, v, du, dv);

            case PotentialKind::HyperbolicLiouvilleBuiltin: {
                // alpha = -ln(lambda) - 2 ln|v|
                if (du == 0 && dv == 0) return -std::log(par[0] * v * v);
                if (du == 0 && dv == 1) return -2.0 / v;
                if (du == 0 && dv == 2) return 2.0 / (v * v);
                return 0.0;
            }

            case PotentialKind::EllipticLiouvilleBuiltin: {
                // beta = ln(4/lambda) - 2 ln w, w = 1 - u^2 - v^2
                const double w = 1.0 - u * u - v * v;
                if (du == 0 && dv == 0) return std::log(4.0 / par[0]) - 2.0 * std::log(w);
                if (du == 1 && dv == 0) return 4.0 * u / w;
                if (du == 0 && dv == 1) return 4.0 * v / w;
                if (du == 2 && dv == 0) return 4.0 / w + 8.0 * u * u / (w * w);
                if (du == 0 && dv == 2) return 4.0 / w + 8.0 * v * v / (w * w);
                return 8.0 * u * v / (w * w);
            }

            case PotentialKind::UserCallable:
                return impl_->field(u, v, du, dv);
        }
        throw Error("unreachable potential kind");
    }

    // Real travelling-wave tanh-cubic: w = v - u on both blocks
    // (x1 - x0 hyperbolic, x3 - x2 elliptic real form).
    double eval_tanh_real(double u, double v, int du, int dv) const {
        const auto& p = impl_->par;
        const double A = p[0], B = p[1], C = p[2], D = p[3], E = p[4], F = p[5];
        const double t = std::tanh(B * (v - u) + A);
        if (du == 0 && dv == 0) return detail::tanh_poly(t, C, D, E, F);
        const double sech2 = 1.0 - t * t;
        const double wu = -1.0, wv = 1.0;
        if (du + dv == 1) {
            const double d1 = detail::tanh_poly_d1(t, D, E, F) * sech2 * B;
            return d1 * (du == 1 ? wu : wv);
        }
        // theta is affine in (u, v), so second derivatives carry only the
        // chain-rule term in theta.
        const double d2 = (detail::tanh_poly_d2(t, E, F) * sech2 -
                           2.0 * t * detail::tanh_poly_d1(t, D, E, F)) *
                          sech2 * B * B;
        const double wi = (du >= 1) ? wu : wv;
        const double wj = (du == 2) ? wu : wv;
        return d2 * wi * wj;
    }

    // Complex-characteristic form: G(theta) with theta = B (x3 - i x2) + A,
    // projected onto Re or Im.  G is holomorphic, so partials follow from
    // dtheta/du = -iB, dtheta/dv = B.
    double eval_tanh_complex(double u, double v, int du, int dv) const {
        using cplx = std::complex<double>;
        const auto& p = impl_->par;
        const double A = p[0], B = p[1], C = p[2], D = p[3], E = p[4], F = p[5];
        const cplx theta = cplx(B * v + A, -B * u);
        const cplx t = std::tanh(theta);
        const bool re = impl_->form == EllipticTanhForm::ComplexRe;
        auto proj = [re](cplx z) { return re ? z.real() : z.imag(); };

        cplx g;
        if (du == 0 && dv == 0) {
            g = detail::tanh_poly(t, C, D, E, F);
        } else {
            const cplx sech2 = 1.0 - t * t;
            if (du + dv == 1) {
                const cplx g1 = detail::tanh_poly_d1(t, D, E, F) * sech2 * B;
                g = g1 * (du == 1 ? cplx(0.0, -1.0) : cplx(1.0, 0.0));
            } else {
                const cplx g2 = (detail::tanh_poly_d2(t, E, F) * sech2 -
                                 2.0 * t * detail::tanh_poly_d1(t, D, E, F)) *
                                sech2 * (B * B);
                if (du == 2)
                    g = -g2; // (-i)^2
                else if (dv == 2)
                    g = g2;
                else
                    g = g2 * cplx(0.0, -1.0);
            }
        }
        const double out = proj(g);
        if (!std::isfinite(out))
            throw DomainError("complex tanh-cubic evaluated at a pole of tanh");
        return out;
    }

    double eval_ansatz(double u, double v, int du, int dv) const {
        const bool hyp = impl_->block == Block::Hyperbolic;
        const auto& s = impl_->field;
        const double su = s(u, v, 1, 0), sv = s(u, v, 0, 1);
        const double suu = s(u, v, 2, 0), suv = s(u, v, 1, 1), svv = s(u, v, 0, 2);
        const double sgn = hyp ? -1.0 : 1.0;
        const double s0 = s(u, v, 0, 0);
        const double hv = impl_->h.value(s0);
        const double Q = su * su + sgn * sv * sv;
        const double P = hv * Q;
        if (P < kLogFloor)
            throw DomainError("Liouville ansatz log argument below 1e-300");
        if (du == 0 && dv == 0) return std::log(P);

        const double h1 = impl_->h.d1(s0);
        // dQ/du, dQ/dv
        const double Qu = 2.0 * (su * suu + sgn * sv * suv);
        const double Qv = 2.0 * (su * suv + sgn * sv * svv);
        const double Pu = h1 * su * Q + hv * Qu;
        const double Pv = h1 * sv * Q + hv * Qv;
        if (du == 1 && dv == 0) return Pu / P;
        if (du == 0 && dv == 1) return Pv / P;

        const double h2 = impl_->h.d2(s0);
        const double suuu = s(u, v, 3, 0), suuv = s(u, v, 2, 1);
        const double suvv = s(u, v, 1, 2), svvv = s(u, v, 0, 3);
        auto second = [&](double si, double sj, double sij, double Qi, double Qj,
                          double Qij) {
            const double Pij = h2 * si * sj * Q + h1 * sij * Q + h1 * si * Qj +
                               h1 * sj * Qi + hv * Qij;
            const double Pi = h1 * si * Q + hv * Qi;
            const double Pj = h1 * sj * Q + hv * Qj;
            return Pij / P - Pi * Pj / (P * P);
        };
        if (du == 2) {
            const double Quu = 2.0 * (suu * suu + su * suuu + sgn * (suv * suv + sv * suuv));
            return second(su, su, suu, Qu, Qu, Quu);
        }
        if (dv == 2) {
            const double Qvv = 2.0 * (suv * suv + su * suvv + sgn * (svv * svv + sv * svvv));
            return second(sv, sv, svv, Qv, Qv, Qvv);
        }
        const double Quv = 2.0 * (suv * suu + su * suuv + sgn * (svv * suv + sv * suvv));
        return second(su, sv, suv, Qu, Qv, Quv);
    }

    std::shared_ptr<const Impl> impl_;
};

} // namespace splitgeo
