#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "errors.hpp"
#include "metric.hpp"

namespace splitgeo {

// Gate tolerance: J and Lambda count as zero below this.
inline constexpr double kGateTol = 1e-14;

struct CouplingConstants {
    double k1 = 0.0;
    double k2 = 0.0;
};

// k1 = 2 (kJ/c^4 + Lambda), k2 = (kJ/c^4 - Lambda).  The text leaves k2
// without the leading 2; `symmetric_k2` makes the factor-2 variant testable.
inline CouplingConstants coupling_constants(double k, double J, double lambda, double c,
                                            bool symmetric_k2 = false) {
    if (!(c > 0.0)) throw InvalidParameterError("speed of light must be positive");
    const double source = k * J / (c * c * c * c);
    return {2.0 * (source + lambda), (symmetric_k2 ? 2.0 : 1.0) * (source - lambda)};
}

// Non-negative eigenvalue parameters l, m from the field invariants:
// l^2 = (J - I1)/2, m^2 = (J + I1)/2.
inline std::pair<double, double> faraday_eigen(double J, double I1) {
    const double l2 = (J - I1) / 2.0;
    const double m2 = (J + I1) / 2.0;
    if (l2 < 0.0 || m2 < 0.0)
        throw NonRealEigenvalueError("faraday eigenvalues require J - I1 >= 0 and J + I1 >= 0");
    return {std::sqrt(l2), std::sqrt(m2)};
}

// Field data with derived quantities.  J and I1 are restored from (l, m)
// through J = l^2 + m^2, I1 = m^2 - l^2 so those identities hold exactly as
// stored.
struct MaxwellData {
    double k = 1.0;
    double c = 1.0;
    double lambda = 0.0;
    double J = 0.0;
    double I1 = 0.0;
    double l = 0.0;
    double m = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;

    static MaxwellData make(double k, double c, double lambda, double J, double I1,
                            bool symmetric_k2 = false) {
        MaxwellData d;
        d.k = k;
        d.c = c;
        d.lambda = lambda;
        std::tie(d.l, d.m) = faraday_eigen(J, I1);
        d.J = d.l * d.l + d.m * d.m;
        d.I1 = d.m * d.m - d.l * d.l;
        const auto cc = coupling_constants(k, d.J, lambda, c, symmetric_k2);
        d.k1 = cc.k1;
        d.k2 = cc.k2;
        return d;
    }
};

struct FaradayComponents {
    double F01 = 0.0;
    double F23 = 0.0;
};

// F = -2l e^alpha dx0 ^ dx1 + 2m e^beta dx2 ^ dx3; all other components zero.
inline FaradayComponents faraday_form(const MaxwellData& d, const SplitMetric& metric,
                                      const Vec4& x) {
    const double ea = std::exp(metric.alpha()(x[0], x[1]));
    const double eb = std::exp(metric.beta()(x[2], x[3]));
    return {-2.0 * d.l * ea, 2.0 * d.m * eb};
}

struct GateVerdict {
    bool integrable = false;
    std::string reason;
};

// The geodesic flow admits the catalogued integrable potentials only when
// both coupling constants vanish, i.e. J = 0 and Lambda = 0; with l, m real
// this forces l = m = 0 and the Faraday tensor vanishes identically.
inline GateVerdict integrability_gate(double J, double lambda) {
    const bool j_zero = std::abs(J) <= kGateTol;
    const bool l_zero = std::abs(lambda) <= kGateTol;
    if (j_zero && l_zero) return {true, "k1=k2=0; F vanishes"};
    std::string reason;
    if (!j_zero) reason = "J != 0";
    if (!l_zero) reason += (reason.empty() ? "" : "; ") + std::string("Lambda != 0");
    return {false, reason};
}

} // namespace splitgeo
