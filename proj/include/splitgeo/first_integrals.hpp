#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "errors.hpp"
#include "geodesic.hpp"
#include "metric.hpp"
#include "potential.hpp"

namespace splitgeo {

using Vec2 = std::array<double, 2>;

// ---------------------------------------------------------------------------
// Base Hamiltonians H0 = e^alpha (p0^2 - p1^2) and e^beta (p2^2 + p3^2).
// ---------------------------------------------------------------------------
struct BaseHamiltonian {
    Potential pot;

    double operator()(const Vec2& x, const Vec2& p) const {
        const double q = pot.block() == Block::Hyperbolic ? p[0] * p[0] - p[1] * p[1]
                                                          : p[0] * p[0] + p[1] * p[1];
        return std::exp(pot(x[0], x[1])) * q;
    }
};

inline BaseHamiltonian base_hamiltonian(const Potential& pot) { return BaseHamiltonian{pot}; }

// ---------------------------------------------------------------------------
// Function basis for the coefficient fields: bivariate monomials up to a
// total degree, optionally augmented with powers of tanh(B (v - u) + A).
// ---------------------------------------------------------------------------
struct BasisSpec {
    int monomial_degree = 3;
    std::optional<std::array<double, 2>> tanh_wave; // (A, B)

    std::size_t size() const {
        const std::size_t m = static_cast<std::size_t>((monomial_degree + 1) *
                                                       (monomial_degree + 2) / 2);
        return m + (tanh_wave ? 3 : 0);
    }

    // Value or first partial of basis function `idx` at (u, v).
    double eval(std::size_t idx, double u, double v, int du = 0, int dv = 0) const {
        const std::size_t nmono = static_cast<std::size_t>((monomial_degree + 1) *
                                                           (monomial_degree + 2) / 2);
        if (idx < nmono) {
            const auto [i, j] = monomial_exponents(idx);
            return mono(u, i, du) * mono(v, j, dv);
        }
        const int k = static_cast<int>(idx - nmono) + 1; // tanh power
        const double A = (*tanh_wave)[0], B = (*tanh_wave)[1];
        const double t = std::tanh(B * (v - u) + A);
        if (du == 0 && dv == 0) return std::pow(t, k);
        const double d = k * std::pow(t, k - 1) * (1.0 - t * t) * B;
        return du == 1 ? -d : d;
    }

    std::string describe() const {
        std::string s = "monomials<=deg" + std::to_string(monomial_degree);
        if (tanh_wave)
            s += "+tanh(A=" + std::to_string((*tanh_wave)[0]) +
                 ",B=" + std::to_string((*tanh_wave)[1]) + ")^{1..3}";
        return s;
    }

    std::pair<int, int> monomial_exponents(std::size_t idx) const {
        std::size_t n = idx;
        for (int d = 0; d <= monomial_degree; ++d) {
            if (n < static_cast<std::size_t>(d + 1)) return {d - static_cast<int>(n), static_cast<int>(n)};
            n -= static_cast<std::size_t>(d + 1);
        }
        throw Error("basis index out of range");
    }

  private:
    static double mono(double x, int e, int d) {
        if (d == 0) return std::pow(x, e);
        return e == 0 ? 0.0 : e * std::pow(x, e - 1);
    }
};

// ---------------------------------------------------------------------------
// Homogeneous degree-n polynomial in the block momenta with coefficient
// fields expanded in a finite basis: H1 = sum_k f_k(x) p_a^k p_b^{n-k}.
// ---------------------------------------------------------------------------
class MomentumPolynomial {
  public:
    MomentumPolynomial(int degree, Block block, BasisSpec basis, Eigen::VectorXd coeffs)
        : degree_(degree), block_(block), basis_(std::move(basis)), coef_(std::move(coeffs)) {
        if (coef_.size() != static_cast<Eigen::Index>((degree_ + 1) * basis_.size()))
            throw InvalidParameterError("coefficient vector length must be (n+1) x basis size");
    }

    int degree() const { return degree_; }
    Block block() const { return block_; }
    const BasisSpec& basis() const { return basis_; }
    const Eigen::VectorXd& coefficients() const { return coef_; }

    // f_k(x) or its first partials.
    double coefficient_field(int k, double u, double v, int du = 0, int dv = 0) const {
        const std::size_t nb = basis_.size();
        double acc = 0.0;
        for (std::size_t m = 0; m < nb; ++m)
            acc += coef_[static_cast<Eigen::Index>(k * nb + m)] * basis_.eval(m, u, v, du, dv);
        return acc;
    }

    double evaluate(const Vec2& x, const Vec2& p) const {
        double acc = 0.0;
        for (int k = 0; k <= degree_; ++k)
            acc += coefficient_field(k, x[0], x[1]) * std::pow(p[0], k) *
                   std::pow(p[1], degree_ - k);
        return acc;
    }

    // Evaluate along a 4D phase-space sample, picking the block coordinates.
    double evaluate_state(const PhaseState& st) const {
        const int lo = block_ == Block::Hyperbolic ? 0 : 2;
        return evaluate({st.x[lo], st.x[lo + 1]}, {st.p[lo], st.p[lo + 1]});
    }

    MomentumPolynomial perturbed(int k, std::size_t m, double delta) const {
        Eigen::VectorXd c = coef_;
        c[static_cast<Eigen::Index>(k * basis_.size() + m)] += delta;
        return MomentumPolynomial(degree_, block_, basis_, std::move(c));
    }

  private:
    int degree_;
    Block block_;
    BasisSpec basis_;
    Eigen::VectorXd coef_;
};

// ---------------------------------------------------------------------------
// Canonical Poisson bracket {H0, H1} with H0 = e^pot * (p_a^2 -+ p_b^2).
// The result is homogeneous of degree n+1 with coefficient fields linear in
// the f_k and their first derivatives; that linearity is what the finder's
// matrix assembly discretizes.  Sign convention:
//   {f, g} = sum_i df/dp_i dg/dx_i - df/dx_i dg/dp_i.
// ---------------------------------------------------------------------------
namespace detail {

// Degree-(n+1) bracket coefficient b_j at (u, v) for coefficient fields
// provided by `f(k, u, v, du, dv)` (zero outside 0 <= k <= n).
template <typename Fields>
double bracket_coefficient(const Potential& pot, const Fields& f, int n, int j, double u,
                           double v) {
    auto fk = [&](int k, int du, int dv) -> double {
        if (k < 0 || k > n) return 0.0;
        return f(k, u, v, du, dv);
    };
    const double e = std::exp(pot(u, v));
    const double gu = pot(u, v, 1, 0);
    const double gv = pot(u, v, 0, 1);
    if (pot.block() == Block::Hyperbolic) {
        return e * (2.0 * fk(j - 1, 1, 0) - 2.0 * fk(j, 0, 1) -
                    gu * ((j - 1) * fk(j - 1, 0, 0) - (j + 1) * fk(j + 1, 0, 0)) -
                    gv * ((n - j + 2) * fk(j - 2, 0, 0) - (n - j) * fk(j, 0, 0)));
    }
    return e * (2.0 * fk(j - 1, 1, 0) + 2.0 * fk(j, 0, 1) -
                gu * ((j - 1) * fk(j - 1, 0, 0) + (j + 1) * fk(j + 1, 0, 0)) -
                gv * ((n - j + 2) * fk(j - 2, 0, 0) + (n - j) * fk(j, 0, 0)));
}

} // namespace detail

// The bracket of a base Hamiltonian with a momentum polynomial, evaluable
// pointwise (its coefficient fields need not live in any finite basis).
class BracketPolynomial {
  public:
    BracketPolynomial(Potential pot, MomentumPolynomial h1)
        : pot_(std::move(pot)), h1_(std::move(h1)) {
        if (pot_.block() != h1_.block())
            throw BlockMismatchError("poisson_bracket requires both arguments on one block");
    }

    int degree() const { return h1_.degree() + 1; }
    Block block() const { return pot_.block(); }

    // Coefficient of p_a^j p_b^{degree()-j}.
    double coefficient(int j, double u, double v) const {
        return detail::bracket_coefficient(
            pot_,
            [this](int k, double uu, double vv, int du, int dv) {
                return h1_.coefficient_field(k, uu, vv, du, dv);
            },
            h1_.degree(), j, u, v);
    }

    double evaluate(const Vec2& x, const Vec2& p) const {
        const int m = degree();
        double acc = 0.0;
        for (int j = 0; j <= m; ++j)
            acc += coefficient(j, x[0], x[1]) * std::pow(p[0], j) * std::pow(p[1], m - j);
        return acc;
    }

  private:
    Potential pot_;
    MomentumPolynomial h1_;
};

inline BracketPolynomial poisson_bracket(const BaseHamiltonian& h0,
                                         const MomentumPolynomial& h1) {
    return BracketPolynomial(h0.pot, h1);
}

inline BracketPolynomial poisson_bracket(const Potential& pot, const MomentumPolynomial& h1) {
    return BracketPolynomial(pot, h1);
}

// Bracket coefficient for coefficient fields supplied as a callable
// f(k, u, v, du, dv); lets callers bracket polynomials whose fields live
// outside any finite basis (e.g. H0 itself).
inline double bracket_coefficient_of_fields(
    const Potential& pot, int degree,
    const std::function<double(int, double, double, int, int)>& fields, int j, double u,
    double v) {
    return detail::bracket_coefficient(pot, fields, degree, j, u, v);
}

// ---------------------------------------------------------------------------
// Sample grids: jittered tensor products over a rectangle.
// ---------------------------------------------------------------------------
struct GridSpec {
    double u0 = -1.0, u1 = 1.0, v0 = -1.0, v1 = 1.0;
    int nu = 7, nv = 7;
    double jitter = 0.01; // fraction of the cell spacing
    std::uint64_t seed = 42;

    std::vector<Vec2> points() const {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        const double du = (u1 - u0) / nu;
        const double dv = (v1 - v0) / nv;
        std::vector<Vec2> pts;
        pts.reserve(static_cast<std::size_t>(nu) * nv);
        for (int i = 0; i < nu; ++i)
            for (int j = 0; j < nv; ++j)
                pts.push_back({u0 + (i + 0.5) * du + jitter * du * unit(rng),
                               v0 + (j + 0.5) * dv + jitter * dv * unit(rng)});
        return pts;
    }

    // A second grid, statistically independent of this one, used to
    // re-verify finder candidates.
    GridSpec independent() const {
        GridSpec g = *this;
        g.seed = seed ^ 0x9e3779b97f4a7c15ull;
        g.nu = nu + 2;
        g.nv = nv + 2;
        return g;
    }
};

// ---------------------------------------------------------------------------
// First-integral finder: discretizes {H0, H1} = 0 as a linear system on the
// coefficient vector and extracts the SVD nullspace.
// ---------------------------------------------------------------------------
struct BracketResidualReport {
    MomentumPolynomial candidate;
    std::vector<Vec2> grid;            // independent verification grid
    double max_residual = 0.0;         // max |b_j| over that grid
    int nullspace_dimension = 0;
    std::vector<double> singular_values;
};

struct FinderResult {
    std::vector<BracketResidualReport> reports;
    std::vector<double> singular_values;
    int nullspace_dimension = 0;
    double scale = 0.0; // largest singular value of the assembled map
};

// Max |bracket coefficient| of a candidate over a set of points.
inline double bracket_residual(const Potential& pot, const MomentumPolynomial& cand,
                               const std::vector<Vec2>& pts) {
    const BracketPolynomial br(pot, cand);
    double worst = 0.0;
    for (const auto& pt : pts)
        for (int j = 0; j <= br.degree(); ++j)
            worst = std::max(worst, std::abs(br.coefficient(j, pt[0], pt[1])));
    return worst;
}

inline FinderResult find_first_integrals(const Potential& pot, int degree,
                                         const BasisSpec& basis, const GridSpec& grid,
                                         double svd_tol = 1e-10) {
    const std::size_t nb = basis.size();
    const std::size_t ncols = static_cast<std::size_t>(degree + 1) * nb;
    const auto pts = grid.points();
    const std::size_t nrows = pts.size() * static_cast<std::size_t>(degree + 2);
    if (nrows < ncols)
        throw GridTooSmallError("grid size x (n+2) must reach the coefficient vector length");
    for (const auto& pt : pts)
        if (!pot.in_domain(pt[0], pt[1]))
            throw OutOfDomainError("finder grid point outside potential domain");

    // Rows: bracket coefficient b_j at each grid point; columns: one basis
    // function phi placed in one coefficient slot f_k.
    Eigen::MatrixXd A(nrows, ncols);
    std::size_t row = 0;
    for (const auto& pt : pts) {
        for (int j = 0; j <= degree + 1; ++j, ++row) {
            for (int k = 0; k <= degree; ++k) {
                for (std::size_t m = 0; m < nb; ++m) {
                    auto unit_field = [&](int kk, double uu, double vv, int du, int dv) {
                        return kk == k ? basis.eval(m, uu, vv, du, dv) : 0.0;
                    };
                    A(row, static_cast<Eigen::Index>(k * nb + m)) =
                        detail::bracket_coefficient(pot, unit_field, degree, j, pt[0], pt[1]);
                }
            }
        }
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    FinderResult out;
    out.singular_values.assign(sv.data(), sv.data() + sv.size());
    out.scale = sv.size() > 0 ? sv[0] : 0.0;
    if (!(out.scale > 0.0)) throw DegenerateBasisError("assembled bracket map has rank zero");

    const auto verify_grid_spec = grid.independent();
    const auto verify_pts = verify_grid_spec.points();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > svd_tol * out.scale) continue;
        ++out.nullspace_dimension;
        MomentumPolynomial cand(degree, pot.block(), basis, svd.matrixV().col(i));
        BracketResidualReport rep{cand, verify_pts, bracket_residual(pot, cand, verify_pts),
                                  0, out.singular_values};
        out.reports.push_back(std::move(rep));
    }
    for (auto& rep : out.reports) rep.nullspace_dimension = out.nullspace_dimension;
    return out;
}

// ---------------------------------------------------------------------------
// Conservation along a computed geodesic path.
// ---------------------------------------------------------------------------
inline double verify_conservation(const MomentumPolynomial& candidate,
                                  const GeodesicPath& path) {
    if (path.samples.empty()) throw InvalidParameterError("empty path");
    const double h0 = candidate.evaluate_state(path.samples.front());
    double drift = 0.0;
    for (const auto& st : path.samples)
        drift = std::max(drift, std::abs(candidate.evaluate_state(st) - h0));
    return drift / std::max(1.0, std::abs(h0));
}

inline double verify_conservation(const MomentumPolynomial& candidate, const GeodesicPath& path,
                                  const SplitMetric& m) {
    const Potential& pot = candidate.block() == Block::Hyperbolic ? m.alpha() : m.beta();
    if (pot.block() != candidate.block())
        throw BlockMismatchError("candidate block does not match the metric");
    return verify_conservation(candidate, path);
}

} // namespace splitgeo
