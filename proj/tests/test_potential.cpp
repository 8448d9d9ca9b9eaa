#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "splitgeo/potential.hpp"

using namespace splitgeo;

namespace {

double fd_of_potential(const Potential& p, double u, double v, int axis, double h = 1e-5) {
    return oracles::fd1([&](double a, double b) { return p(a, b); }, u, v, axis, h);
}

} // namespace

TEST_CASE("linear potential evaluates values and exact gradients") {
    const auto p = Potential::linear(Block::Hyperbolic, 1.0, 2.0, 0.0);
    CHECK(p(1.0, 1.0) == 3.0);
    CHECK(p(0.3, -0.8, 1, 0) == 1.0);
    CHECK(p(-2.0, 5.0, 0, 1) == 2.0);
    CHECK(p(0.0, 0.0, 2, 0) == 0.0);
    CHECK(p(0.0, 0.0, 1, 1) == 0.0);
}

TEST_CASE("tanh-cubic with only C set is a constant field") {
    const auto p = Potential::tanh_cubic(Block::Hyperbolic, 0, 1, 2.5, 0, 0, 0);
    CHECK(p(0.4, 1.7) == 2.5);
    CHECK(p(0.4, 1.7, 1, 0) == 0.0);
    CHECK(p(0.4, 1.7, 0, 1) == 0.0);
}

TEST_CASE("hyperbolic tanh-cubic at the origin matches the chain rule") {
    // t = tanh(1*(x1-x0)+0), value D*t with D=1
    const auto p = Potential::tanh_cubic(Block::Hyperbolic, 0, 1, 0, 1, 0, 0);
    CHECK(p(0.0, 0.0) == 0.0);
    CHECK(p(0.0, 0.0, 0, 1) == Catch::Approx(1.0).epsilon(1e-14)); // sech^2(0) * B
    CHECK(p(0.0, 0.0, 1, 0) == Catch::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("generic tanh-cubic matches an independent 2-jet evaluation") {
    const double A = 1, B = 2, C = 3, D = 4, E = 5, F = 6;
    const auto p = Potential::tanh_cubic(Block::Hyperbolic, A, B, C, D, E, F);
    const double u = 0.3, v = 0.7;
    using oracles::Jet2;
    const Jet2 w = Jet2::var_v(v) - Jet2::var_u(u);
    const Jet2 t = oracles::tanh(Jet2::c(B) * w + Jet2::c(A));
    const Jet2 val = Jet2::c(F) * t * t * t + Jet2::c(E) * t * t + Jet2::c(D) * t + Jet2::c(C);
    for (auto [du, dv] : {std::pair{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}) {
        CAPTURE(du, dv);
        CHECK(p(u, v, du, dv) == Catch::Approx(oracles::pick(val, du, dv)).epsilon(1e-13));
    }
}

TEST_CASE("elliptic tanh-cubic real-wave form uses the x3 - x2 argument") {
    const auto p = Potential::tanh_cubic(Block::Elliptic, 0.5, 1.5, 0, 1, 0, 0);
    const double u = 0.2, v = -0.4;
    CHECK(p(u, v) == Catch::Approx(std::tanh(1.5 * (v - u) + 0.5)).epsilon(1e-14));
}

TEST_CASE("elliptic complex projections are harmonic") {
    for (auto form : {EllipticTanhForm::ComplexRe, EllipticTanhForm::ComplexIm}) {
        const auto p = Potential::tanh_cubic(Block::Elliptic, 1, 1, 1, 1, 1, 1, form);
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> coord(-0.4, 0.4);
        for (int i = 0; i < 50; ++i) {
            const double u = coord(rng), v = coord(rng);
            const double lap = p(u, v, 2, 0) + p(u, v, 0, 2);
            CHECK(std::abs(lap) < 1e-12 * (1.0 + std::abs(p(u, v, 2, 0))));
        }
    }
}

TEST_CASE("built-in Liouville solutions evaluate their closed forms") {
    const auto a = Potential::liouville_builtin(Block::Hyperbolic, 1.0);
    CHECK(a(0.0, 1.0) == Catch::Approx(0.0).margin(1e-15)); // -ln(1*1)
    CHECK(a(0.0, 2.0) == Catch::Approx(-std::log(4.0)).epsilon(1e-14));
    CHECK(a(5.0, 1.0) == a(0.0, 1.0)); // independent of x0

    const auto b = Potential::liouville_builtin(Block::Elliptic, 1.0);
    CHECK(b(0.0, 0.0) == Catch::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK_THROWS_AS(b(1.0, 0.0), OutOfDomainError); // disk boundary
    CHECK_THROWS_AS(a(0.3, 0.0), OutOfDomainError); // x1 = 0 line

    CHECK_THROWS_AS(Potential::liouville_builtin(Block::Hyperbolic, 0.0), InvalidLambdaError);
    CHECK_THROWS_AS(Potential::liouville_builtin(Block::Elliptic, -2.0), InvalidLambdaError);
}

TEST_CASE("analytic first derivatives match central differences at random points") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> unit(-0.45, 0.45);

    const Potential fields[] = {
        Potential::constant(Block::Hyperbolic, 1.3),
        Potential::linear(Block::Hyperbolic, 0.7, -1.1, 0.4),
        Potential::tanh_cubic(Block::Hyperbolic, 1, 2, 3, 4, 5, 6),
        Potential::tanh_cubic(Block::Elliptic, 1, 1, 0.5, -1, 2, 0.3),
        Potential::tanh_cubic(Block::Elliptic, 1, 1, 1, 1, 1, 1, EllipticTanhForm::ComplexRe),
        Potential::tanh_cubic(Block::Elliptic, 1, 1, 1, 1, 1, 1, EllipticTanhForm::ComplexIm),
        Potential::liouville_builtin(Block::Hyperbolic, 1.5),
        Potential::liouville_builtin(Block::Elliptic, 0.8),
    };
    for (const auto& p : fields) {
        for (int i = 0; i < 100; ++i) {
            double u = unit(rng), v = unit(rng);
            if (p.kind() == PotentialKind::HyperbolicLiouvilleBuiltin) v += 1.0;
            CAPTURE(static_cast<int>(p.kind()), u, v);
            for (int axis : {0, 1}) {
                const double exact = p(u, v, axis == 0 ? 1 : 0, axis == 0 ? 0 : 1);
                const double approx = fd_of_potential(p, u, v, axis);
                CHECK(std::abs(exact - approx) <= 1e-6 * std::max(1.0, std::abs(exact)));
            }
        }
    }
}

TEST_CASE("mixed partials commute against a finite-difference cross-check") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unit(-0.4, 0.4);
    const Potential fields[] = {
        Potential::tanh_cubic(Block::Hyperbolic, 1, 2, 3, 4, 5, 6),
        Potential::tanh_cubic(Block::Elliptic, 1, 1, 1, 1, 1, 1, EllipticTanhForm::ComplexIm),
        Potential::liouville_builtin(Block::Elliptic, 1.0),
    };
    for (const auto& p : fields) {
        for (int i = 0; i < 40; ++i) {
            const double u = unit(rng), v = unit(rng);
            // d/dv of the exact (1,0) field
            const double fd = oracles::fd1([&](double a, double b) { return p(a, b, 1, 0); },
                                           u, v, 1);
            const double exact = p(u, v, 1, 1);
            CHECK(std::abs(exact - fd) <= 1e-6 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("liouville ansatz with trivial profile and affine seed vanishes") {
    const Curve one{[](double) { return 1.0; }, [](double) { return 0.0; },
                    [](double) { return 0.0; }};
    // hyperbolic: seed v(x0, x1) = x0 solves the wave equation
    const auto alpha = Potential::liouville_ansatz(
        Block::Hyperbolic, one, [](double u, double, int du, int dv) {
            if (du == 0 && dv == 0) return u;
            if (du == 1 && dv == 0) return 1.0;
            return 0.0;
        });
    // elliptic: seed u(x2, x3) = x2 is harmonic
    const auto beta = Potential::liouville_ansatz(
        Block::Elliptic, one, [](double u, double, int du, int dv) {
            if (du == 0 && dv == 0) return u;
            if (du == 1 && dv == 0) return 1.0;
            return 0.0;
        });
    for (double u : {-0.7, 0.0, 1.3})
        for (double v : {-0.2, 0.9}) {
            for (auto [du, dv] : {std::pair{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}) {
                CHECK(alpha(u, v, du, dv) == Catch::Approx(0.0).margin(1e-14));
                CHECK(beta(u, v, du, dv) == Catch::Approx(0.0).margin(1e-14));
            }
        }
}

TEST_CASE("liouville ansatz rejects light-like seeds") {
    // v = x0 + x1 makes v_u^2 - v_v^2 vanish identically.
    const Curve sq{[](double x) { return x * x; }, [](double x) { return 2 * x; },
                   [](double) { return 2.0; }};
    const auto alpha = Potential::liouville_ansatz(
        Block::Hyperbolic, sq, [](double u, double v, int du, int dv) {
            if (du == 0 && dv == 0) return u + v;
            if (du + dv == 1) return 1.0;
            return 0.0;
        });
    CHECK_THROWS_AS(alpha(0.5, 0.2), DomainError);
}

TEST_CASE("liouville ansatz derivatives agree with finite differences") {
    // h(s) = exp(s); seed = sin(x0 - x1) + (x0 + x1) solves the wave
    // equation with a non-degenerate gradient combination 4 cos(x0 - x1).
    const Curve expc{[](double x) { return std::exp(x); }, [](double x) { return std::exp(x); },
                     [](double x) { return std::exp(x); }};
    auto wave_seed = [](double u, double v, int du, int dv) {
        const double w = u - v;
        const int n = du + dv;
        const double sign = (dv % 2 == 0) ? 1.0 : -1.0; // each d/dv brings -1
        double out;
        switch (n) {
            case 0: out = std::sin(w); break;
            case 1: out = sign * std::cos(w); break;
            case 2: out = sign * -std::sin(w); break;
            default: out = sign * -std::cos(w); break;
        }
        if (n == 0) out += u + v;
        if (n == 1) out += 1.0;
        return out;
    };
    const auto alpha = Potential::liouville_ansatz(Block::Hyperbolic, expc, wave_seed);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unit(0.2, 0.6);
    for (int i = 0; i < 30; ++i) {
        const double u = unit(rng), v = -unit(rng);
        for (int axis : {0, 1}) {
            const double exact = alpha(u, v, axis == 0 ? 1 : 0, axis == 0 ? 0 : 1);
            const double approx = fd_of_potential(alpha, u, v, axis);
            CHECK(std::abs(exact - approx) <= 1e-6 * std::max(1.0, std::abs(exact)));
        }
        const double fd_uu =
            oracles::fd1([&](double a, double b) { return alpha(a, b, 1, 0); }, u, v, 0);
        CHECK(std::abs(alpha(u, v, 2, 0) - fd_uu) <= 1e-6 * std::max(1.0, std::abs(fd_uu)));
    }
}

TEST_CASE("derivative orders above two are rejected") {
    const auto p = Potential::constant(Block::Hyperbolic, 0.0);
    CHECK_THROWS_AS(p(0, 0, 3, 0), UnsupportedDerivativeError);
    CHECK_THROWS_AS(p(0, 0, 2, 1), UnsupportedDerivativeError);
    CHECK_THROWS_AS(p(0, 0, -1, 0), UnsupportedDerivativeError);
}

TEST_CASE("user potentials delegate to their own derivative callables") {
    const auto p = Potential::user(
        Block::Hyperbolic,
        [](double u, double v, int du, int dv) {
            if (du == 0 && dv == 0) return u * u * v;
            if (du == 1 && dv == 0) return 2 * u * v;
            if (du == 0 && dv == 1) return u * u;
            if (du == 2 && dv == 0) return 2 * v;
            if (du == 1 && dv == 1) return 2 * u;
            return 0.0;
        },
        Domain::rectangle(-1, 1, -1, 1));
    CHECK(p(0.5, 0.5) == Catch::Approx(0.125).epsilon(1e-15));
    CHECK(p(0.5, 0.5, 1, 1) == 1.0);
    CHECK_THROWS_AS(p(2.0, 0.0), OutOfDomainError);
}
