#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "splitgeo/metric.hpp"

using namespace splitgeo;

namespace {

SplitMetric flat_metric() {
    return SplitMetric(Potential::constant(Block::Hyperbolic, 0.0),
                       Potential::constant(Block::Elliptic, 0.0), 0.0);
}

SplitMetric builtin_metric(double lambda) {
    return SplitMetric(Potential::liouville_builtin(Block::Hyperbolic, lambda),
                       Potential::liouville_builtin(Block::Elliptic, lambda), lambda);
}

Vec4 random_builtin_point(std::mt19937& rng) {
    std::uniform_real_distribution<double> x0(-1.0, 1.0), x1(0.3, 2.0), disk(-0.5, 0.5);
    return {x0(rng), x1(rng), disk(rng), disk(rng)};
}

} // namespace

TEST_CASE("metric components reproduce the block-diagonal form") {
    const auto mink = flat_metric();
    const auto c = mink.components({0.3, -0.7, 0.1, 0.9});
    CHECK(c.g[0] == 1.0);
    CHECK(c.g[1] == -1.0);
    CHECK(c.g[2] == -1.0);
    CHECK(c.g[3] == -1.0);

    const SplitMetric scaled(Potential::constant(Block::Hyperbolic, std::log(2.0)),
                             Potential::constant(Block::Elliptic, 0.0), 0.0);
    const auto cs = scaled.components({0, 0, 0, 0});
    CHECK(cs.g[0] == Catch::Approx(2.0));
    CHECK(cs.g[1] == Catch::Approx(-2.0));
    CHECK(cs.ginv[0] == Catch::Approx(0.5));

    // diagonal determinant: product of components is -e^{2a + 2b}
    const SplitMetric generic(Potential::linear(Block::Hyperbolic, 0.4, -0.3, 0.1),
                              Potential::linear(Block::Elliptic, -0.2, 0.6, 0.0), 0.0);
    const Vec4 x{0.2, 0.5, -0.1, 0.8};
    const auto cg = generic.components(x);
    const double det = cg.g[0] * cg.g[1] * cg.g[2] * cg.g[3];
    const double expected = -std::exp(2 * generic.alpha()(x[0], x[1]) +
                                      2 * generic.beta()(x[2], x[3]));
    CHECK(det == Catch::Approx(expected).epsilon(1e-14));

    // signature (1,3) holds at every in-domain point
    CHECK(cg.g[0] > 0.0);
    for (int a = 1; a < 4; ++a) CHECK(cg.g[a] < 0.0);
}

TEST_CASE("christoffel symbols vanish for constant potentials") {
    const auto m = flat_metric();
    const auto c = m.christoffel({1, 2, 3, 0});
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int d = 0; d < 4; ++d) CHECK(c.gamma[a][b][d] == 0.0);
}

TEST_CASE("christoffel matches the geodesic-equation coefficient for alpha = x1") {
    const SplitMetric m(Potential::linear(Block::Hyperbolic, 0.0, 1.0, 0.0),
                        Potential::constant(Block::Elliptic, 0.0), 0.0);
    for (const Vec4& x : {Vec4{0, 0, 0, 0}, Vec4{2, -1, 0.5, 0.3}}) {
        const auto c = m.christoffel(x);
        CHECK(c.gamma[0][0][1] == Catch::Approx(0.5)); // alpha_{x1} / 2
        CHECK(c.gamma[0][0][0] == 0.0);
        CHECK(c.gamma[1][0][0] == Catch::Approx(0.5));
    }
}

TEST_CASE("christoffel matches a finite-difference construction from the metric") {
    const SplitMetric m(Potential::tanh_cubic(Block::Hyperbolic, 0.3, 0.8, 0.1, 1.0, -0.5, 0.2),
                        Potential::tanh_cubic(Block::Elliptic, -0.2, 0.6, 0.0, 0.7, 0.1, -0.3),
                        0.0);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> unit(-0.8, 0.8);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec4 x{unit(rng), unit(rng), unit(rng), unit(rng)};
        const auto exact = m.christoffel(x);
        const auto fd = oracles::fd_christoffel(m, x);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c)
                    CHECK(std::abs(exact.gamma[a][b][c] - fd.gamma[a][b][c]) < 1e-6);
    }
}

TEST_CASE("christoffel symbols mixing the two blocks vanish at random points") {
    const SplitMetric m(Potential::tanh_cubic(Block::Hyperbolic, 1, 1, 1, 1, 1, 1),
                        Potential::liouville_builtin(Block::Elliptic, 1.0), 1.0);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unit(-0.45, 0.45);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec4 x{unit(rng), unit(rng), unit(rng), unit(rng)};
        const auto c = m.christoffel(x);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int d = 0; d < 4; ++d) {
                    const bool a_h = a < 2, b_h = b < 2, d_h = d < 2;
                    if (a_h == b_h && b_h == d_h) continue; // within one block
                    CHECK(c.gamma[a][b][d] == 0.0);
                }
    }
}

TEST_CASE("kretschmann is 8 lambda^2 for the built-in Liouville pair") {
    std::mt19937 rng(11);
    for (double lambda : {0.5, 1.0, 2.0}) {
        const auto m = builtin_metric(lambda);
        const double expected = 8.0 * lambda * lambda;
        for (int i = 0; i < 100; ++i) {
            const Vec4 x = random_builtin_point(rng);
            CHECK(std::abs(m.kretschmann(x) - expected) / expected < 1e-8);
        }
    }
}

TEST_CASE("kretschmann vanishes for constant potentials") {
    CHECK(flat_metric().kretschmann({0.4, 1.0, -0.3, 0.2}) == Catch::Approx(0.0).margin(1e-30));
}

TEST_CASE("kretschmann matches a finite-difference Riemann oracle") {
    // alpha = x0^2 has a genuinely curved hyperbolic block.
    const auto alpha = Potential::user(Block::Hyperbolic, [](double u, double, int du, int dv) {
        if (du == 0 && dv == 0) return u * u;
        if (du == 1 && dv == 0) return 2 * u;
        if (du == 2 && dv == 0) return 2.0;
        return 0.0;
    });
    const SplitMetric m(alpha, Potential::constant(Block::Elliptic, 0.0), 0.0);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> unit(-0.9, 0.9);
    for (int i = 0; i < 25; ++i) {
        const Vec4 x{unit(rng), unit(rng), unit(rng), unit(rng)};
        const double exact = m.kretschmann(x);
        const double approx = oracles::fd_kretschmann(m, x);
        CHECK(std::abs(exact - approx) <= 1e-5 * std::max(1.0, std::abs(exact)));
        // closed form for this block: R^H = -e^{-a} (a_uu - a_vv) => K = (R^H)^2
        const double rh = -std::exp(-x[0] * x[0]) * 2.0;
        CHECK(exact == Catch::Approx(rh * rh).epsilon(1e-12));
    }
}

TEST_CASE("kretschmann of translation-invariant potentials is shift-invariant") {
    const SplitMetric m(Potential::linear(Block::Hyperbolic, 0.8, -0.4, 0.2),
                        Potential::linear(Block::Elliptic, 0.3, 0.5, -0.1), 0.0);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        const Vec4 x{unit(rng), unit(rng), unit(rng), unit(rng)};
        const Vec4 y{x[0] + 3.7, x[1] + 3.7, x[2] - 1.9, x[3] - 1.9};
        CHECK(std::abs(m.kretschmann(x) - m.kretschmann(y)) < 1e-12);
    }
}

TEST_CASE("block scalar curvatures are 2 lambda for the built-ins") {
    std::mt19937 rng(41);
    for (double lambda : {0.5, 1.0, 2.0}) {
        const auto m = builtin_metric(lambda);
        for (int i = 0; i < 50; ++i) {
            const Vec4 x = random_builtin_point(rng);
            const auto [rh, re] = m.block_scalar_curvatures(x);
            CHECK(std::abs(rh - 2 * lambda) / (2 * lambda) < 1e-8);
            CHECK(std::abs(re - 2 * lambda) / (2 * lambda) < 1e-8);
        }
    }
}

TEST_CASE("block scalar curvatures vanish for constant potentials") {
    const auto [rh, re] = flat_metric().block_scalar_curvatures({0.1, 0.2, 0.3, 0.4});
    CHECK(rh == Catch::Approx(0.0).margin(1e-30));
    CHECK(re == Catch::Approx(0.0).margin(1e-30));
}

TEST_CASE("elliptic built-in alone gives block curvature 2 lambda") {
    const SplitMetric m(Potential::constant(Block::Hyperbolic, 0.0),
                        Potential::liouville_builtin(Block::Elliptic, 2.0), 2.0);
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> disk(-0.55, 0.55);
    for (int i = 0; i < 50; ++i) {
        const Vec4 x{0.0, 0.0, disk(rng), disk(rng)};
        const auto [rh, re] = m.block_scalar_curvatures(x);
        CHECK(rh == Catch::Approx(0.0).margin(1e-12));
        CHECK(re == Catch::Approx(4.0).epsilon(1e-8));
        const auto [fd_rh, fd_re] = oracles::fd_block_curvatures(m, x);
        CHECK(re == Catch::Approx(fd_re).epsilon(1e-5));
        (void)fd_rh;
    }
}

TEST_CASE("liouville residual examples") {
    // second derivatives of a linear potential vanish
    const auto lin = Potential::linear(Block::Hyperbolic, 2.0, -1.0, 0.3);
    CHECK(liouville_residual(lin, 0.0, 0.4, 0.7) == 0.0);

    // built-in hyperbolic solution: residual < 1e-10 on a grid avoiding x1 = 0
    const auto a = Potential::liouville_builtin(Block::Hyperbolic, 1.3);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double u = -1.0 + 2.0 * i / 9.0;
            const double v = 0.2 + 1.8 * j / 9.0;
            CHECK(std::abs(liouville_residual(a, 2 * 1.3, u, v)) < 1e-10);
        }

    // built-in elliptic solution on the disk
    const auto b = Potential::liouville_builtin(Block::Elliptic, 0.7);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double u = -0.6 + 1.2 * i / 9.0;
            const double v = -0.6 + 1.2 * j / 9.0;
            CHECK(std::abs(liouville_residual(b, 2 * 0.7, u, v)) < 1e-10);
        }

    // zero potential with coefficient 2: residual = 0 - 0 + 2 e^0 = 2
    const auto zero = Potential::linear(Block::Hyperbolic, 0.0, 0.0, 0.0);
    CHECK(liouville_residual(zero, 2.0, 0.0, 0.0) == Catch::Approx(2.0));
}

TEST_CASE("liouville residual elliptic sign flag flips the exponential term") {
    const auto b = Potential::linear(Block::Elliptic, 0.0, 0.0, 0.0);
    CHECK(liouville_residual(b, 2.0, 0, 0, EllipticSign::Minus) == Catch::Approx(-2.0));
    CHECK(liouville_residual(b, 2.0, 0, 0, EllipticSign::Plus) == Catch::Approx(2.0));
}

TEST_CASE("integrable families fail the Liouville equation whenever lambda != 0") {
    const double c = 2.0; // 2 * lambda with lambda = 1
    const Potential members[] = {
        Potential::tanh_cubic(Block::Hyperbolic, 1, 1, 1, 1, 1, 1),
        Potential::linear(Block::Hyperbolic, 1, 1, 1),
        Potential::tanh_cubic(Block::Elliptic, 1, 1, 1, 1, 1, 1),
        Potential::tanh_cubic(Block::Elliptic, 1, 1, 1, 1, 1, 1, EllipticTanhForm::ComplexRe),
        Potential::tanh_cubic(Block::Elliptic, 1, 1, 1, 1, 1, 1, EllipticTanhForm::ComplexIm),
        Potential::linear(Block::Elliptic, 1, 1, 1),
    };
    for (const auto& p : members) {
        CAPTURE(static_cast<int>(p.kind()), static_cast<int>(p.block()));
        CHECK(std::abs(liouville_residual(p, c, 0.0, 0.0)) > 0.1);
    }
}

TEST_CASE("metric constructor rejects swapped blocks") {
    CHECK_THROWS_AS(SplitMetric(Potential::constant(Block::Elliptic, 0.0),
                                Potential::constant(Block::Elliptic, 0.0), 0.0),
                    BlockMismatchError);
}
