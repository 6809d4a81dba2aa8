#include "oracles.hpp"

#include <qheis/schrodinger.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace qheis::schrodinger;
using qheis::oracle::quad_inner;

TEST(GaussianElement, MergesAndPrunes) {
    GaussianElement g;
    g.add({0.5, 1.0}, 2.0);
    g.add({0.5, 1.0 + 1e-15}, -2.0);
    EXPECT_TRUE(g.is_zero());
    g.add({0.5, 1.0}, 1.0);
    g.add({0.25, 0.0}, 1.0);
    EXPECT_EQ(g.size(), 2u);
    g *= 0.0;
    EXPECT_TRUE(g.is_zero());
}

TEST(Schrodinger, POnVacuum) {
    const Params prm = Params::from_q(0.5);
    const double a = prm.alpha;
    const auto f = GaussianElement::gaussian(0.0);
    const auto pf = act(Gen::P, f, prm);
    ASSERT_EQ(pf.size(), 1u);
    EXPECT_NEAR(std::abs(pf.terms()[0].gamma - cplx(0.0, 2.0 * a)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(pf.terms()[0].c - std::exp(a * a)), 0.0, 1e-14);
    // (Pf)(t) = f(t - alpha i)
    for (int k = 0; k < 20; ++k) {
        const double t = -3.0 + 0.3 * k;
        const cplx expect = std::exp(-std::pow(cplx(t, -a), 2));
        EXPECT_NEAR(std::abs(pf(t) - expect), 0.0, 1e-13 * std::max(1.0, std::abs(expect)));
    }
}

TEST(Schrodinger, ShiftsMatchPointwiseDefinition) {
    const Params prm = Params::from_q(0.3);
    const double a = prm.alpha, root = std::sqrt(prm.q());
    std::mt19937_64 rng(7);
    for (int s = 0; s < 10; ++s) {
        const auto f = random_element(rng);
        const auto u = act(Gen::U, f, prm), pi = act(Gen::P_inv, f, prm), x = act(Gen::X, f, prm);
        for (int k = 0; k < 20; ++k) {
            const double t = -2.0 + 0.2 * k;
            const cplx ut = std::exp(I * t) * f(t);
            const cplx pit = f(cplx(t, a));
            // X = i(q^{-1/2} e^{-it} - q^{1/2} e^{it}) f(t + alpha i)
            const cplx xt = I * (std::exp(-I * t) / root - root * std::exp(I * t)) * pit;
            EXPECT_NEAR(std::abs(u(t) - ut), 0.0, 1e-12 * std::max(1.0, std::abs(ut)));
            EXPECT_NEAR(std::abs(pi(t) - pit), 0.0, 1e-12 * std::max(1.0, std::abs(pit)));
            EXPECT_NEAR(std::abs(x(t) - xt), 0.0, 1e-12 * std::max(1.0, std::abs(xt)));
        }
    }
}

TEST(Schrodinger, ZeroMapsToZero) {
    const Params prm;
    for (Gen g : {Gen::U, Gen::U_star, Gen::P, Gen::P_inv, Gen::X}) EXPECT_TRUE(act(g, GaussianElement{}, prm).is_zero());
}

TEST(Schrodinger, UMultipliesByPhase) {
    const auto u = act(Gen::U, GaussianElement::gaussian({0.3, -0.2}), Params{});
    ASSERT_EQ(u.size(), 1u);
    EXPECT_EQ(u.terms()[0].gamma, cplx(0.3, 0.8));
}

TEST(GaussianInner, VacuumNorm) {
    const auto f = GaussianElement::gaussian(0.0);
    EXPECT_NEAR(inner(f, f).real(), std::sqrt(std::numbers::pi / 2.0), 1e-15);
    EXPECT_NEAR(std::abs(quad_inner(f, f) - inner(f, f)), 0.0, 1e-10);
}

TEST(GaussianInner, HermitianSymmetry) {
    std::mt19937_64 rng(3);
    for (int s = 0; s < 20; ++s) {
        const auto f = random_element(rng), g = random_element(rng);
        EXPECT_NEAR(std::abs(inner(f, g) - std::conj(inner(g, f))), 0.0, 1e-12 * (1.0 + std::abs(inner(f, g))));
    }
}

TEST(GaussianInner, MatchesQuadrature) {
    std::mt19937_64 rng(11);
    for (int s = 0; s < 20; ++s) {
        const auto f = random_element(rng), g = random_element(rng);
        const cplx exact = inner(f, g), num = quad_inner(f, g);
        EXPECT_NEAR(std::abs(exact - num), 0.0, 1e-9 * std::max(1.0, std::abs(exact))) << s;
    }
}

TEST(Schrodinger, HZero) {
    for (double q : {0.3, 0.5, 0.8}) {
        const Params prm = Params::from_q(q);
        EXPECT_LT(std::abs(h(I * (prm.alpha / 2.0), prm)), 1e-14);
        EXPECT_GT(std::abs(h(I * prm.alpha, prm)), 1e-2);
    }
}

TEST(Schrodinger, VerifyPassesForAllQ) {
    for (double q : {0.3, 0.5, 0.8}) {
        const auto rep = verify(Params::from_q(q), {50, 1, 1e-10, 1e-14});
        for (const auto& e : rep.entries) EXPECT_TRUE(e.passed) << q << " " << e.name << " " << e.value;
        EXPECT_TRUE(rep.pass());
    }
}

TEST(Schrodinger, SingleTermSymmetryIsExact) {
    const Params prm = Params::from_q(0.5);
    const auto f = GaussianElement::gaussian({0.4, -0.7}, {1.0, 2.0});
    const cplx d = inner(act(Gen::X, f, prm), f) - inner(f, act(Gen::X, f, prm));
    EXPECT_LT(std::abs(d), 1e-13 * norm(act(Gen::X, f, prm)) * norm(f));
}

TEST(Schrodinger, DetectsWrongCovariance) {
    // UX = qXU is not a relation of the model
    const Params prm = Params::from_q(0.5);
    const auto f = GaussianElement::gaussian(0.2);
    const auto lhs = act(Gen::U, act(Gen::X, f, prm), prm);
    const auto rhs = prm.q() * act(Gen::X, act(Gen::U, f, prm), prm);
    EXPECT_GT(norm(lhs - rhs) / norm(lhs), 0.1);
}

TEST(Schrodinger, RejectsBadParams) {
    EXPECT_THROW(Params::from_q(1.0), std::invalid_argument);
    EXPECT_THROW(Params{-1.0}.validate(), std::invalid_argument);
    EXPECT_THROW(verify(Params{}, {0, 1, 1e-10, 1e-14}), std::invalid_argument);
}
