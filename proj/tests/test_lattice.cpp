#include "test_support.hpp"

#include <qheis/lattice.hpp>

#include <gtest/gtest.h>

#include <map>

using namespace qheis;

namespace {

AtomFamily single_atom(double q, double a, double w = 1.0) { return AtomFamily(q, {{a, w}}, {}); }

AtomFamily random_family(std::mt19937_64& rng, int max_atoms = 3) {
    std::uniform_real_distribution<double> uq(0.2, 0.9);
    std::uniform_int_distribution<int> count(1, max_atoms);
    const double q = uq(rng);
    std::uniform_real_distribution<double> pos(q, 1.0);
    std::uniform_real_distribution<double> wt(0.2, 3.0);
    auto atoms = [&] {
        std::vector<Atom> v(static_cast<std::size_t>(count(rng)));
        for (auto& a : v) a = {pos(rng), wt(rng)};
        return v;
    };
    auto plus = atoms();
    auto minus = atoms();
    return AtomFamily(q, plus, minus);
}

LatticeVector random_vector(std::mt19937_64& rng, const SpacePtr& sp, int margin) {
    LatticeVector v(sp);
    const Window& w = sp->window();
    for (std::size_t k = 0; k < sp->size(); ++k) {
        int n = sp->layer_at(k);
        if (n - w.n_min >= margin && w.n_max - n >= margin) v[k] = gen::random_complex(rng);
    }
    return v;
}

// (Xf)(t) = i t^{-1} (f(t/q) - f(qt)) on raw point values; returns point values.
std::map<std::pair<std::size_t, int>, cplx> x_by_definition(const LatticeVector& f) {
    const LatticeSpace& sp = f.space();
    std::map<std::pair<std::size_t, int>, cplx> raw, out;
    for (std::size_t k = 0; k < sp.size(); ++k) raw[{sp.component_at(k), sp.layer_at(k)}] = f.point_value(k);
    auto value = [&](std::size_t c, int n) {
        auto it = raw.find({c, n});
        return it == raw.end() ? cplx{} : it->second;
    };
    for (std::size_t c = 0; c < sp.family().components(); ++c)
        for (int n = sp.window().n_min - 1; n <= sp.window().n_max + 1; ++n) {
            // t/q sits at layer n-1, qt at layer n+1
            out[{c, n}] = I_unit / sp.point(c, n) * (value(c, n - 1) - value(c, n + 1));
        }
    return out;
}

}  // namespace

TEST(AtomFamily, Validation) {
    EXPECT_NO_THROW(AtomFamily(0.5, {{0.5, 1.0}}, {{0.99, 0.1}}));
    EXPECT_THROW(AtomFamily(1.0, {{0.5, 1.0}}, {}), std::invalid_argument);
    EXPECT_THROW(AtomFamily(0.5, {{0.4, 1.0}}, {}), std::invalid_argument);
    EXPECT_THROW(AtomFamily(0.5, {{1.0, 1.0}}, {}), std::invalid_argument);
    EXPECT_THROW(AtomFamily(0.5, {{0.7, 0.0}}, {}), std::invalid_argument);
    EXPECT_THROW(make_space(single_atom(0.5, 0.7), {3, 3}), std::invalid_argument);
}

TEST(LatticeSpace, MeasureScaling) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) {
        auto sp = make_space(random_family(rng), {-6, 6});
        for (std::size_t c = 0; c < sp->family().components(); ++c)
            for (int n = -6; n < 6; ++n) EXPECT_NEAR(sp->weight(c, n + 1), sp->q() * sp->weight(c, n), 1e-14 * sp->weight(c, n));
    }
}

TEST(ApplyGenerator, UShiftsDown) {
    auto sp = make_space(single_atom(0.5, 0.7), {-5, 5});
    auto r = apply_generator(Generator::U, LatticeVector::basis(sp, {Sign::plus, 0, 2}));
    EXPECT_FALSE(r.edge_loss);
    EXPECT_EQ(r.vector.coeffs(), LatticeVector::basis(sp, {Sign::plus, 0, 1}).coeffs());
}

TEST(ApplyGenerator, ZeroMapsToZero) {
    auto sp = make_space(single_atom(0.5, 0.7), {-5, 5});
    auto r = apply_generator(Generator::X, LatticeVector(sp));
    EXPECT_FALSE(r.edge_loss);
    EXPECT_EQ(r.vector.norm(), 0.0);
}

TEST(ApplyGenerator, XOnBasisVector) {
    const double q = 0.5, a = 0.7;
    auto sp = make_space(single_atom(q, a), {-5, 5});
    auto r = apply_generator(Generator::X, LatticeVector::basis(sp, {Sign::plus, 0, 0}));
    EXPECT_FALSE(r.edge_loss);
    EXPECT_NEAR(std::abs(r.vector.at({Sign::plus, 0, 1}) - I_unit / a / std::sqrt(q)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r.vector.at({Sign::plus, 0, -1}) + I_unit / a * std::sqrt(q)), 0.0, 1e-15);
    EXPECT_NEAR(r.vector.norm() * r.vector.norm(), (1.0 / q + q) / (a * a), 1e-13);
}

TEST(ApplyGenerator, MinusSignFlipsX) {
    const double q = 0.5, a = 0.7;
    auto sp = make_space(AtomFamily(q, {}, {{a, 2.0}}), {-5, 5});
    auto r = apply_generator(Generator::X, LatticeVector::basis(sp, {Sign::minus, 0, 3}));
    EXPECT_NEAR(std::abs(r.vector.at({Sign::minus, 0, 4}) + I_unit / (a * std::pow(q, 3)) / std::sqrt(q)), 0.0, 1e-12);
}

TEST(ApplyGenerator, EdgeLossFlag) {
    auto sp = make_space(single_atom(0.5, 0.7), {-3, 3});
    EXPECT_TRUE(apply_generator(Generator::U, LatticeVector::basis(sp, {Sign::plus, 0, -3})).edge_loss);
    EXPECT_FALSE(apply_generator(Generator::U, LatticeVector::basis(sp, {Sign::plus, 0, 3})).edge_loss);
    EXPECT_TRUE(apply_generator(Generator::U_star, LatticeVector::basis(sp, {Sign::plus, 0, 3})).edge_loss);
    EXPECT_TRUE(apply_generator(Generator::X, LatticeVector::basis(sp, {Sign::plus, 0, 3})).edge_loss);
    EXPECT_FALSE(apply_generator(Generator::P, LatticeVector::basis(sp, {Sign::plus, 0, 3})).edge_loss);
}

TEST(ApplyGenerator, XMatchesPointwiseDefinition) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 10; ++t) {
        auto sp = make_space(random_family(rng), {-6, 8});
        LatticeVector f = random_vector(rng, sp, 1);
        LatticeVector xf = apply_generator(Generator::X, f).vector;
        auto oracle = x_by_definition(f);
        for (std::size_t k = 0; k < sp->size(); ++k) {
            cplx expect = oracle[{sp->component_at(k), sp->layer_at(k)}];
            EXPECT_LE(std::abs(xf.point_value(k) - expect), 1e-12 * std::max(1.0, std::abs(expect)));
        }
    }
}

TEST(Inner, Orthonormality) {
    auto sp = make_space(AtomFamily(0.3, {{0.4, 2.0}, {0.9, 0.5}}, {{0.5, 1.0}}), {-4, 4});
    auto e1 = LatticeVector::basis(sp, {Sign::plus, 1, 2});
    auto e2 = LatticeVector::basis(sp, {Sign::plus, 1, 3});
    auto e3 = LatticeVector::basis(sp, {Sign::minus, 0, 2});
    EXPECT_NEAR(std::abs(inner(e1, e1) - 1.0), 0.0, 1e-15);
    EXPECT_EQ(inner(e1, e2), cplx{});
    EXPECT_EQ(inner(e1, e3), cplx{});
}

TEST(Inner, MatchesJacksonSum) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        auto sp = make_space(random_family(rng), {-5, 7});
        auto f = random_vector(rng, sp, 0);
        auto g = random_vector(rng, sp, 0);
        cplx oracle{};
        for (std::size_t k = 0; k < sp->size(); ++k)
            oracle += f.point_value(k) * std::conj(g.point_value(k)) * sp->weight(sp->component_at(k), sp->layer_at(k));
        EXPECT_LE(std::abs(inner(f, g) - oracle), 1e-12 * std::max(1.0, std::abs(oracle)));
        EXPECT_LE(std::abs(inner(f, g) - std::conj(inner(g, f))), 1e-13);
    }
}

TEST(Inner, MismatchedSpaces) {
    auto a = make_space(single_atom(0.5, 0.7), {-3, 3});
    auto b = make_space(single_atom(0.5, 0.8), {-3, 3});
    EXPECT_THROW(inner(LatticeVector(a), LatticeVector(b)), std::invalid_argument);
    auto a2 = make_space(single_atom(0.5, 0.7), {-3, 3});
    EXPECT_NO_THROW(inner(LatticeVector(a), LatticeVector(a2)));
}

TEST(MatrixOf, PIsRealDiagonal) {
    auto sp = make_space(AtomFamily(0.5, {{0.7, 1.0}}, {{0.6, 1.0}}), {-3, 3});
    Eigen::MatrixXcd P = matrix_of(Generator::P, sp);
    for (std::size_t k = 0; k < sp->size(); ++k) {
        auto idx = sp->index_at(k);
        double a = idx.sign == Sign::plus ? 0.7 : 0.6;
        EXPECT_NEAR(std::abs(P(k, k) - sign_value(idx.sign) * a * std::pow(0.5, idx.n)), 0.0, 1e-14);
    }
    EXPECT_NEAR((P - Eigen::MatrixXcd(P.diagonal().asDiagonal())).norm(), 0.0, 0.0);
    EXPECT_NEAR((P - P.adjoint()).norm(), 0.0, 0.0);
}

TEST(MatrixOf, UIsShiftWithOneLostColumn) {
    auto sp = make_space(single_atom(0.5, 0.7), {0, 5});
    Eigen::MatrixXcd U = matrix_of(Generator::U, sp);
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(6, 6);
    for (int k = 1; k < 6; ++k) expected(k - 1, k) = 1.0;
    EXPECT_EQ(U, expected);
    EXPECT_EQ(U.col(0).norm(), 0.0);
}

TEST(MatrixOf, XMatchesClosedForm) {
    const double q = 0.4, a = 0.55;
    auto sp = make_space(single_atom(q, a), {-4, 4});
    Eigen::MatrixXcd X = matrix_of(Generator::X, sp);
    for (int n = -4; n <= 4; ++n)
        for (int m = -4; m <= 4; ++m) {
            cplx expect{};
            const double scale = 1.0 / (a * std::pow(q, n));
            if (m == n + 1) expect = I_unit * scale / std::sqrt(q);
            if (m == n - 1) expect = -I_unit * scale * std::sqrt(q);
            EXPECT_LE(std::abs(X(m + 4, n + 4) - expect), 1e-13 * std::max(1.0, std::abs(expect)));
        }
}

TEST(Operators, UUnitaryOnInterior) {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 10; ++t) {
        auto sp = make_space(random_family(rng), {-6, 6});
        auto f = random_vector(rng, sp, 1);
        auto g = random_vector(rng, sp, 1);
        auto uf = apply_generator(Generator::U, f);
        auto ug = apply_generator(Generator::U, g);
        ASSERT_FALSE(uf.edge_loss || ug.edge_loss);
        EXPECT_LE(std::abs(inner(uf.vector, ug.vector) - inner(f, g)), 1e-12);
    }
}

TEST(Operators, XSymmetricOnInterior) {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 20; ++t) {
        auto sp = make_space(random_family(rng), {-6, 6});
        auto f = random_vector(rng, sp, 1);
        auto g = random_vector(rng, sp, 1);
        cplx lhs = inner(apply_generator(Generator::X, f).vector, g);
        cplx rhs = inner(f, apply_generator(Generator::X, g).vector);
        EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST(Relations, SingleAtomDefaultWindow) {
    auto report = check_relations_lattice(single_atom(0.5, 0.7), {-10, 10}, 1e-12);
    EXPECT_TRUE(report.pass());
    EXPECT_EQ(report.relations.size(), 8u);
    EXPECT_LT(report.max_residual(), 1e-12);
}

TEST(Relations, RandomConfigs) {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 10; ++t) {
        auto report = check_relations_lattice(random_family(rng), {-12, 12}, 1e-12);
        EXPECT_TRUE(report.pass()) << report.max_residual();
    }
}

TEST(Relations, WindowTooSmall) {
    EXPECT_THROW(check_relations_lattice(single_atom(0.5, 0.7), {0, 2}, 1e-12), std::invalid_argument);
}

TEST(Relations, ReportsViolations) {
    // tolerance below rounding makes the q-scaled relations report entries
    auto report = check_relations_lattice(AtomFamily(0.37, {{0.41, 1.3}}, {{0.93, 0.2}}), {-10, 10}, 0.0);
    EXPECT_FALSE(report.pass());
    EXPECT_FALSE(report.violations.empty());
}
