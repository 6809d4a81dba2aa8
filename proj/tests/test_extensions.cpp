#include "oracles.hpp"
#include "test_support.hpp"

#include <qheis/extensions.hpp>

#include <gtest/gtest.h>

#include <numbers>

using namespace qheis;

namespace {

Mat random_unitary(std::mt19937_64& rng, Eigen::Index n) {
    Mat a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = gen::random_complex(rng);
    Eigen::HouseholderQR<Mat> qr(a);
    return qr.householderQ() * Mat::Identity(n, n);
}

ExtensionTriple single_pair(double a_plus, double a_minus, double phi, double psi, Window w = {-3, 6}) {
    return {AtomFamily(0.5, {{a_plus, 1.0}}, {{a_minus, 0.8}}), w, BoundaryMap::from_phases(phi, psi)};
}

ExtensionTriple random_triple(std::mt19937_64& rng, std::size_t dim, Window w) {
    std::uniform_real_distribution<double> qd(0.3, 0.8);
    const double q = qd(rng);
    std::uniform_real_distribution<double> pos(q, 0.99), wt(0.5, 2.0);
    std::vector<Atom> plus, minus;
    for (std::size_t j = 0; j < dim; ++j) {
        plus.push_back({pos(rng), wt(rng)});
        minus.push_back({pos(rng), wt(rng)});
    }
    const auto n = static_cast<Eigen::Index>(dim);
    return {AtomFamily(q, plus, minus), w, BoundaryMap::from_matrices(random_unitary(rng, n), random_unitary(rng, n))};
}

}  // namespace

TEST(BoundaryMap, PhasesAndValidation) {
    auto b = BoundaryMap::from_phases(0.0, 0.0);
    EXPECT_EQ(b.dim(), 1);
    EXPECT_EQ(b.Vp()(0, 0), cplx(1.0));
    EXPECT_EQ(b.Wp()(0, 0), cplx(1.0));
    Mat bad(2, 2);
    bad << 1.0, 1.0, 0.0, 1.0;
    EXPECT_THROW(BoundaryMap::from_matrices(bad, Mat::Identity(2, 2)), std::invalid_argument);
    EXPECT_THROW(BoundaryMap::from_matrices(Mat::Identity(2, 2), Mat::Identity(3, 3)), std::invalid_argument);
}

TEST(BoundaryMap, BlockUnitary) {
    Mat t(2, 2);
    t << 0.7, 0.1, cplx(0.0, 0.2), 0.6;
    Mat z = block_unitary_from(t);
    EXPECT_LT(detail::unitarity_residual(z), 1e-12);
    EXPECT_EQ(z.topLeftCorner(2, 2), t);
    auto b = BoundaryMap::from_z(z, Mat::Identity(4, 4));
    EXPECT_LT((b.Vp() - z).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BoundaryMap, ValueCoordinatesAreHUnitary) {
    std::mt19937_64 rng(8);
    auto tr = random_triple(rng, 3, {-3, 6});
    BoundarySpace bp = boundary_space(tr.family, Sign::plus), bm = boundary_space(tr.family, Sign::minus);
    Mat v = tr.bmap.V(bp, bm);
    Eigen::VectorXcd x(3), y(3);
    for (int j = 0; j < 3; ++j) {
        x[j] = gen::random_complex(rng);
        y[j] = gen::random_complex(rng);
    }
    EXPECT_NEAR(std::abs(bp.h_inner(v * x, v * y) - bm.h_inner(x, y)), 0.0, 1e-12);
}

TEST(Domain, IdentityMapAndTailFree) {
    auto tr = single_pair(0.7, 0.7, 0.0, 0.0);
    tr.family = AtomFamily(0.5, {{0.7, 1.0}}, {{0.7, 1.0}});
    auto sp = tr.space();
    TailVector tv(sp);
    tv.even_tail() << 0.3, 0.3;
    tv.odd_tail() << cplx(0, 1), cplx(0, 1);
    EXPECT_TRUE(in_domain(tv, tr.bmap));
    tv.odd_tail()[0] = 2.0;
    EXPECT_FALSE(in_domain(tv, tr.bmap));
    TailVector free(sp);
    free.finite()[sp->offset(0, 1)] = 1.0;
    EXPECT_TRUE(in_domain(free, BoundaryMap::from_phases(1.0, 2.0)));
}

TEST(Domain, PhaseCondition) {
    const double phi = 0.9;
    AtomFamily fam(0.5, {{0.7, 1.0}}, {{0.7, 1.0}});
    auto sp = make_space(fam, {-2, 4});
    TailVector tv(sp);
    const cplx em{1.0, 0.5}, om{-0.3, 2.0};
    const cplx sum = std::polar(1.0, phi) * (em + om);
    const cplx diff = std::polar(1.0, 2.5) * (em - om);
    tv.set_tails(Sign::minus, Eigen::VectorXcd::Constant(1, em), Eigen::VectorXcd::Constant(1, om));
    tv.set_tails(Sign::plus, Eigen::VectorXcd::Constant(1, (sum + diff) / 2.0),
                 Eigen::VectorXcd::Constant(1, (sum - diff) / 2.0));
    EXPECT_TRUE(in_domain(tv, BoundaryMap::from_phases(phi, 2.5)));
    EXPECT_FALSE(in_domain(tv, BoundaryMap::from_phases(phi + 0.1, 2.5)));
}

TEST(Domain, Projection) {
    AtomFamily fam(0.5, {{0.7, 1.0}}, {{0.7, 1.0}});
    auto sp = make_space(fam, {-2, 4});
    auto one = Eigen::VectorXcd::Constant(1, 1.0), zero = Eigen::VectorXcd::Zero(1);
    TailVector a = project_to_domain(sp, one, zero, BoundaryMap::from_phases(0, 0));
    EXPECT_NEAR(std::abs(a.even_of(Sign::plus)[0] - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a.odd_of(Sign::plus)[0]), 0.0, 1e-15);
    TailVector b = project_to_domain(sp, one, one, BoundaryMap::from_phases(std::numbers::pi, 0));
    EXPECT_NEAR(std::abs(b.even_of(Sign::plus)[0] + 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(b.odd_of(Sign::plus)[0] + 1.0), 0.0, 1e-15);

    std::mt19937_64 rng(2);
    auto tr = random_triple(rng, 2, {-2, 5});
    Eigen::VectorXcd h(2), k(2);
    h << gen::random_complex(rng), gen::random_complex(rng);
    k << gen::random_complex(rng), gen::random_complex(rng);
    TailVector c = project_to_domain(tr.space(), h, k, tr.bmap);
    EXPECT_LT(domain_residual(c, tr.bmap), 1e-14);
    EXPECT_LT(norm_identity_residual(c), 1e-14);
}

TEST(Domain, BoundaryFormVanishesOnDomainPairs) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 5; ++t) {
        auto tr = random_triple(rng, 1 + static_cast<std::size_t>(t % 3), {-3, 6});
        auto sp = tr.space();
        for (int k = 0; k < 20; ++k) {
            auto f = detail::random_domain_vector(rng, sp, tr.bmap);
            auto g = detail::random_domain_vector(rng, sp, tr.bmap);
            auto v = boundary_form(f, g);
            EXPECT_LT(std::abs(v.direct) / detail::boundary_scale(f, g), 1e-13);
            EXPECT_LT(std::abs(v.formula), 1e-12);
        }
    }
}

TEST(Assemble, HermitianWithInteriorBlockOfX) {
    std::mt19937_64 rng(4);
    auto tr = random_triple(rng, 2, {-3, 6});
    auto asm_ = assemble_XVW(tr);
    EXPECT_LT(asm_.hermitian_residual, 1e-12);
    auto sp = tr.space();
    Mat x = matrix_of(Generator::X, sp);
    std::vector<Eigen::Index> sites;
    for (std::size_t c = 0; c < 4; ++c)
        for (int n = -2; n <= 5; ++n) sites.push_back(static_cast<Eigen::Index>(sp->offset(c, n)));
    ASSERT_EQ(sites.size(), asm_.interior);
    for (std::size_t i = 0; i < sites.size(); ++i)
        for (std::size_t j = 0; j < sites.size(); ++j)
            EXPECT_NEAR(std::abs(asm_.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                 x(sites[i], sites[j])),
                        0.0, 1e-12 * (1.0 + std::abs(x(sites[i], sites[j]))));
}

TEST(Assemble, MinimalWindowRejectsShallow) {
    auto tr = single_pair(0.6, 0.8, 0.3, 1.1, {0, 4});
    EXPECT_THROW(assemble_XVW(tr), std::invalid_argument);
    auto bad = single_pair(0.6, 0.8, 0.3, 1.1, {-1, 1});
    bad.bmap = BoundaryMap::from_matrices(Mat::Identity(2, 2), Mat::Identity(2, 2));
    EXPECT_THROW(assemble_XVW(bad), std::invalid_argument);
}

TEST(Spectrum, SmallMatrixMatchesCharacteristicPolynomial) {
    auto tr = single_pair(0.6, 0.8, 0.3, 1.1, {-1, 1});
    auto asm_ = assemble_XVW(tr);
    ASSERT_EQ(asm_.matrix.rows(), 4);
    auto ev = spectrum(tr);
    const double bound = 2.0 * asm_.matrix.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
    auto roots = oracle::real_roots(oracle::faddeev_leverrier(asm_.matrix), bound);
    ASSERT_EQ(roots.size(), ev.size());
    for (std::size_t k = 0; k < ev.size(); ++k) EXPECT_NEAR(roots[k], ev[k], 1e-10 * std::max(1.0, std::abs(ev[k])));
}

TEST(Spectrum, Homogeneous) {
    auto tr = single_pair(0.6, 0.8, 0.3, 1.1);
    auto m = assemble_XVW(tr).matrix;
    auto ev = hermitian_eigenvalues(m);
    auto ev3 = hermitian_eigenvalues(3.0 * m);
    ASSERT_EQ(ev.size(), ev3.size());
    for (std::size_t k = 0; k < ev.size(); ++k) EXPECT_NEAR(ev3[k], 3.0 * ev[k], 1e-12 * std::max(1.0, std::abs(ev3[k])));
    EXPECT_TRUE(std::is_sorted(ev.begin(), ev.end()));
}

TEST(ExtensionChecks, AllChecksPassForPhasePairs) {
    for (auto [phi, psi] : {std::pair{0.0, 0.0}, {0.4, 2.1}, {std::numbers::pi, 0.0}}) {
        auto rep = verify_extension(single_pair(0.7, 0.7, phi, psi), {20, 5, 1e-12});
        for (const auto& e : rep.entries) EXPECT_TRUE(e.passed) << e.name << " " << e.value << " " << e.detail;
    }
}

TEST(ExtensionChecks, RandomHigherDimensional) {
    std::mt19937_64 rng(77);
    auto rep = verify_extension(random_triple(rng, 3, {-3, 8}), {20, 9, 1e-12});
    for (const auto& e : rep.entries) EXPECT_TRUE(e.passed) << e.name << " " << e.value << " " << e.detail;
}

TEST(ExtensionChecks, CorruptedWFailsSymmetry) {
    auto tr = single_pair(0.7, 0.7, 0.0, 0.0);
    Mat w(1, 1);
    w(0, 0) = 1.5;
    tr.bmap = BoundaryMap::unchecked(tr.bmap.Vp(), w);
    auto rep = verify_extension(tr, {20, 3, 1e-12});
    const CheckEntry* e = rep.find("boundary form vanishes on domain pairs");
    ASSERT_NE(e, nullptr);
    EXPECT_FALSE(e->passed);
    EXPECT_FALSE(e->detail.empty());
    EXPECT_FALSE(rep.pass());
}

TEST(ExtensionChecks, WindowPrecondition) {
    EXPECT_THROW(verify_extension(single_pair(0.7, 0.7, 0, 0, {-1, 6})), std::invalid_argument);
}

TEST(Spectrum, NestedWindowsAgreeInTheBulk) {
    // eigenvalues whose eigenvectors live well inside the smaller window
    const double q = 0.3;
    const int d = 12;
    auto make = [&](int k) {
        return ExtensionTriple{AtomFamily(q, {{0.82, 1.0}, {0.9, 0.5}}, {{0.85, 1.0}, {0.95, 2.0}}), {-k, k},
                               BoundaryMap::from_phases(0.0, 0.0)};
    };
    auto make2 = [&](int k) {
        auto t = make(k);
        Mat v(2, 2);
        v << 0.6, cplx(0, 0.8), cplx(0, 0.8), 0.6;
        t.bmap = BoundaryMap::from_matrices(v, Mat::Identity(2, 2));
        return t;
    };
    auto small = spectrum(make2(d)), large = spectrum(make2(2 * d));
    int checked = 0;
    for (double e : small) {
        const double layer = std::log(1.0 / std::abs(e)) / std::log(q);
        if (layer < -d / 2.0 || layer > d / 4.0) continue;
        double best = 1e300;
        for (double f : large) best = std::min(best, std::abs(f - e));
        EXPECT_LT(best / std::abs(e), 1e-6) << e;
        ++checked;
    }
    EXPECT_GT(checked, 10);
}
