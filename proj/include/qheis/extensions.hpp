#pragma once

// Self-adjoint extensions X_{V,W} of X: boundary maps, the domain condition,
// the assembled finite model and its spectrum, and the covariance checks.
//
// Boundary maps are stored as V', W' in K-orthonormal coordinates
// (y_j = x_j sqrt(w_j)), where they are plain unitary matrices.  In
// H-orthonormal coordinates (z_j = x_j sqrt(w_j / a_j)) the maps V, W acting
// on boundary values are given by the same matrices, which is what the domain
// condition uses.

#include "adjoint_domain.hpp"
#include "detail/linalg.hpp"
#include "report.hpp"

#include <Eigen/Dense>

#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qheis {

using detail::Mat;

class BoundaryMap {
public:
    BoundaryMap() = default;

    /// Throws std::invalid_argument unless V', W' are square, of equal size and unitary to tol.
    static BoundaryMap from_matrices(Mat vp, Mat wp, double tol = 1e-12) {
        if (vp.rows() != wp.rows() || vp.cols() != wp.cols() || vp.rows() != vp.cols())
            throw std::invalid_argument("boundary map: V' and W' must be square of the same size");
        if (vp.rows() == 0) throw std::invalid_argument("boundary map: empty matrices");
        if (!detail::is_unitary(vp, tol)) throw std::invalid_argument("boundary map: V' is not unitary");
        if (!detail::is_unitary(wp, tol)) throw std::invalid_argument("boundary map: W' is not unitary");
        return unchecked(std::move(vp), std::move(wp));
    }

    /// V' = e^{i phi}, W' = e^{i psi} on one-dimensional boundary spaces.
    static BoundaryMap from_phases(double phi, double psi) {
        Mat v(1, 1), w(1, 1);
        v(0, 0) = std::polar(1.0, phi);
        w(0, 0) = std::polar(1.0, psi);
        return unchecked(v, w);
    }

    /// V' = Z W'.
    static BoundaryMap from_z(const Mat& z, const Mat& wp, double tol = 1e-12) {
        if (z.cols() != wp.rows()) throw std::invalid_argument("boundary map: Z and W' do not compose");
        return from_matrices(z * wp, wp, tol);
    }

    /// No unitarity check; for building deliberately broken extensions.
    static BoundaryMap unchecked(Mat vp, Mat wp) {
        BoundaryMap b;
        b.vp_ = std::move(vp);
        b.wp_ = std::move(wp);
        return b;
    }

    const Mat& Vp() const { return vp_; }
    const Mat& Wp() const { return wp_; }
    Eigen::Index dim() const { return vp_.rows(); }
    double unitarity_residual() const {
        return std::max(detail::unitarity_residual(vp_), detail::unitarity_residual(wp_));
    }

    /// V acting on boundary values (value coordinates).
    Mat V(const BoundarySpace& plus, const BoundarySpace& minus) const { return in_values(vp_, plus, minus); }
    Mat W(const BoundarySpace& plus, const BoundarySpace& minus) const { return in_values(wp_, plus, minus); }

private:
    static Mat in_values(const Mat& m, const BoundarySpace& plus, const BoundarySpace& minus) {
        Mat out = m;
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            for (Eigen::Index j = 0; j < out.cols(); ++j) {
                const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
                out(i, j) *= std::sqrt(minus.weights[uj] / minus.positions[uj]) /
                             std::sqrt(plus.weights[ui] / plus.positions[ui]);
            }
        return out;
    }

    Mat vp_;
    Mat wp_;
};

/// Z = [[T, sqrt(I - T T*)], [-sqrt(I - T* T), T*]]; unitary whenever ||T|| <= 1.
inline Mat block_unitary_from(const Mat& t) {
    const Eigen::Index n = t.rows();
    if (t.cols() != n) throw std::invalid_argument("block unitary: T must be square");
    const Mat id = Mat::Identity(n, n);
    Mat z(2 * n, 2 * n);
    z.topLeftCorner(n, n) = t;
    z.topRightCorner(n, n) = detail::psd_sqrt(id - t * t.adjoint());
    z.bottomLeftCorner(n, n) = -detail::psd_sqrt(id - t.adjoint() * t);
    z.bottomRightCorner(n, n) = t.adjoint();
    return z;
}

struct ExtensionTriple {
    AtomFamily family;
    Window window;
    BoundaryMap bmap;

    void validate() const {
        if (family.plus().empty() || family.minus().empty())
            throw std::invalid_argument("extension triple: both signs need atoms");
        if (family.plus().size() != family.minus().size())
            throw std::invalid_argument("extension triple: boundary spaces of the two signs differ in dimension");
        if (static_cast<std::size_t>(bmap.dim()) != family.plus().size())
            throw std::invalid_argument("extension triple: boundary map dimension does not match the atoms");
    }
    SpacePtr space() const { return make_space(family, window); }
};

namespace detail {

inline double relative_gap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return (a - b).norm() / std::max({1.0, a.norm(), b.norm()});
}

struct PairedData {
    Eigen::VectorXcd plus_sum, plus_diff, minus_sum, minus_diff;  // H-orthonormal coordinates
};

inline PairedData paired(const TailVector& tv) {
    const AtomFamily& fam = tv.space().family();
    const BoundarySpace bp = boundary_space(fam, Sign::plus), bm = boundary_space(fam, Sign::minus);
    const Eigen::VectorXcd ep = bp.to_h_orthonormal(tv.even_of(Sign::plus));
    const Eigen::VectorXcd op = bp.to_h_orthonormal(tv.odd_of(Sign::plus));
    const Eigen::VectorXcd em = bm.to_h_orthonormal(tv.even_of(Sign::minus));
    const Eigen::VectorXcd om = bm.to_h_orthonormal(tv.odd_of(Sign::minus));
    return {ep + op, ep - op, em + om, em - om};
}

}  // namespace detail

/// Relative residual of f+_e + f+_o = V(f-_e + f-_o), f+_e - f+_o = W(f-_e - f-_o).
inline double domain_residual(const TailVector& tv, const BoundaryMap& bmap) {
    if (static_cast<std::size_t>(bmap.dim()) != tv.space().family().plus().size() ||
        tv.space().family().plus().size() != tv.space().family().minus().size())
        throw std::invalid_argument("domain check: boundary map dimension mismatch");
    auto d = detail::paired(tv);
    return std::max(detail::relative_gap(d.plus_sum, bmap.Vp() * d.minus_sum),
                    detail::relative_gap(d.plus_diff, bmap.Wp() * d.minus_diff));
}

inline bool in_domain(const TailVector& tv, const BoundaryMap& bmap, double tol = 1e-10) {
    return domain_residual(tv, bmap) <= tol;
}

/// Tail-only vector whose minus tails are (h, k) and whose plus tails satisfy the domain condition.
inline TailVector project_to_domain(const SpacePtr& space, const Eigen::VectorXcd& h, const Eigen::VectorXcd& k,
                                    const BoundaryMap& bmap) {
    const AtomFamily& fam = space->family();
    if (static_cast<std::size_t>(h.size()) != fam.minus().size() || k.size() != h.size() ||
        bmap.dim() != h.size() || fam.plus().size() != fam.minus().size())
        throw std::invalid_argument("project_to_domain: dimension mismatch");
    const BoundarySpace bp = boundary_space(fam, Sign::plus), bm = boundary_space(fam, Sign::minus);
    const Eigen::VectorXcd zh = bm.to_h_orthonormal(h), zk = bm.to_h_orthonormal(k);
    const Eigen::VectorXcd vs = bmap.Vp() * (zh + zk), wd = bmap.Wp() * (zh - zk);
    TailVector tv(space);
    tv.set_tails(Sign::minus, h, k);
    tv.set_tails(Sign::plus, bp.from_h_orthonormal((vs + wd) / 2.0), bp.from_h_orthonormal((vs - wd) / 2.0));
    return tv;
}

/// max over both identities of | ||f+_e +- f+_o||_H - ||f-_e +- f-_o||_H |, relative.
inline double norm_identity_residual(const TailVector& tv) {
    auto d = detail::paired(tv);
    auto gap = [](double x, double y) { return std::abs(x - y) / std::max({1.0, x, y}); };
    return std::max(gap(d.plus_sum.norm(), d.minus_sum.norm()), gap(d.plus_diff.norm(), d.minus_diff.norm()));
}

struct AssembledOperator {
    Mat matrix;                     // Hermitian, in an orthonormal basis of the model space
    std::vector<TailVector> basis;  // interior sites, then the tail remainders (not orthonormal)
    Mat to_orthonormal;             // column b of the orthonormal basis = sum_a C(a, b) basis[a]
    std::size_t interior = 0;
    double hermitian_residual = 0.0;
};

namespace detail {

/// Tail vector with minus data (h, k), restricted to layers >= n_max.
inline TailVector tail_remainder(const SpacePtr& sp, const Eigen::VectorXcd& h, const Eigen::VectorXcd& k,
                                 const BoundaryMap& bmap) {
    TailVector tv = project_to_domain(sp, h, k, bmap);
    tv.set_tail_start(sp->window().n_max);
    return tv;
}

}  // namespace detail

/// Galerkin matrix of X_{V,W} on span{interior sites} + span{tail remainders}, one even and
/// one odd remainder per minus atom.  Needs n_min <= -1 and n_max >= 1.
inline AssembledOperator assemble_XVW(const ExtensionTriple& triple) {
    triple.validate();
    const Window& w = triple.window;
    if (w.n_min > -1 || w.n_max < 1) throw std::invalid_argument("assemble_XVW: window must contain [-1, 1]");
    SpacePtr sp = triple.space();
    AssembledOperator out;
    for (std::size_t c = 0; c < sp->family().components(); ++c)
        for (int n = w.n_min + 1; n < w.n_max; ++n) {
            TailVector t(sp);
            t.finite()[sp->offset(c, n)] = 1.0;
            out.basis.push_back(std::move(t));
        }
    out.interior = out.basis.size();
    const auto m = static_cast<Eigen::Index>(sp->family().minus().size());
    for (Eigen::Index j = 0; j < m; ++j) {
        Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(m), zero = Eigen::VectorXcd::Zero(m);
        unit[j] = 1.0;
        out.basis.push_back(detail::tail_remainder(sp, unit, zero, triple.bmap));
        out.basis.push_back(detail::tail_remainder(sp, zero, unit, triple.bmap));
    }

    const auto n = static_cast<Eigen::Index>(out.basis.size());
    std::vector<TailVector> images;
    images.reserve(out.basis.size());
    for (const auto& b : out.basis) {
        Applied img = apply_X_star(b);
        if (img.edge_loss) throw std::logic_error("assemble_XVW: X* image left the window");
        images.push_back(as_tail_vector(img.vector));
    }
    Mat b(n, n), g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
            b(i, j) = inner(images[uj], out.basis[ui]);
            g(i, j) = inner(out.basis[uj], out.basis[ui]);
        }
    g = (g + g.adjoint()).eval() / 2.0;
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success) throw std::logic_error("assemble_XVW: model basis is degenerate");
    // C = L^{-*}
    Mat lower = llt.matrixL();
    out.to_orthonormal = lower.adjoint().triangularView<Eigen::Upper>().solve(Mat::Identity(n, n));
    out.matrix = out.to_orthonormal.adjoint() * b * out.to_orthonormal;
    out.hermitian_residual = detail::hermitian_residual(out.matrix);
    return out;
}

/// Ascending eigenvalues of the Hermitian part of a matrix.  Rows and columns are
/// reordered by decreasing size first: the assembled operators are strongly graded
/// (entries grow like q^{-n}) and Householder reduction keeps small eigenvalues
/// accurate only when the large entries come first.
inline std::vector<double> hermitian_eigenvalues(const Mat& m) {
    const Eigen::Index n = m.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Eigen::VectorXd size = m.cwiseAbs().rowwise().maxCoeff();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return size[a] > size[b]; });
    Mat h(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto oi = order[static_cast<std::size_t>(i)], oj = order[static_cast<std::size_t>(j)];
            h(i, j) = 0.5 * (m(oi, oj) + std::conj(m(oj, oi)));
        }
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

inline std::vector<double> spectrum(const ExtensionTriple& triple) {
    return hermitian_eigenvalues(assemble_XVW(triple).matrix);
}

struct ExtensionCheckOptions {
    int samples = 100;
    std::uint64_t seed = 1;
    double tol = 1e-12;
};

namespace detail {

inline std::complex<double> normal_complex(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    return {g(rng), g(rng)};
}

/// Random domain vector: finite part on layers [n_min + 2, n_max - 2], random minus tails.
inline TailVector random_domain_vector(std::mt19937_64& rng, const SpacePtr& sp, const BoundaryMap& bmap) {
    const Window& w = sp->window();
    const auto m = static_cast<Eigen::Index>(sp->family().minus().size());
    Eigen::VectorXcd h(m), k(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        h[j] = normal_complex(rng);
        k[j] = normal_complex(rng);
    }
    TailVector tv = project_to_domain(sp, h, k, bmap);
    for (std::size_t c = 0; c < sp->family().components(); ++c)
        for (int n = w.n_min + 2; n <= w.n_max - 2; ++n) tv.finite()[sp->offset(c, n)] = normal_complex(rng);
    return tv;
}

inline LatticeVector apply_checked(Generator g, const LatticeVector& v) {
    Applied a = apply_generator(g, v);
    if (a.edge_loss) throw std::logic_error("covariance check: image left the window");
    return a.vector;
}

inline double boundary_scale(const TailVector& f, const TailVector& g) {
    const double xf = apply_X_star(f).vector.norm(), xg = apply_X_star(g).vector.norm();
    return std::max(1.0, xf * norm(g) + norm(f) * xg);
}

}  // namespace detail

/// Symmetry of X_{V,W} on its domain, a non-domain witness, the norm identities, Hermiticity of the
/// assembled model and U-covariance U X = q^{-1} X U (equivalently U* X U = q X).
/// Needs n_min <= -2 and n_max >= 3.
inline CheckReport verify_extension(const ExtensionTriple& triple, const ExtensionCheckOptions& opt = {}) {
    triple.validate();
    const Window& w = triple.window;
    if (w.n_min > -2 || w.n_max < 3) throw std::invalid_argument("verify_extension: window must contain [-2, 3]");
    SpacePtr sp = triple.space();
    const double q = sp->q();
    std::mt19937_64 rng(opt.seed);
    CheckReport rep;

    double worst_direct = 0.0, worst_formula = 0.0, worst_norm = 0.0, worst_domain = 0.0;
    std::string witness;
    for (int s = 0; s < opt.samples; ++s) {
        TailVector f = detail::random_domain_vector(rng, sp, triple.bmap);
        TailVector g = detail::random_domain_vector(rng, sp, triple.bmap);
        auto v = boundary_form(f, g);
        const double scale = detail::boundary_scale(f, g);
        const double rd = std::abs(v.direct) / scale;
        if (rd > worst_direct) {
            worst_direct = rd;
            std::ostringstream os;
            os << "sample " << s << ": <X*f,g> - <f,X*g> = " << v.direct;
            witness = os.str();
        }
        worst_formula = std::max(worst_formula, std::abs(v.formula) / std::max(1.0, norm(f) * norm(g)));
        worst_norm = std::max(worst_norm, norm_identity_residual(f));
        worst_domain = std::max(worst_domain, domain_residual(f, triple.bmap));
    }
    rep.bound("boundary form vanishes on domain pairs", worst_direct, opt.tol, witness);
    rep.bound("boundary formula vanishes on domain pairs", worst_formula, opt.tol);
    rep.bound("norm identities", worst_norm, opt.tol);

    {
        // xi = zeta = 1 on the first plus atom, nothing on the minus side
        TailVector f(sp);
        f.even_tail()[0] = 1.0;
        f.odd_tail()[0] = 1.0;
        const double form = std::abs(boundary_form(f, f).direct);
        const double ratio = form / std::pow(norm(f), 2);
        std::ostringstream os;
        os << "|form| = " << form << ", domain residual " << domain_residual(f, triple.bmap);
        rep.entries.push_back({"non-domain pair has nonzero form", ratio > 1e-3, ratio, 1e-3, os.str()});
    }

    rep.bound("assembled operator Hermitian", assemble_XVW(triple).hermitian_residual, opt.tol);

    double worst_cov = 0.0, worst_cov_tail = 0.0, worst_u_domain = 0.0;
    for (int s = 0; s < opt.samples; ++s) {
        TailVector tv = detail::random_domain_vector(rng, sp, triple.bmap);
        const LatticeVector& f = tv.finite();
        const LatticeVector lhs = detail::apply_checked(Generator::U, detail::apply_checked(Generator::X, f));
        const LatticeVector rhs = detail::apply_checked(Generator::X, detail::apply_checked(Generator::U, f));
        worst_cov = std::max(worst_cov, relative_residual(lhs.coeffs(), rhs.coeffs() / q));

        auto [utv, loss] = apply_U(tv);
        if (loss) throw std::logic_error("verify_extension: U image left the window");
        worst_u_domain = std::max(worst_u_domain, domain_residual(utv, triple.bmap));
        Applied xs = apply_X_star(tv);
        Applied xus = apply_X_star(utv);
        if (xs.edge_loss || xus.edge_loss) throw std::logic_error("verify_extension: X* image left the window");
        const LatticeVector uxs = detail::apply_checked(Generator::U, xs.vector);
        worst_cov_tail = std::max(worst_cov_tail, relative_residual(uxs.coeffs(), xus.vector.coeffs() / q));
    }
    rep.bound("covariance UX = q^-1 XU on interior vectors", worst_cov, opt.tol);
    rep.bound("U preserves the domain", worst_u_domain, opt.tol);
    rep.bound("covariance UX* = q^-1 X*U on domain vectors", worst_cov_tail, opt.tol);
    return rep;
}

}  // namespace qheis
