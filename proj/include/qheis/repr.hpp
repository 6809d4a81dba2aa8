#pragma once

// Representation theory of the triples {P, X_{V,W}, U}: irreducibility via the
// commutant system, unitary equivalence with explicit witnesses, the standard
// example constructors, the operator realization of algebra elements, and the
// hypothesis check for the uniqueness theorem.

#include "algebra.hpp"
#include "extensions.hpp"

#include <Eigen/Dense>

#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qheis {

/// Data entering the commutant equations: atom positions of each sign and V', W'.
struct CommutantProblem {
    Eigen::VectorXd p_plus;
    Eigen::VectorXd p_minus;
    Mat Vp;
    Mat Wp;

    static CommutantProblem of(const ExtensionTriple& t) {
        t.validate();
        CommutantProblem p;
        p.p_plus = positions(t.family.plus());
        p.p_minus = positions(t.family.minus());
        p.Vp = t.bmap.Vp();
        p.Wp = t.bmap.Wp();
        return p;
    }

    Eigen::Index n_plus() const { return p_plus.size(); }
    Eigen::Index n_minus() const { return p_minus.size(); }

    void validate() const {
        if (Vp.rows() != n_plus() || Vp.cols() != n_minus() || Wp.rows() != n_plus() || Wp.cols() != n_minus())
            throw std::invalid_argument("commutant problem: V', W' must map K- to K+");
    }

private:
    static Eigen::VectorXd positions(const std::vector<Atom>& atoms) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(atoms.size()));
        for (std::size_t j = 0; j < atoms.size(); ++j) v[static_cast<Eigen::Index>(j)] = atoms[j].position;
        return v;
    }
};

struct OperatorPair {
    Mat plus;   // A+ : K+ -> K+~
    Mat minus;  // A- : K- -> K-~
};

enum class Verdict { irreducible, reducible };

inline const char* verdict_name(Verdict v) { return v == Verdict::irreducible ? "irreducible" : "reducible"; }

struct IrreducibilityReport {
    Eigen::Index commutant_dim = 0;
    std::vector<OperatorPair> basis;
    Verdict verdict = Verdict::reducible;
};

namespace detail {

/// Rows of the linear system A+ P+ = Q+ A+, A- P- = Q- A-, A+ V = V~ A-, A+ W = W~ A-
/// in the unknowns vec(A+) (rows x cols of Q+ by P+) followed by vec(A-).
inline Mat intertwiner_system(const CommutantProblem& src, const CommutantProblem& dst) {
    const Eigen::Index np = src.n_plus(), nm = src.n_minus();
    const Eigen::Index mp = dst.n_plus(), mm = dst.n_minus();
    const Eigen::Index unknowns = mp * np + mm * nm;
    const Eigen::Index off = mp * np;
    auto plus_at = [&](Eigen::Index i, Eigen::Index j) { return vec_index(i, j, np); };
    auto minus_at = [&](Eigen::Index i, Eigen::Index j) { return off + vec_index(i, j, nm); };

    std::vector<Eigen::VectorXcd> rows;
    auto new_row = [&]() -> Eigen::VectorXcd& { return rows.emplace_back(Eigen::VectorXcd::Zero(unknowns)); };

    for (Eigen::Index i = 0; i < mp; ++i)
        for (Eigen::Index j = 0; j < np; ++j) new_row()[plus_at(i, j)] = src.p_plus[j] - dst.p_plus[i];
    for (Eigen::Index i = 0; i < mm; ++i)
        for (Eigen::Index j = 0; j < nm; ++j) new_row()[minus_at(i, j)] = src.p_minus[j] - dst.p_minus[i];
    for (const auto& [m, mt] : {std::pair{&src.Vp, &dst.Vp}, std::pair{&src.Wp, &dst.Wp}}) {
        // (A+ M)(i, j) - (Mt A-)(i, j) = 0,  i < mp, j < nm
        for (Eigen::Index i = 0; i < mp; ++i)
            for (Eigen::Index j = 0; j < nm; ++j) {
                Eigen::VectorXcd& r = new_row();
                for (Eigen::Index k = 0; k < np; ++k) r[plus_at(i, k)] += (*m)(k, j);
                for (Eigen::Index k = 0; k < mm; ++k) r[minus_at(k, j)] -= (*mt)(i, k);
            }
    }
    Mat a(static_cast<Eigen::Index>(rows.size()), unknowns);
    for (std::size_t r = 0; r < rows.size(); ++r) a.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    return a;
}

inline OperatorPair unpack(const Eigen::VectorXcd& x, Eigen::Index mp, Eigen::Index np, Eigen::Index mm,
                           Eigen::Index nm) {
    OperatorPair p{Mat(mp, np), Mat(mm, nm)};
    for (Eigen::Index i = 0; i < mp; ++i)
        for (Eigen::Index j = 0; j < np; ++j) p.plus(i, j) = x[vec_index(i, j, np)];
    for (Eigen::Index i = 0; i < mm; ++i)
        for (Eigen::Index j = 0; j < nm; ++j) p.minus(i, j) = x[mp * np + vec_index(i, j, nm)];
    return p;
}

inline std::vector<OperatorPair> intertwiners(const CommutantProblem& src, const CommutantProblem& dst,
                                              double rel_tol) {
    src.validate();
    dst.validate();
    NullSpace ns = null_space(intertwiner_system(src, dst), rel_tol);
    std::vector<OperatorPair> out;
    for (Eigen::Index k = 0; k < ns.dim(); ++k)
        out.push_back(unpack(ns.basis.col(k), dst.n_plus(), src.n_plus(), dst.n_minus(), src.n_minus()));
    return out;
}

}  // namespace detail

/// Complex dimension of the solution space of the commutant system; 1 means irreducible.
inline IrreducibilityReport commutant_dim(const CommutantProblem& prob, double rel_tol = 1e-10) {
    IrreducibilityReport r;
    r.basis = detail::intertwiners(prob, prob, rel_tol);
    r.commutant_dim = static_cast<Eigen::Index>(r.basis.size());
    r.verdict = r.commutant_dim == 1 ? Verdict::irreducible : Verdict::reducible;
    return r;
}

/// max residual of the intertwining equations for (A+, A-).
inline double intertwining_residual(const CommutantProblem& src, const CommutantProblem& dst, const OperatorPair& a) {
    const Mat pp = src.p_plus.cast<cplx>().asDiagonal(), qp = dst.p_plus.cast<cplx>().asDiagonal();
    const Mat pm = src.p_minus.cast<cplx>().asDiagonal(), qm = dst.p_minus.cast<cplx>().asDiagonal();
    return std::max({detail::max_abs(a.plus * pp - qp * a.plus), detail::max_abs(a.minus * pm - qm * a.minus),
                     detail::max_abs(a.plus * src.Vp - dst.Vp * a.minus),
                     detail::max_abs(a.plus * src.Wp - dst.Wp * a.minus)});
}

enum class Equivalence { equivalent, inequivalent, undecided };

inline const char* equivalence_name(Equivalence e) {
    switch (e) {
        case Equivalence::equivalent: return "equivalent";
        case Equivalence::inequivalent: return "inequivalent";
        case Equivalence::undecided: return "undecided";
    }
    return "?";
}

struct EquivalenceResult {
    Equivalence status = Equivalence::undecided;
    std::optional<OperatorPair> witness;
    Eigen::Index intertwiner_dim = 0;
    double witness_residual = 0.0;   // intertwining equations
    double unitarity_residual = 0.0;
    std::string reason;
};

/// Decides unitary equivalence of two triples through the intertwiner space (A+ : K+ -> K+~ etc.).
inline EquivalenceResult unitary_equivalent(const CommutantProblem& a, const CommutantProblem& b,
                                            double rel_tol = 1e-10) {
    a.validate();
    b.validate();
    EquivalenceResult res;
    if (a.n_plus() != b.n_plus() || a.n_minus() != b.n_minus()) {
        res.status = Equivalence::inequivalent;
        res.reason = "boundary spaces have different dimensions";
        return res;
    }
    auto ints = detail::intertwiners(a, b, rel_tol);
    res.intertwiner_dim = static_cast<Eigen::Index>(ints.size());
    if (ints.empty()) {
        res.status = Equivalence::inequivalent;
        res.reason = "no nonzero intertwiner";
        return res;
    }
    const bool irreducible = commutant_dim(a, rel_tol).commutant_dim == 1 && commutant_dim(b, rel_tol).commutant_dim == 1;
    if (!irreducible) {
        res.status = Equivalence::undecided;
        res.reason = "intertwiners exist but a triple is reducible";
        return res;
    }
    // Schur: A*A is a positive multiple of the identity; rescale to a unitary.
    OperatorPair w = ints.front();
    const double scale = std::sqrt((w.plus.adjoint() * w.plus).trace().real() / static_cast<double>(a.n_plus()));
    w.plus /= scale;
    w.minus /= scale;
    // fix the phase: first entry of (near) maximal modulus becomes real positive
    cplx pivot{};
    double biggest = std::max(w.plus.cwiseAbs().maxCoeff(), w.minus.cwiseAbs().maxCoeff());
    for (const Mat* m : {&w.plus, &w.minus}) {
        for (Eigen::Index i = 0; i < m->rows() && pivot == cplx{}; ++i)
            for (Eigen::Index j = 0; j < m->cols(); ++j)
                if (std::abs((*m)(i, j)) >= biggest * (1.0 - 1e-9)) {
                    pivot = (*m)(i, j);
                    break;
                }
        if (pivot != cplx{}) break;
    }
    const cplx phase = std::conj(pivot) / std::abs(pivot);
    w.plus *= phase;
    w.minus *= phase;
    res.witness_residual = intertwining_residual(a, b, w);
    res.unitarity_residual =
        std::max(detail::unitarity_residual(w.plus), detail::unitarity_residual(w.minus));
    res.status = Equivalence::equivalent;
    res.reason = "irreducible triples with a unitary intertwiner";
    res.witness = std::move(w);
    return res;
}

inline EquivalenceResult unitary_equivalent(const ExtensionTriple& a, const ExtensionTriple& b,
                                            double rel_tol = 1e-10) {
    if (a.family.q() != b.family.q()) {
        EquivalenceResult res;
        res.status = Equivalence::inequivalent;
        res.reason = "different q: the spectra of P differ";
        return res;
    }
    return unitary_equivalent(CommutantProblem::of(a), CommutantProblem::of(b), rel_tol);
}

// ---- example constructors ----

struct ExampleParams {
    double q = 0.5;
    double a = 0.7;  // plus-side position (examples 1, 2, 4)
    double b = 0.7;  // minus-side position (examples 2, 4)
    double phi = 0.0;
    double psi = 0.0;
    int multiplicity = 2;                            // example 4
    std::vector<double> plus_positions;              // example 3; default {0.6, 0.75, 0.9}
    std::vector<double> minus_positions;             // example 3; default = plus_positions
    std::optional<Mat> Z;                            // example 3; default discrete Fourier matrix
    std::optional<Mat> T;                            // example 5
    double a2 = 0.85, b2 = 0.9;                      // example 5 second eigenvalues (a, b are the first)
    std::optional<Mat> Wp;                           // examples 3, 5; default identity
    Window window{-4, 8};
    std::uint64_t seed = 1;                          // generic unitaries in example 4
};

namespace detail {

inline Mat fourier_matrix(Eigen::Index n) {
    Mat f(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
            f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                                 2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(n));
    return f;
}

inline Mat haar_unitary(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
    return q;
}

/// Dimension of the joint commutant of a set of square matrices.
inline Eigen::Index joint_commutant_dim(const std::vector<Mat>& ms, double rel_tol = 1e-10) {
    const Eigen::Index n = ms.front().rows();
    Mat sys(static_cast<Eigen::Index>(ms.size()) * n * n, n * n);
    sys.setZero();
    Eigen::Index row = 0;
    for (const Mat& m : ms)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j, ++row)
                for (Eigen::Index k = 0; k < n; ++k) {
                    sys(row, vec_index(i, k, n)) += m(k, j);  // (A M)(i, j)
                    sys(row, vec_index(k, j, n)) -= m(i, k);  // (M A)(i, j)
                }
    return null_space(sys, rel_tol).dim();
}

inline std::vector<Atom> unit_weight_atoms(const std::vector<double>& pos) {
    std::vector<Atom> out;
    for (double p : pos) out.push_back({p, 1.0});
    return out;
}

}  // namespace detail

/// Default T for example 5: upper bidiagonal, non-normal, with 1/3 < T*T < 2/3.
inline Mat default_example5_T() {
    Mat t = Mat::Zero(3, 3);
    t(0, 0) = 0.64;
    t(1, 1) = 0.7;
    t(2, 2) = 0.76;
    t(0, 1) = 0.08;
    t(1, 2) = 0.08;
    return t;
}

/// Checks 1/3 <= T*T <= 2/3 and {T, T*}' = C I; throws std::invalid_argument otherwise.
inline void validate_example5_T(const Mat& t, double tol = 1e-12) {
    if (t.rows() != t.cols() || t.rows() == 0) throw std::invalid_argument("example 5: T must be square");
    Eigen::SelfAdjointEigenSolver<Mat> es(t.adjoint() * t, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (lo < 1.0 / 3.0 - tol || hi > 2.0 / 3.0 + tol)
        throw std::invalid_argument("example 5: T must satisfy I <= 3 T*T <= 2 I");
    if (detail::joint_commutant_dim({t, Mat(t.adjoint())}) != 1)
        throw std::invalid_argument("example 5: {T, T*} must have trivial commutant");
}

/// Finite versions of the standard examples:
/// 1 one atom a on each side, V = W = 1;  2 atoms a, b with V' = e^{i phi}, W' = e^{i psi};
/// 3 distinct atoms with V' = Z W' where {P+, Z}' is trivial;  4 a single position of
/// multiplicity m on each side with generic V', W';  5 two positions per side with
/// V' = Z(T) W'.
inline ExtensionTriple build_example(int kind, const ExampleParams& prm = {}) {
    switch (kind) {
        case 1:
            return {AtomFamily(prm.q, {{prm.a, 1.0}}, {{prm.a, 1.0}}), prm.window, BoundaryMap::from_phases(0.0, 0.0)};
        case 2:
            return {AtomFamily(prm.q, {{prm.a, 1.0}}, {{prm.b, 1.0}}), prm.window,
                    BoundaryMap::from_phases(prm.phi, prm.psi)};
        case 3: {
            std::vector<double> plus = prm.plus_positions.empty() ? std::vector<double>{0.6, 0.75, 0.9}
                                                                  : prm.plus_positions;
            std::vector<double> minus = prm.minus_positions.empty() ? plus : prm.minus_positions;
            if (plus.size() != minus.size())
                throw std::invalid_argument("example 3: both signs need the same number of atoms");
            const auto n = static_cast<Eigen::Index>(plus.size());
            Mat z = prm.Z ? *prm.Z : detail::fourier_matrix(n);
            Mat wp = prm.Wp ? *prm.Wp : Mat::Identity(n, n);
            if (z.rows() != n || z.cols() != n) throw std::invalid_argument("example 3: Z has the wrong size");
            if (!detail::is_unitary(z)) throw std::invalid_argument("example 3: Z is not unitary");
            Eigen::VectorXd pp = Eigen::Map<const Eigen::VectorXd>(plus.data(), n);
            if (detail::joint_commutant_dim({Mat(pp.cast<cplx>().asDiagonal()), z}) != 1)
                throw std::invalid_argument("example 3: {P+, Z} must have trivial commutant");
            return {AtomFamily(prm.q, detail::unit_weight_atoms(plus), detail::unit_weight_atoms(minus)), prm.window,
                    BoundaryMap::from_z(z, wp)};
        }
        case 4: {
            if (prm.multiplicity < 1) throw std::invalid_argument("example 4: multiplicity must be positive");
            const auto m = static_cast<std::size_t>(prm.multiplicity);
            std::mt19937_64 rng(prm.seed);
            Mat v = detail::haar_unitary(rng, prm.multiplicity), w = detail::haar_unitary(rng, prm.multiplicity);
            return {AtomFamily(prm.q, std::vector<Atom>(m, {prm.a, 1.0}), std::vector<Atom>(m, {prm.b, 1.0})),
                    prm.window, BoundaryMap::from_matrices(v, w)};
        }
        case 5: {
            if (prm.a == prm.a2) throw std::invalid_argument("example 5: the two plus positions must differ");
            Mat t = prm.T ? *prm.T : default_example5_T();
            validate_example5_T(t);
            const auto n = static_cast<std::size_t>(t.rows());
            Mat z = block_unitary_from(t);
            Mat wp = prm.Wp ? *prm.Wp : Mat::Identity(z.rows(), z.cols());
            std::vector<Atom> plus(n, {prm.a, 1.0}), minus(n, {prm.b, 1.0});
            plus.insert(plus.end(), n, {prm.a2, 1.0});
            minus.insert(minus.end(), n, {prm.b2, 1.0});
            return {AtomFamily(prm.q, plus, minus), prm.window, BoundaryMap::from_z(z, wp)};
        }
        default: throw std::invalid_argument("unknown example kind " + std::to_string(kind));
    }
}

// ---- realization of algebra elements ----

/// pi(a) v with p -> P, x -> X_{V,W}, u -> U and s -> q^{1/2}.  v must keep a
/// margin of at least the degree of a from both window edges.
inline LatticeVector apply_element(const AlgebraElement& a, const LatticeVector& v) {
    if (a.is_zero()) return LatticeVector(v.space_ptr());
    if (v.margin() < a.degree())
        throw std::domain_error("apply_element: vector too close to the window edge for this element");
    const double root = std::sqrt(v.space().q());
    LatticeVector out(v.space_ptr());
    for (const auto& [m, c] : a.terms()) {
        LatticeVector w = v;
        const Generator shift = m.uexp >= 0 ? Generator::U : Generator::U_star;
        for (int k = 0; k < std::abs(m.uexp); ++k) w = detail::apply_checked(shift, w);
        const Generator g = m.kind == NormalMonomial::Kind::P ? Generator::P : Generator::X;
        for (int k = 0; k < m.power; ++k) w = detail::apply_checked(g, w);
        out += c.evaluate(root) * w;
    }
    return out;
}

inline LatticeVector apply_element(const AlgebraElement& a, const LatticeVector& v, const ExtensionTriple& triple) {
    if (!(v.space().family() == triple.family)) throw std::invalid_argument("apply_element: vector from another family");
    return apply_element(a, v);
}

/// Finite-model check of the hypotheses of the uniqueness theorem.
inline CheckReport check_representation(const ExtensionTriple& triple, double tol = 1e-12) {
    CheckReport rep;
    const AtomFamily& fam = triple.family;
    bool nonzero = true;
    for (std::size_t c = 0; c < fam.components(); ++c)
        if (fam.atom(c).position == 0.0) nonzero = false;
    rep.flag("ker P = {0}", nonzero, nonzero ? "" : "an atom sits at t = 0");
    if (!nonzero) {
        rep.flag("layer 0 in the domain", false, "X undefined at t = 0");
        rep.flag("defining relations", false, "X undefined at t = 0");
        rep.flag("X_{V,W} Hermitian", false, "X undefined at t = 0");
        rep.flag("P Hermitian", false, "skipped");
        return rep;
    }
    SpacePtr sp = triple.space();
    {
        bool ok = sp->window().interior(0);
        for (std::size_t c = 0; ok && c < fam.components(); ++c) {
            TailVector e(sp);
            e.finite()[sp->offset(c, 0)] = 1.0;
            ok = in_domain(e, triple.bmap) && !apply_X_star(e).edge_loss;
        }
        rep.flag("layer 0 in the domain", ok, ok ? "" : "layer 0 must be interior to the window");
    }
    {
        RelationReport rr = check_relations_lattice(fam, triple.window, tol);
        std::string detail;
        for (const auto& e : rr.relations) detail += e.relation + "=" + std::to_string(e.max_residual) + " ";
        rep.bound("defining relations", rr.max_residual(), tol, detail);
    }
    rep.bound("X_{V,W} Hermitian", assemble_XVW(triple).hermitian_residual, tol);
    rep.bound("P Hermitian", detail::hermitian_residual(matrix_of(Generator::P, sp)), tol);
    return rep;
}

}  // namespace qheis
