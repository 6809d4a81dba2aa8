#pragma once

// Finitely atomic model of L^2(R_+, mu) (+) L^2(R_-, mu).  Each atom a_j with
// weight w_j of mu_1 on [q,1) generates the lattice points +-a_j q^n carrying
// mass w_j q^n.  Vectors are stored in the orthonormal basis
//   e_{sign,j,n} = (w_j q^n)^{-1/2} * indicator of {+-a_j q^n},
// truncated to a window n_min <= n <= n_max.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace qheis {

using cplx = std::complex<double>;
inline constexpr cplx I_unit{0.0, 1.0};

enum class Sign : std::int8_t { plus = 1, minus = -1 };

inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }
inline const char* sign_str(Sign s) { return s == Sign::plus ? "+" : "-"; }

struct Atom {
    double position = 0.0;  // a_j in [q, 1)
    double weight = 0.0;    // mu_1^{j}({a_j}) > 0
    friend bool operator==(const Atom&, const Atom&) = default;
};

class AtomFamily {
public:
    AtomFamily() = default;

    /// Throws std::invalid_argument unless 0 < q < 1, q <= a < 1 and w > 0 for every atom.
    AtomFamily(double q, std::vector<Atom> plus, std::vector<Atom> minus)
        : q_(q), plus_(std::move(plus)), minus_(std::move(minus)) {
        validate();
    }

    /// Skips validation; only for building deliberately broken configurations.
    static AtomFamily unchecked(double q, std::vector<Atom> plus, std::vector<Atom> minus) {
        AtomFamily f;
        f.q_ = q;
        f.plus_ = std::move(plus);
        f.minus_ = std::move(minus);
        return f;
    }

    void validate() const {
        if (!(q_ > 0.0 && q_ < 1.0)) throw std::invalid_argument("q must lie in (0,1)");
        auto check = [&](const std::vector<Atom>& atoms, const char* side) {
            for (std::size_t j = 0; j < atoms.size(); ++j) {
                const Atom& a = atoms[j];
                if (!(a.position >= q_ && a.position < 1.0))
                    throw std::invalid_argument(std::string("atom ") + side + std::to_string(j) +
                                                " position outside [q,1)");
                if (!(a.weight > 0.0))
                    throw std::invalid_argument(std::string("atom ") + side + std::to_string(j) +
                                                " weight must be positive");
            }
        };
        check(plus_, "+");
        check(minus_, "-");
    }

    double q() const { return q_; }
    double root() const { return std::sqrt(q_); }
    const std::vector<Atom>& atoms(Sign s) const { return s == Sign::plus ? plus_ : minus_; }
    const std::vector<Atom>& plus() const { return plus_; }
    const std::vector<Atom>& minus() const { return minus_; }

    /// Components are numbered plus atoms first, then minus atoms.
    std::size_t components() const { return plus_.size() + minus_.size(); }
    Sign component_sign(std::size_t c) const { return c < plus_.size() ? Sign::plus : Sign::minus; }
    std::size_t component_atom(std::size_t c) const { return c < plus_.size() ? c : c - plus_.size(); }
    std::size_t component_of(Sign s, std::size_t j) const { return s == Sign::plus ? j : plus_.size() + j; }
    const Atom& atom(std::size_t c) const { return c < plus_.size() ? plus_[c] : minus_[c - plus_.size()]; }

    friend bool operator==(const AtomFamily&, const AtomFamily&) = default;

private:
    double q_ = 0.5;
    std::vector<Atom> plus_;
    std::vector<Atom> minus_;
};

struct Window {
    int n_min = 0;
    int n_max = 0;

    int length() const { return n_max - n_min + 1; }
    bool contains(int n) const { return n >= n_min && n <= n_max; }
    bool interior(int n) const { return n > n_min && n < n_max; }
    Window widened(int by) const { return {n_min - by, n_max + by}; }

    friend bool operator==(const Window&, const Window&) = default;
};

struct LatticeIndex {
    Sign sign = Sign::plus;
    std::size_t j = 0;
    int n = 0;
    friend bool operator==(const LatticeIndex&, const LatticeIndex&) = default;
};

/// A family restricted to a window, with a flat numbering of its basis vectors.
class LatticeSpace {
public:
    LatticeSpace(AtomFamily family, Window window) : family_(std::move(family)), window_(window) {
        if (window_.n_max <= window_.n_min) throw std::invalid_argument("window needs n_min < n_max");
    }

    const AtomFamily& family() const { return family_; }
    const Window& window() const { return window_; }
    double q() const { return family_.q(); }

    std::size_t size() const { return family_.components() * static_cast<std::size_t>(window_.length()); }

    std::size_t offset(std::size_t component, int n) const {
        return component * static_cast<std::size_t>(window_.length()) + static_cast<std::size_t>(n - window_.n_min);
    }
    std::size_t offset(const LatticeIndex& idx) const {
        if (!window_.contains(idx.n)) throw std::out_of_range("lattice index outside window");
        if (idx.j >= family_.atoms(idx.sign).size()) throw std::out_of_range("atom index out of range");
        return offset(family_.component_of(idx.sign, idx.j), idx.n);
    }
    std::size_t component_at(std::size_t k) const { return k / static_cast<std::size_t>(window_.length()); }
    int layer_at(std::size_t k) const {
        return window_.n_min + static_cast<int>(k % static_cast<std::size_t>(window_.length()));
    }
    LatticeIndex index_at(std::size_t k) const {
        std::size_t c = component_at(k);
        return {family_.component_sign(c), family_.component_atom(c), layer_at(k)};
    }

    /// Lattice point +-a q^n of component c.
    double point(std::size_t c, int n) const {
        return sign_value(family_.component_sign(c)) * family_.atom(c).position * std::pow(q(), n);
    }
    /// mu-mass of that point, w q^n.
    double weight(std::size_t c, int n) const { return family_.atom(c).weight * std::pow(q(), n); }

    friend bool operator==(const LatticeSpace& a, const LatticeSpace& b) {
        return a.family_ == b.family_ && a.window_ == b.window_;
    }

private:
    AtomFamily family_;
    Window window_;
};

using SpacePtr = std::shared_ptr<const LatticeSpace>;

inline SpacePtr make_space(AtomFamily family, Window window) {
    return std::make_shared<const LatticeSpace>(std::move(family), window);
}

/// Element of the truncated lattice Hilbert space, in e-basis coordinates.
class LatticeVector {
public:
    explicit LatticeVector(SpacePtr space)
        : space_(std::move(space)), coeffs_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space_->size()))) {}
    LatticeVector(SpacePtr space, Eigen::VectorXcd coeffs) : space_(std::move(space)), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != static_cast<Eigen::Index>(space_->size()))
            throw std::invalid_argument("coefficient vector does not match lattice space");
    }

    static LatticeVector basis(SpacePtr space, const LatticeIndex& idx) {
        LatticeVector v(space);
        v.coeffs_[static_cast<Eigen::Index>(space->offset(idx))] = 1.0;
        return v;
    }

    const SpacePtr& space_ptr() const { return space_; }
    const LatticeSpace& space() const { return *space_; }
    const Eigen::VectorXcd& coeffs() const { return coeffs_; }
    Eigen::VectorXcd& coeffs() { return coeffs_; }

    cplx& operator[](std::size_t k) { return coeffs_[static_cast<Eigen::Index>(k)]; }
    cplx operator[](std::size_t k) const { return coeffs_[static_cast<Eigen::Index>(k)]; }
    cplx at(const LatticeIndex& idx) const { return (*this)[space_->offset(idx)]; }

    /// f(t) at the lattice point of slot k.
    cplx point_value(std::size_t k) const {
        std::size_t c = space_->component_at(k);
        return (*this)[k] / std::sqrt(space_->weight(c, space_->layer_at(k)));
    }

    bool same_space(const LatticeVector& o) const { return space_ == o.space_ || *space_ == *o.space_; }

    LatticeVector& operator+=(const LatticeVector& o) {
        require_same(o);
        coeffs_ += o.coeffs_;
        return *this;
    }
    LatticeVector& operator-=(const LatticeVector& o) {
        require_same(o);
        coeffs_ -= o.coeffs_;
        return *this;
    }
    LatticeVector& operator*=(cplx c) {
        coeffs_ *= c;
        return *this;
    }
    friend LatticeVector operator+(LatticeVector a, const LatticeVector& b) { return a += b; }
    friend LatticeVector operator-(LatticeVector a, const LatticeVector& b) { return a -= b; }
    friend LatticeVector operator*(cplx c, LatticeVector a) { return a *= c; }

    double norm() const { return coeffs_.norm(); }

    /// Smallest distance of the support from either window edge; large if empty.
    int margin() const {
        const Window& w = space_->window();
        int m = w.length();
        for (std::size_t k = 0; k < space_->size(); ++k) {
            if ((*this)[k] == cplx{}) continue;
            int n = space_->layer_at(k);
            m = std::min({m, n - w.n_min, w.n_max - n});
        }
        return m;
    }

    void require_same(const LatticeVector& o) const {
        if (!same_space(o)) throw std::invalid_argument("lattice vectors live on different spaces");
    }

private:
    SpacePtr space_;
    Eigen::VectorXcd coeffs_;
};

/// <f, g> = sum f(t) conj(g(t)) mu({t}); linear in f.
inline cplx inner(const LatticeVector& f, const LatticeVector& g) {
    f.require_same(g);
    return g.coeffs().dot(f.coeffs());
}

enum class Generator { U, U_star, P, X };

inline const char* generator_name(Generator g) {
    switch (g) {
        case Generator::U: return "U";
        case Generator::U_star: return "U*";
        case Generator::P: return "P";
        case Generator::X: return "X";
    }
    return "?";
}

/// Result of applying an operator on a window; edge_loss is set when a
/// nonzero coefficient would land outside the window and was dropped.
struct Applied {
    LatticeVector vector;
    bool edge_loss = false;
};

inline Applied apply_generator(Generator gen, const LatticeVector& v) {
    const LatticeSpace& sp = v.space();
    const Window& w = sp.window();
    const double q = sp.q();
    const double root = std::sqrt(q);
    Applied out{LatticeVector(v.space_ptr()), false};
    auto deposit = [&](std::size_t c, int n, cplx value) {
        if (value == cplx{}) return;
        if (!w.contains(n)) {
            out.edge_loss = true;
            return;
        }
        out.vector[sp.offset(c, n)] += value;
    };
    for (std::size_t c = 0; c < sp.family().components(); ++c) {
        for (int n = w.n_min; n <= w.n_max; ++n) {
            const cplx f = v[sp.offset(c, n)];
            if (f == cplx{}) continue;
            switch (gen) {
                case Generator::U: deposit(c, n - 1, f); break;
                case Generator::U_star: deposit(c, n + 1, f); break;
                case Generator::P: deposit(c, n, sp.point(c, n) * f); break;
                case Generator::X: {
                    const cplx scale = I_unit / sp.point(c, n);
                    deposit(c, n + 1, scale * f / root);
                    deposit(c, n - 1, -scale * f * root);
                    break;
                }
            }
        }
    }
    return out;
}

/// Column k is apply_generator on the k-th basis vector (truncated).
inline Eigen::MatrixXcd matrix_of(Generator gen, const SpacePtr& space) {
    const auto n = static_cast<Eigen::Index>(space->size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        LatticeVector e(space);
        e[static_cast<std::size_t>(k)] = 1.0;
        m.col(k) = apply_generator(gen, e).vector.coeffs();
    }
    return m;
}

/// Residual of lhs - rhs, relative to the size of the compared terms once
/// they exceed 1 (absolute below that).
inline double relative_residual(const Eigen::VectorXcd& lhs, const Eigen::VectorXcd& rhs) {
    const double scale = std::max({1.0, lhs.norm(), rhs.norm()});
    return (lhs - rhs).norm() / scale;
}

struct RelationViolation {
    std::string relation;
    LatticeIndex index;
    double residual = 0.0;
};

struct RelationReport {
    struct Entry {
        std::string relation;
        double max_residual = 0.0;
    };
    std::vector<Entry> relations;
    std::vector<RelationViolation> violations;
    double tol = 0.0;

    bool pass() const { return violations.empty(); }
    double max_residual() const {
        double m = 0.0;
        for (const auto& e : relations) m = std::max(m, e.max_residual);
        return m;
    }
};

/// Checks the covariance, inverse and momentum-position relations on every interior basis vector.
/// Products are evaluated on the window widened by two layers so no
/// intermediate term is truncated.
inline RelationReport check_relations_lattice(const AtomFamily& family, const Window& window, double tol) {
    if (window.length() < 4) throw std::invalid_argument("relation check needs a window of length >= 4");
    const double q = family.q();
    const double root = std::sqrt(q);
    SpacePtr wide = make_space(family, window.widened(2));

    auto op = [](Generator g, const LatticeVector& v) { return apply_generator(g, v).vector; };
    using Vec = LatticeVector;
    struct Relation {
        std::string name;
        std::function<std::pair<Vec, Vec>(const Vec&)> sides;
    };
    const std::vector<Relation> relations = {
        {"up = q pu",
         [&](const Vec& e) { return std::pair{op(Generator::U, op(Generator::P, e)), q * op(Generator::P, op(Generator::U, e))}; }},
        {"ux = q^-1 xu",
         [&](const Vec& e) { return std::pair{op(Generator::U, op(Generator::X, e)), (1.0 / q) * op(Generator::X, op(Generator::U, e))}; }},
        {"u u^-1 = 1", [&](const Vec& e) { return std::pair{op(Generator::U, op(Generator::U_star, e)), e}; }},
        {"u^-1 u = 1", [&](const Vec& e) { return std::pair{op(Generator::U_star, op(Generator::U, e)), e}; }},
        {"px = i s u^-1 - i s^-1 u",
         [&](const Vec& e) {
             return std::pair{op(Generator::P, op(Generator::X, e)),
                              (I_unit * root) * op(Generator::U_star, e) - (I_unit / root) * op(Generator::U, e)};
         }},
        {"xp = i s^-1 u^-1 - i s u",
         [&](const Vec& e) {
             return std::pair{op(Generator::X, op(Generator::P, e)),
                              (I_unit / root) * op(Generator::U_star, e) - (I_unit * root) * op(Generator::U, e)};
         }},
        {"px - q xp = i(s^3 - s^-1) u",
         [&](const Vec& e) {
             return std::pair{op(Generator::P, op(Generator::X, e)) - q * op(Generator::X, op(Generator::P, e)),
                              (I_unit * (q * root - 1.0 / root)) * op(Generator::U, e)};
         }},
        {"xp - q px = -i(s^3 - s^-1) u^-1",
         [&](const Vec& e) {
             return std::pair{op(Generator::X, op(Generator::P, e)) - q * op(Generator::P, op(Generator::X, e)),
                              (-I_unit * (q * root - 1.0 / root)) * op(Generator::U_star, e)};
         }},
    };

    RelationReport report;
    report.tol = tol;
    for (const auto& rel : relations) {
        RelationReport::Entry entry{rel.name, 0.0};
        for (std::size_t c = 0; c < family.components(); ++c) {
            for (int n = window.n_min + 1; n <= window.n_max - 1; ++n) {
                LatticeIndex idx{family.component_sign(c), family.component_atom(c), n};
                Vec e = Vec::basis(wide, idx);
                auto [lhs, rhs] = rel.sides(e);
                double r = relative_residual(lhs.coeffs(), rhs.coeffs());
                if (!(r <= tol)) report.violations.push_back({rel.name, idx, r});
                entry.max_residual = std::max(entry.max_residual, std::isnan(r) ? INFINITY : r);
            }
        }
        report.relations.push_back(entry);
    }
    return report;
}

}  // namespace qheis
