#pragma once

// D(X*) = D(X) + H_e + H_o.  A TailVector holds a finitely supported part
// plus, per component c = (sign, j), the boundary values xi_c and zeta_c of
// the even and odd tails
//   f(+-a q^n) = xi (n even),  zeta (n odd),   n >= tail_start,
// as exact data (tail_start is 0 unless stated otherwise).  Tail-tail products
// are closed geometric sums, so nothing here depends on how deep the window
// reaches.

#include "lattice.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qheis {

/// Boundary data space of one sign, with the two metrics used on it:
/// K: sum x conj(y) w        (L^2(mu_1))
/// H: sum x conj(y) w / a    (L^2(t^{-1} mu_1), the canonical one)
struct BoundarySpace {
    std::vector<double> positions;
    std::vector<double> weights;

    std::size_t dim() const { return positions.size(); }

    cplx k_inner(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const {
        cplx s{};
        for (std::size_t j = 0; j < dim(); ++j) s += x[idx(j)] * std::conj(y[idx(j)]) * weights[j];
        return s;
    }
    cplx h_inner(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const {
        cplx s{};
        for (std::size_t j = 0; j < dim(); ++j) s += x[idx(j)] * std::conj(y[idx(j)]) * weights[j] / positions[j];
        return s;
    }
    double h_norm(const Eigen::VectorXcd& x) const { return std::sqrt(std::abs(h_inner(x, x))); }

    /// Coordinates of x in an H-orthonormal basis: x_j sqrt(w_j / a_j).
    Eigen::VectorXcd to_h_orthonormal(const Eigen::VectorXcd& x) const {
        Eigen::VectorXcd z(x.size());
        for (std::size_t j = 0; j < dim(); ++j) z[idx(j)] = x[idx(j)] * std::sqrt(weights[j] / positions[j]);
        return z;
    }
    Eigen::VectorXcd from_h_orthonormal(const Eigen::VectorXcd& z) const {
        Eigen::VectorXcd x(z.size());
        for (std::size_t j = 0; j < dim(); ++j) x[idx(j)] = z[idx(j)] / std::sqrt(weights[j] / positions[j]);
        return x;
    }

private:
    static Eigen::Index idx(std::size_t j) { return static_cast<Eigen::Index>(j); }
};

inline BoundarySpace boundary_space(const AtomFamily& family, Sign s) {
    BoundarySpace b;
    for (const Atom& a : family.atoms(s)) {
        b.positions.push_back(a.position);
        b.weights.push_back(a.weight);
    }
    return b;
}

class TailVector {
public:
    explicit TailVector(SpacePtr space)
        : finite_(space),
          even_(Eigen::VectorXcd::Zero(ncomp(*space))),
          odd_(Eigen::VectorXcd::Zero(ncomp(*space))) {}

    TailVector(LatticeVector finite, Eigen::VectorXcd even_tail, Eigen::VectorXcd odd_tail, int tail_start = 0)
        : finite_(std::move(finite)), even_(std::move(even_tail)), odd_(std::move(odd_tail)), start_(tail_start) {
        if (even_.size() != ncomp(finite_.space()) || odd_.size() != ncomp(finite_.space()))
            throw std::invalid_argument("tail data must have one entry per component");
    }

    const LatticeSpace& space() const { return finite_.space(); }
    const SpacePtr& space_ptr() const { return finite_.space_ptr(); }

    const LatticeVector& finite() const { return finite_; }
    LatticeVector& finite() { return finite_; }
    const Eigen::VectorXcd& even_tail() const { return even_; }
    Eigen::VectorXcd& even_tail() { return even_; }
    const Eigen::VectorXcd& odd_tail() const { return odd_; }
    Eigen::VectorXcd& odd_tail() { return odd_; }

    /// First layer covered by the tails.
    int tail_start() const { return start_; }
    void set_tail_start(int n) { start_ = n; }

    bool tail_free() const { return even_.isZero(0.0) && odd_.isZero(0.0); }

    /// Boundary values f_e, f_o of one sign, indexed by atom j.
    Eigen::VectorXcd even_of(Sign s) const { return slice(even_, s); }
    Eigen::VectorXcd odd_of(Sign s) const { return slice(odd_, s); }
    void set_tails(Sign s, const Eigen::VectorXcd& even, const Eigen::VectorXcd& odd) {
        const auto& fam = space().family();
        const auto n = fam.atoms(s).size();
        if (static_cast<std::size_t>(even.size()) != n || static_cast<std::size_t>(odd.size()) != n)
            throw std::invalid_argument("boundary data has the wrong dimension");
        for (std::size_t j = 0; j < n; ++j) {
            auto c = static_cast<Eigen::Index>(fam.component_of(s, j));
            even_[c] = even[static_cast<Eigen::Index>(j)];
            odd_[c] = odd[static_cast<Eigen::Index>(j)];
        }
    }

    TailVector& operator+=(const TailVector& o) {
        require_same_start(o);
        finite_ += o.finite_;
        even_ += o.even_;
        odd_ += o.odd_;
        return *this;
    }
    TailVector& operator-=(const TailVector& o) {
        require_same_start(o);
        finite_ -= o.finite_;
        even_ -= o.even_;
        odd_ -= o.odd_;
        return *this;
    }
    TailVector& operator*=(cplx c) {
        finite_ *= c;
        even_ *= c;
        odd_ *= c;
        return *this;
    }
    friend TailVector operator+(TailVector a, const TailVector& b) { return a += b; }
    friend TailVector operator-(TailVector a, const TailVector& b) { return a -= b; }
    friend TailVector operator*(cplx c, TailVector a) { return a *= c; }

    void require_same_start(const TailVector& o) const {
        if (start_ != o.start_) throw std::invalid_argument("tail vectors with different tail starts");
    }

private:
    static Eigen::Index ncomp(const LatticeSpace& sp) { return static_cast<Eigen::Index>(sp.family().components()); }

    Eigen::VectorXcd slice(const Eigen::VectorXcd& v, Sign s) const {
        const auto& fam = space().family();
        const auto n = fam.atoms(s).size();
        Eigen::VectorXcd out(static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < n; ++j)
            out[static_cast<Eigen::Index>(j)] = v[static_cast<Eigen::Index>(fam.component_of(s, j))];
        return out;
    }

    LatticeVector finite_;
    Eigen::VectorXcd even_;
    Eigen::VectorXcd odd_;
    int start_ = 0;
};

inline TailVector as_tail_vector(const LatticeVector& v) {
    TailVector t(v.space_ptr());
    t.finite() = v;
    return t;
}

namespace detail {

inline bool is_odd(int n) { return n % 2 != 0; }

/// e-coordinate at layer n of the unit even (odd) tail of component c starting at layer start.
inline double unit_tail_coeff(const LatticeSpace& sp, std::size_t c, int n, bool odd, int start) {
    if (n < start || is_odd(n) != odd) return 0.0;
    return std::sqrt(sp.weight(c, n));
}

/// First layer >= start of the given parity.
inline int first_layer(int start, bool odd) { return is_odd(start) == odd ? start : start + 1; }

/// <finite, tails of t>, restricted to the window (finite vanishes outside it).
inline cplx finite_tail_inner(const LatticeVector& f, const TailVector& t) {
    const LatticeSpace& sp = f.space();
    cplx s{};
    for (std::size_t k = 0; k < sp.size(); ++k) {
        const cplx v = f[k];
        if (v == cplx{}) continue;
        const std::size_t c = sp.component_at(k);
        const int n = sp.layer_at(k);
        const auto ci = static_cast<Eigen::Index>(c);
        s += v * (unit_tail_coeff(sp, c, n, false, t.tail_start()) * std::conj(t.even_tail()[ci]) +
                  unit_tail_coeff(sp, c, n, true, t.tail_start()) * std::conj(t.odd_tail()[ci]));
    }
    return s;
}

}  // namespace detail

/// Sum over the common tail layers; with tails from layer 0,
/// ||xi 1^e||^2 = |xi|^2 w / (1 - q^2) and ||zeta 1^o||^2 = q |zeta|^2 w / (1 - q^2).
inline cplx tail_tail_inner(const TailVector& f, const TailVector& g) {
    const LatticeSpace& sp = f.space();
    const double q = sp.q();
    const int start = std::max(f.tail_start(), g.tail_start());
    const double even_sum = std::pow(q, detail::first_layer(start, false)) / (1.0 - q * q);
    const double odd_sum = std::pow(q, detail::first_layer(start, true)) / (1.0 - q * q);
    cplx s{};
    for (std::size_t c = 0; c < sp.family().components(); ++c) {
        const auto ci = static_cast<Eigen::Index>(c);
        const double w = sp.family().atom(c).weight;
        s += (f.even_tail()[ci] * std::conj(g.even_tail()[ci]) * even_sum +
              f.odd_tail()[ci] * std::conj(g.odd_tail()[ci]) * odd_sum) *
             w;
    }
    return s;
}

/// Model inner product on D(X*), linear in f.
inline cplx inner(const TailVector& f, const TailVector& g) {
    f.finite().require_same(g.finite());
    return inner(f.finite(), g.finite()) + detail::finite_tail_inner(f.finite(), g) +
           std::conj(detail::finite_tail_inner(g.finite(), f)) + tail_tail_inner(f, g);
}

inline double norm(const TailVector& f) { return std::sqrt(std::abs(inner(f, f))); }

/// X* on the modeled domain; the image is always finitely supported.  A tail whose
/// first layer is m contributes only -i t^{-1} times its value at layer m - 1, e.g.
/// X*(xi 1^e) = -i t^{-1} xi at t = +-a q^{-1} and X*(zeta 1^o) = -i t^{-1} zeta at t = +-a.
inline Applied apply_X_star(const TailVector& tv) {
    Applied out = apply_generator(Generator::X, tv.finite());
    const LatticeSpace& sp = tv.space();
    const Window& w = sp.window();
    for (std::size_t c = 0; c < sp.family().components(); ++c) {
        const auto ci = static_cast<Eigen::Index>(c);
        const cplx xi = tv.even_tail()[ci];
        const cplx zeta = tv.odd_tail()[ci];
        auto deposit = [&](int n, cplx raw) {
            if (raw == cplx{}) return;
            if (!w.contains(n)) {
                out.edge_loss = true;
                return;
            }
            out.vector[sp.offset(c, n)] += raw * std::sqrt(sp.weight(c, n));
        };
        const int e0 = detail::first_layer(tv.tail_start(), false) - 1;
        const int o0 = detail::first_layer(tv.tail_start(), true) - 1;
        deposit(e0, -I_unit / sp.point(c, e0) * xi);
        deposit(o0, -I_unit / sp.point(c, o0) * zeta);
    }
    return out;
}

/// U on the modeled domain, keeping the tail start: U(xi 1^e) = s xi 1^o + s xi delta_{n=-1},
/// U(zeta 1^o) = s zeta 1^e.
inline std::pair<TailVector, bool> apply_U(const TailVector& tv) {
    const LatticeSpace& sp = tv.space();
    const double root = std::sqrt(sp.q());
    const int start = tv.tail_start();
    Applied moved = apply_generator(Generator::U, tv.finite());
    TailVector out(moved.vector, root * tv.odd_tail(), root * tv.even_tail(), start);
    bool loss = moved.edge_loss;
    const Eigen::VectorXcd& first = detail::is_odd(start) ? tv.odd_tail() : tv.even_tail();
    for (std::size_t c = 0; c < sp.family().components(); ++c) {
        const cplx v = first[static_cast<Eigen::Index>(c)];
        if (v == cplx{}) continue;
        if (!sp.window().contains(start - 1)) {
            loss = true;
            continue;
        }
        out.finite()[sp.offset(c, start - 1)] += root * v * std::sqrt(sp.weight(c, start - 1));
    }
    return {out, loss};
}

struct BoundaryFormValue {
    cplx direct;   // <X* f, g> - <f, X* g>
    cplx formula;  // sum over signs of  sign/(2i) {(f_e+f_o, g_e+g_o) - (f_e-f_o, g_e-g_o)} in the H-metric
    double scale = 0.0;  // |<X* f, g>| + |<f, X* g>|, the rounding scale of direct
};

inline cplx boundary_formula(const TailVector& f, const TailVector& g) {
    const AtomFamily& fam = f.space().family();
    cplx total{};
    for (Sign s : {Sign::plus, Sign::minus}) {
        BoundarySpace b = boundary_space(fam, s);
        const Eigen::VectorXcd fe = f.even_of(s), fo = f.odd_of(s), ge = g.even_of(s), go = g.odd_of(s);
        const cplx bracket = b.h_inner(fe + fo, ge + go) - b.h_inner(fe - fo, ge - go);
        total += sign_value(s) * bracket / (2.0 * I_unit);
    }
    return total;
}

inline BoundaryFormValue boundary_form(const TailVector& f, const TailVector& g) {
    Applied xf = apply_X_star(f);
    Applied xg = apply_X_star(g);
    if (xf.edge_loss || xg.edge_loss)
        throw std::domain_error("boundary_form: X* image leaves the window; move the finite part inward");
    const cplx lhs = inner(as_tail_vector(xf.vector), g), rhs = inner(f, as_tail_vector(xg.vector));
    return {lhs - rhs, boundary_formula(f, g), std::abs(lhs) + std::abs(rhs)};
}

/// Truncation of the represented function to the window: finite part plus the
/// tail values on the layers the window covers.
inline LatticeVector windowed(const TailVector& tv) {
    const LatticeSpace& sp = tv.space();
    LatticeVector out = tv.finite();
    for (std::size_t k = 0; k < sp.size(); ++k) {
        const std::size_t c = sp.component_at(k);
        const int n = sp.layer_at(k);
        const auto ci = static_cast<Eigen::Index>(c);
        out[k] += detail::unit_tail_coeff(sp, c, n, false, tv.tail_start()) * tv.even_tail()[ci] +
                  detail::unit_tail_coeff(sp, c, n, true, tv.tail_start()) * tv.odd_tail()[ci];
    }
    return out;
}

/// Number of deepest layers inspected by extract_tails.
inline constexpr int tail_probe_depth = 4;

/// Splits a windowed function into finite part plus tails, reading xi and zeta
/// off the deepest layers.  Throws std::domain_error if those layers are not
/// constant per parity (relative tolerance rel_tol).
inline TailVector extract_tails(const LatticeVector& raw, double rel_tol = 1e-12) {
    const LatticeSpace& sp = raw.space();
    const Window& w = sp.window();
    if (w.n_max - (tail_probe_depth - 1) < 0 || w.length() < tail_probe_depth)
        throw std::invalid_argument("extract_tails: window must reach layer >= 3 with 4 layers in the tail region");
    TailVector out(raw.space_ptr());
    for (std::size_t c = 0; c < sp.family().components(); ++c) {
        cplx found[2]{};
        for (int parity = 0; parity < 2; ++parity) {
            std::vector<cplx> values;
            for (int n = w.n_max - (tail_probe_depth - 1); n <= w.n_max; ++n)
                if ((n % 2 != 0) == (parity == 1)) values.push_back(raw.point_value(sp.offset(c, n)));
            const cplx deepest = values.back();
            for (const cplx& v : values) {
                const double scale = std::max(std::abs(v), std::abs(deepest));
                if (std::abs(v - deepest) > rel_tol * scale)
                    throw std::domain_error("extract_tails: not tail-patterned (deep values are not 2-periodic)");
            }
            found[parity] = deepest;
        }
        out.even_tail()[static_cast<Eigen::Index>(c)] = found[0];
        out.odd_tail()[static_cast<Eigen::Index>(c)] = found[1];
    }
    TailVector tails_only(out);
    tails_only.finite() = LatticeVector(raw.space_ptr());
    out.finite() = raw - windowed(tails_only);
    for (std::size_t c = 0; c < sp.family().components(); ++c)
        for (int n = w.n_max - (tail_probe_depth - 1); n <= w.n_max; ++n) out.finite()[sp.offset(c, n)] = 0.0;
    return out;
}

}  // namespace qheis
