#pragma once

// Gaussian span model: U = e^{iQ}, P = e^{alpha P_t}, X = i(q^{-1/2} e^{-iQ} - q^{1/2} e^{iQ}) e^{-alpha P_t}
// on L^2(R), restricted to D = Lin{e^{gamma t - t^2}}.  Every generator maps a
// Gaussian term to a Gaussian term, so all actions are closed form in gamma.

#include "qheis/report.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qheis {

namespace schrodinger {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};

struct Term {
    cplx gamma;
    cplx c;
};

/// Sum of c_k e^{gamma_k t - t^2}.  Exponents closer than merge_tol (relative)
/// are merged, so exact shift identities survive floating-point reassociation.
class GaussianElement {
public:
    static constexpr double merge_tol = 1e-12;

    GaussianElement() = default;
    explicit GaussianElement(std::vector<Term> terms) {
        for (const auto& t : terms) add(t.gamma, t.c);
    }
    static GaussianElement gaussian(cplx gamma, cplx c = 1.0) { return GaussianElement({{gamma, c}}); }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add(cplx gamma, cplx c) {
        if (c == cplx{}) return;
        for (auto it = terms_.begin(); it != terms_.end(); ++it) {
            if (std::abs(it->gamma - gamma) <= merge_tol * std::max({1.0, std::abs(gamma), std::abs(it->gamma)})) {
                it->c += c;
                if (it->c == cplx{}) terms_.erase(it);
                return;
            }
        }
        terms_.push_back({gamma, c});
    }

    GaussianElement& operator+=(const GaussianElement& o) {
        for (const auto& t : o.terms_) add(t.gamma, t.c);
        return *this;
    }
    GaussianElement& operator-=(const GaussianElement& o) {
        for (const auto& t : o.terms_) add(t.gamma, -t.c);
        return *this;
    }
    GaussianElement& operator*=(cplx s) {
        if (s == cplx{}) {
            terms_.clear();
            return *this;
        }
        for (auto& t : terms_) t.c *= s;
        return *this;
    }
    friend GaussianElement operator+(GaussianElement a, const GaussianElement& b) { return a += b; }
    friend GaussianElement operator-(GaussianElement a, const GaussianElement& b) { return a -= b; }
    friend GaussianElement operator*(cplx s, GaussianElement a) { return a *= s; }

    /// Pointwise value at a complex argument.
    cplx operator()(cplx t) const {
        cplx v{};
        for (const auto& term : terms_) v += term.c * std::exp(term.gamma * t - t * t);
        return v;
    }

private:
    std::vector<Term> terms_;
};

/// q = e^{-alpha}.
struct Params {
    double alpha = std::log(2.0);

    static Params from_q(double q) {
        if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q must lie in (0, 1)");
        return {-std::log(q)};
    }
    double q() const { return std::exp(-alpha); }
    void validate() const {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive and finite");
    }
};

enum class Gen { U, U_star, P, P_inv, X };

inline const char* gen_name(Gen g) {
    switch (g) {
        case Gen::U: return "U";
        case Gen::U_star: return "U*";
        case Gen::P: return "P";
        case Gen::P_inv: return "P^-1";
        case Gen::X: return "X";
    }
    return "?";
}

namespace detail {

template <class F>
GaussianElement map_terms(const GaussianElement& g, F f) {
    GaussianElement out;
    for (const auto& t : g.terms()) {
        for (const auto& r : f(t)) out.add(r.gamma, r.c);
    }
    return out;
}

inline std::vector<Term> shift_p(const Term& t, double alpha, double dir) {
    // f(t - dir * alpha i)
    return {{t.gamma + dir * 2.0 * alpha * I, t.c * std::exp(alpha * alpha - dir * I * alpha * t.gamma)}};
}

}  // namespace detail

inline GaussianElement act(Gen gen, const GaussianElement& g, const Params& prm) {
    const double a = prm.alpha;
    switch (gen) {
        case Gen::U:
            return detail::map_terms(g, [](const Term& t) { return std::vector<Term>{{t.gamma + I, t.c}}; });
        case Gen::U_star:
            return detail::map_terms(g, [](const Term& t) { return std::vector<Term>{{t.gamma - I, t.c}}; });
        case Gen::P:
            return detail::map_terms(g, [a](const Term& t) { return detail::shift_p(t, a, 1.0); });
        case Gen::P_inv:
            return detail::map_terms(g, [a](const Term& t) { return detail::shift_p(t, a, -1.0); });
        case Gen::X: {
            const double root = std::exp(-a / 2.0);
            return detail::map_terms(g, [a, root](const Term& t) {
                const Term s = detail::shift_p(t, a, -1.0).front();
                return std::vector<Term>{{s.gamma - I, I / root * s.c}, {s.gamma + I, -I * root * s.c}};
            });
        }
    }
    throw std::invalid_argument("unknown generator");
}

/// <e^{g t - t^2}, e^{g' t - t^2}> = sqrt(pi/2) exp((g + conj g')^2 / 8), linear in the first slot.
inline cplx inner(const GaussianElement& f, const GaussianElement& g) {
    const double c0 = std::sqrt(std::numbers::pi / 2.0);
    cplx s{};
    for (const auto& a : f.terms())
        for (const auto& b : g.terms()) {
            const cplx z = a.gamma + std::conj(b.gamma);
            s += a.c * std::conj(b.c) * c0 * std::exp(z * z / 8.0);
        }
    return s;
}

inline double norm(const GaussianElement& f) { return std::sqrt(std::max(0.0, inner(f, f).real())); }

/// h(z) = q^{-1/2} e^{iz} - q^{1/2} e^{-iz}.
inline cplx h(cplx z, const Params& prm) {
    const double root = std::exp(-prm.alpha / 2.0);
    return std::exp(I * z) / root - root * std::exp(-I * z);
}

inline GaussianElement random_element(std::mt19937_64& rng, std::size_t max_terms = 4) {
    std::uniform_int_distribution<std::size_t> nt(1, max_terms);
    std::uniform_real_distribution<double> re(-1.5, 1.5), im(-3.0, 3.0);
    std::normal_distribution<double> c(0.0, 1.0);
    GaussianElement g;
    const std::size_t n = nt(rng);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx gamma{re(rng), im(rng)};
        const cplx coeff{c(rng), c(rng)};
        g.add(gamma, coeff);
    }
    return g;
}

struct VerifyOptions {
    std::size_t samples = 50;
    std::uint64_t seed = 1;
    double tol = 1e-10;
    double zero_tol = 1e-14;
};

/// Defining relations, U-unitarity, P positivity, X symmetry, and the zero of h.
inline CheckReport verify(const Params& prm, const VerifyOptions& opt = {}) {
    prm.validate();
    if (opt.samples < 1) throw std::invalid_argument("need at least one sample");
    const double q = prm.q();
    const double root = std::exp(-prm.alpha / 2.0);
    auto op = [&](Gen g, const GaussianElement& f) { return act(g, f, prm); };
    using E = GaussianElement;

    struct Relation {
        std::string name;
        std::function<std::pair<E, E>(const E&)> sides;
    };
    const std::vector<Relation> relations = {
        {"up = q pu", [&](const E& f) { return std::pair{op(Gen::U, op(Gen::P, f)), q * op(Gen::P, op(Gen::U, f))}; }},
        {"ux = q^-1 xu",
         [&](const E& f) { return std::pair{op(Gen::U, op(Gen::X, f)), (1.0 / q) * op(Gen::X, op(Gen::U, f))}; }},
        {"u u^-1 = 1", [&](const E& f) { return std::pair{op(Gen::U, op(Gen::U_star, f)), f}; }},
        {"p p^-1 = 1", [&](const E& f) { return std::pair{op(Gen::P, op(Gen::P_inv, f)), f}; }},
        {"px = i s u^-1 - i s^-1 u",
         [&](const E& f) {
             return std::pair{op(Gen::P, op(Gen::X, f)), (I * root) * op(Gen::U_star, f) - (I / root) * op(Gen::U, f)};
         }},
        {"xp = i s^-1 u^-1 - i s u",
         [&](const E& f) {
             return std::pair{op(Gen::X, op(Gen::P, f)), (I / root) * op(Gen::U_star, f) - (I * root) * op(Gen::U, f)};
         }},
    };

    std::mt19937_64 rng(opt.seed);
    std::vector<E> samples, partners;
    for (std::size_t k = 0; k < opt.samples; ++k) {
        samples.push_back(random_element(rng));
        partners.push_back(random_element(rng));
    }

    CheckReport rep;
    for (const auto& rel : relations) {
        double worst = 0.0;
        for (const auto& f : samples) {
            auto [lhs, rhs] = rel.sides(f);
            const double scale = std::max({norm(lhs), norm(rhs), 1e-300});
            worst = std::max(worst, norm(lhs - rhs) / scale);
        }
        rep.bound(rel.name, worst, opt.tol);
    }

    double sym = 0.0, unit = 0.0, pos = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const E& f = samples[k];
        const E& g = partners[k];
        const E xf = op(Gen::X, f), xg = op(Gen::X, g);
        const cplx lhs = inner(xf, g), rhs = inner(f, xg);
        sym = std::max(sym, std::abs(lhs - rhs) / std::max(norm(xf) * norm(g) + norm(f) * norm(xg), 1e-300));

        const double nf = norm(f), nu = norm(op(Gen::U, f));
        unit = std::max(unit, std::abs(nu - nf) / nf);

        const E pf = op(Gen::P, f);
        const cplx ppf = inner(pf, f);
        const double scale = std::max(norm(pf) * nf, 1e-300);
        // <Pf, f> must be real and non-negative
        pos = std::max({pos, std::abs(ppf.imag()) / scale, std::max(0.0, -ppf.real()) / scale});
    }
    rep.bound("X symmetric", sym, opt.tol);
    rep.bound("U isometric", unit, opt.tol);
    rep.bound("P positive", pos, opt.tol);
    rep.bound("h(i alpha/2) = 0", std::abs(h(I * (prm.alpha / 2.0), prm)), opt.zero_tol,
              "X symmetric but not essentially self-adjoint");
    return rep;
}

}  // namespace schrodinger

}  // namespace qheis
