#pragma once

// The *-algebra A(q) on generators p, x, u, u^{-1}:
//   up = q pu,  ux = q^{-1} xu,  u u^{-1} = u^{-1} u = 1,
//   px = i s u^{-1} - i s^{-1} u,  xp = i s^{-1} u^{-1} - i s u,   s = q^{1/2}.
// Elements are kept in the basis {p^r u^n, x^s u^n}.

#include "scalar.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qheis {

enum class Letter : std::uint8_t { p, x, u, u_inv };

using FreeWord = std::vector<Letter>;

inline char letter_code(Letter l) {
    switch (l) {
        case Letter::p: return 'p';
        case Letter::x: return 'x';
        case Letter::u: return 'u';
        case Letter::u_inv: return 'v';
    }
    return '?';
}

struct NormalMonomial {
    enum class Kind : std::uint8_t { P, X };

    Kind kind = Kind::P;
    int power = 0;  // r >= 0 for P-type, s >= 1 for X-type
    int uexp = 0;

    static NormalMonomial unit() { return {}; }
    static NormalMonomial p_type(int r, int n = 0) {
        if (r < 0) throw std::invalid_argument("P-type power must be >= 0");
        return {Kind::P, r, n};
    }
    static NormalMonomial x_type(int s, int n = 0) {
        if (s < 1) throw std::invalid_argument("X-type power must be >= 1");
        return {Kind::X, s, n};
    }

    int degree() const { return power + (uexp < 0 ? -uexp : uexp); }

    /// The word p^r u^n (or x^s u^n) this basis element stands for.
    FreeWord word() const {
        FreeWord w(static_cast<std::size_t>(power), kind == Kind::P ? Letter::p : Letter::x);
        w.insert(w.end(), static_cast<std::size_t>(uexp < 0 ? -uexp : uexp),
                 uexp < 0 ? Letter::u_inv : Letter::u);
        return w;
    }

    std::string str() const {
        std::string out;
        if (power > 0) {
            out = (kind == Kind::P) ? "p" : "x";
            if (power > 1) out += "^" + std::to_string(power);
        }
        if (uexp != 0) {
            if (!out.empty()) out += "*";
            out += "u";
            if (uexp != 1) out += "^" + std::to_string(uexp);
        }
        return out.empty() ? "1" : out;
    }

    friend auto operator<=>(const NormalMonomial&, const NormalMonomial&) = default;
};

class AlgebraElement {
public:
    using Terms = std::map<NormalMonomial, ScalarQ>;

    AlgebraElement() = default;
    AlgebraElement(ScalarQ c) { add(NormalMonomial::unit(), c); }
    AlgebraElement(long long c) : AlgebraElement(ScalarQ(c)) {}
    AlgebraElement(const NormalMonomial& m, ScalarQ c = ScalarQ(1)) { add(m, c); }

    static AlgebraElement p() { return NormalMonomial::p_type(1); }
    static AlgebraElement x() { return NormalMonomial::x_type(1); }
    static AlgebraElement u(int n = 1) { return NormalMonomial::p_type(0, n); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const NormalMonomial& m, const ScalarQ& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    AlgebraElement& operator+=(const AlgebraElement& o) {
        for (const auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }
    AlgebraElement& operator-=(const AlgebraElement& o) {
        for (const auto& [m, c] : o.terms_) add(m, -c);
        return *this;
    }
    AlgebraElement operator-() const {
        AlgebraElement r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }

    AlgebraElement scaled(const ScalarQ& c) const {
        AlgebraElement r;
        for (const auto& [m, v] : terms_) r.add(m, v * c);
        return r;
    }

    /// Largest generator degree over all monomials.
    int degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            std::string t = term_str(m, c);
            if (first) {
                out = t;
                first = false;
            } else if (t.front() == '-') {
                out += " - " + t.substr(1);
            } else {
                out += " + " + t;
            }
        }
        return out;
    }

private:
    static std::string term_str(const NormalMonomial& m, const ScalarQ& c) {
        const bool unit_monomial = (m == NormalMonomial::unit());
        if (unit_monomial) {
            return c.terms().size() == 1 ? c.str() : "(" + c.str() + ")";
        }
        if (c == ScalarQ(1)) return m.str();
        if (c == ScalarQ(-1)) return "-" + m.str();
        std::string cs = c.str();
        if (c.terms().size() > 1) cs = "(" + cs + ")";
        return cs + "*" + m.str();
    }

    Terms terms_;
};

namespace detail {

struct Rewrite {
    ScalarQ coeff;
    FreeWord replacement;
};

/// Right-hand sides of the rule whose left side is (a, b); empty if (a, b) is not a redex.
inline std::vector<Rewrite> rule_for(Letter a, Letter b) {
    using L = Letter;
    const ScalarQ i = ScalarQ::i();
    if (a == L::u && b == L::p) return {{ScalarQ::s(2), {L::p, L::u}}};
    if (a == L::u_inv && b == L::p) return {{ScalarQ::s(-2), {L::p, L::u_inv}}};
    if (a == L::u && b == L::x) return {{ScalarQ::s(-2), {L::x, L::u}}};
    if (a == L::u_inv && b == L::x) return {{ScalarQ::s(2), {L::x, L::u_inv}}};
    if ((a == L::u && b == L::u_inv) || (a == L::u_inv && b == L::u)) return {{ScalarQ(1), {}}};
    if (a == L::p && b == L::x)
        return {{i * ScalarQ::s(1), {L::u_inv}}, {-(i * ScalarQ::s(-1)), {L::u}}};
    if (a == L::x && b == L::p)
        return {{i * ScalarQ::s(-1), {L::u_inv}}, {-(i * ScalarQ::s(1)), {L::u}}};
    return {};
}

inline bool is_redex(Letter a, Letter b) {
    using L = Letter;
    const bool a_shift = (a == L::u || a == L::u_inv);
    const bool b_shift = (b == L::u || b == L::u_inv);
    if (a_shift) return !b_shift || a != b;
    return !b_shift && a != b;  // px or xp
}

/// Reads an irreducible word back as a basis element.
inline NormalMonomial monomial_of(const FreeWord& w) {
    NormalMonomial m;
    std::size_t k = 0;
    if (!w.empty() && w[0] == Letter::x) m.kind = NormalMonomial::Kind::X;
    const Letter head = (m.kind == NormalMonomial::Kind::X) ? Letter::x : Letter::p;
    while (k < w.size() && w[k] == head) {
        ++m.power;
        ++k;
    }
    for (; k < w.size(); ++k) {
        if (w[k] == Letter::u) ++m.uexp;
        else if (w[k] == Letter::u_inv) --m.uexp;
        else throw std::logic_error("monomial_of: word is not irreducible");
    }
    return m;
}

}  // namespace detail

/// Redex selection policy for reduce().
enum class RewriteOrder { leftmost, randomized };

/// Rewrites coeff * word to the normal form.  The randomized order picks a
/// uniformly random pending word and a uniformly random redex inside it.
inline AlgebraElement reduce(const FreeWord& word, const ScalarQ& coeff = ScalarQ(1),
                             RewriteOrder order = RewriteOrder::leftmost,
                             std::mt19937_64* rng = nullptr) {
    if (order == RewriteOrder::randomized && rng == nullptr)
        throw std::invalid_argument("randomized rewrite order needs a generator");

    std::map<FreeWord, ScalarQ> pending;
    AlgebraElement result;
    auto push = [&](FreeWord w, const ScalarQ& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = pending.try_emplace(std::move(w), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) pending.erase(it);
        }
    };
    push(word, coeff);

    std::vector<std::size_t> redexes;
    while (!pending.empty()) {
        auto it = pending.begin();
        if (order == RewriteOrder::randomized) {
            std::uniform_int_distribution<std::size_t> pick(0, pending.size() - 1);
            std::advance(it, static_cast<std::ptrdiff_t>(pick(*rng)));
        }
        FreeWord w = it->first;
        ScalarQ c = it->second;
        pending.erase(it);

        redexes.clear();
        for (std::size_t k = 0; k + 1 < w.size(); ++k) {
            if (detail::is_redex(w[k], w[k + 1])) {
                redexes.push_back(k);
                if (order == RewriteOrder::leftmost) break;
            }
        }
        if (redexes.empty()) {
            result.add(detail::monomial_of(w), c);
            continue;
        }
        std::size_t pos = redexes.front();
        if (order == RewriteOrder::randomized) {
            std::uniform_int_distribution<std::size_t> pick(0, redexes.size() - 1);
            pos = redexes[pick(*rng)];
        }
        for (const auto& rw : detail::rule_for(w[pos], w[pos + 1])) {
            FreeWord next;
            next.reserve(w.size() + rw.replacement.size());
            next.insert(next.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
            next.insert(next.end(), rw.replacement.begin(), rw.replacement.end());
            next.insert(next.end(), w.begin() + static_cast<std::ptrdiff_t>(pos + 2), w.end());
            push(std::move(next), c * rw.coeff);
        }
    }
    return result;
}

inline AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
    AlgebraElement r;
    for (const auto& [ma, ca] : a.terms()) {
        FreeWord wa = ma.word();
        for (const auto& [mb, cb] : b.terms()) {
            FreeWord w = wa;
            FreeWord wb = mb.word();
            w.insert(w.end(), wb.begin(), wb.end());
            r += reduce(w, ca * cb);
        }
    }
    return r;
}

inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return multiply(a, b); }

inline AlgebraElement power(const AlgebraElement& a, int n) {
    if (n < 0) throw std::domain_error("negative power of an algebra element");
    AlgebraElement r(1);
    for (int k = 0; k < n; ++k) r = r * a;
    return r;
}

/// Inverse of c * u^n for a unit scalar c; anything else is not invertible here.
inline AlgebraElement inverse(const AlgebraElement& a) {
    if (a.terms().size() != 1) throw std::domain_error("element is not invertible");
    const auto& [m, c] = *a.terms().begin();
    if (m.power != 0 || m.kind != NormalMonomial::Kind::P || !c.is_unit())
        throw std::domain_error("element is not invertible");
    return AlgebraElement(NormalMonomial::p_type(0, -m.uexp), c.inverse());
}

/// Antilinear anti-automorphism with p* = p, x* = x, u* = u^{-1}.
inline AlgebraElement star(const AlgebraElement& a) {
    AlgebraElement r;
    for (const auto& [m, c] : a.terms()) {
        FreeWord w(static_cast<std::size_t>(std::abs(m.uexp)), m.uexp > 0 ? Letter::u_inv : Letter::u);
        w.insert(w.end(), static_cast<std::size_t>(m.power),
                 m.kind == NormalMonomial::Kind::P ? Letter::p : Letter::x);
        r += reduce(w, c.conj());
    }
    return r;
}

enum class RhoMap { swap_px = 1, flip_u = 2 };

/// The isomorphisms A(q) -> A(q^{-1}).  The output is written in the root of
/// the target algebra, so coefficients undergo s -> s^{-1} and the product on
/// the target is the ordinary multiply().
inline AlgebraElement rho_iso(const AlgebraElement& a, RhoMap which) {
    AlgebraElement r;
    for (const auto& [m, c] : a.terms()) {
        ScalarQ coeff = c.invert_root();
        NormalMonomial image = m;
        if (which == RhoMap::swap_px) {
            if (m.power > 0)
                image.kind = (m.kind == NormalMonomial::Kind::P) ? NormalMonomial::Kind::X
                                                                 : NormalMonomial::Kind::P;
        } else {
            image.uexp = -m.uexp;
            if (m.uexp % 2 != 0) coeff = -coeff;
        }
        r.add(image, coeff);
    }
    return r;
}

}  // namespace qheis
