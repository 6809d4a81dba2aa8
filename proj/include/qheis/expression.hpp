#pragma once

// Expression syntax for algebra elements.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary ('*' unary)*
//   unary  := '-' unary | factor
//   factor := atom ['^' int]
//   atom   := 'p' | 'x' | 'u' | 'u^-1' | 'i' | 's' | 'q' | rational | '(' expr ')'
//
// q is sugar for s^2.  U+2212 is accepted wherever '-' is.  Whitespace is
// ignored between tokens.

#include "qheis/algebra.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qheis {

struct Expr {
    enum class Kind { num, imag, s, q, p, x, u, u_inv, neg, add, sub, mul, pow };

    Kind kind = Kind::num;
    Rational value = 0;  // num
    int exponent = 0;    // pow
    std::vector<Expr> kids;

    static Expr leaf(Kind k) { return Expr{k, 0, 0, {}}; }
    static Expr number(Rational r) { return Expr{Kind::num, std::move(r), 0, {}}; }
    static Expr unary(Kind k, Expr a) { return Expr{k, 0, 0, {std::move(a)}}; }
    static Expr binary(Kind k, Expr a, Expr b) { return Expr{k, 0, 0, {std::move(a), std::move(b)}}; }
    static Expr power(Expr a, int n) { return Expr{Kind::pow, 0, n, {std::move(a)}}; }

    friend bool operator==(const Expr&, const Expr&) = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
        : std::runtime_error(make_message(offset, expected, found)), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    static std::string make_message(std::size_t offset, const std::vector<std::string>& expected,
                                    const std::string& found) {
        std::string m = "syntax error at offset " + std::to_string(offset) + ": expected one of {";
        for (std::size_t k = 0; k < expected.size(); ++k) m += (k ? ", " : "") + expected[k];
        return m + "}, found " + found;
    }

    std::size_t offset_;
    std::vector<std::string> expected_;
};

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : src_(text) {}

    Expr parse() {
        Expr e = expr();
        skip_ws();
        if (pos_ < src_.size()) fail({"+", "-", "*", "^", "end of input"});
        return e;
    }

private:
    static inline const std::vector<std::string> atom_set = {"p", "x", "u", "u^-1", "i", "s", "q", "rational", "(", "-"};

    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    // Length of a minus sign at position k (ASCII or U+2212), 0 if none.
    std::size_t minus_at(std::size_t k) const {
        if (k < src_.size() && src_[k] == '-') return 1;
        if (src_.substr(k, 3) == "\xE2\x88\x92") return 3;
        return 0;
    }
    bool is_digit(std::size_t k) const { return k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k])); }

    std::string found() const {
        if (pos_ >= src_.size()) return "end of input";
        if (minus_at(pos_) == 3) return "'\xE2\x88\x92'";
        return std::string("'") + src_[pos_] + "'";
    }
    [[noreturn]] void fail(std::vector<std::string> expected) const { throw ParseError(pos_, std::move(expected), found()); }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool accept_minus() {
        skip_ws();
        if (std::size_t n = minus_at(pos_)) {
            pos_ += n;
            return true;
        }
        return false;
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (accept('+'))
                e = Expr::binary(Expr::Kind::add, std::move(e), term());
            else if (accept_minus())
                e = Expr::binary(Expr::Kind::sub, std::move(e), term());
            else
                return e;
        }
    }

    Expr term() {
        Expr e = unary();
        while (accept('*')) e = Expr::binary(Expr::Kind::mul, std::move(e), unary());
        return e;
    }

    Expr unary() {
        if (accept_minus()) return Expr::unary(Expr::Kind::neg, unary());
        return factor();
    }

    Expr factor() {
        Expr a = atom();
        if (accept('^')) return Expr::power(std::move(a), integer());
        return a;
    }

    int integer() {
        skip_ws();
        const bool negative = accept_minus();
        skip_ws();
        if (!is_digit(pos_)) fail(negative ? std::vector<std::string>{"integer"} : std::vector<std::string>{"integer", "-"});
        const std::size_t start = pos_;
        long long v = 0;
        while (is_digit(pos_)) {
            v = v * 10 + (src_[pos_] - '0');
            if (v > 1'000'000) {
                pos_ = start;
                throw ParseError(start, {"integer of at most 1000000"}, "oversized exponent");
            }
            ++pos_;
        }
        return static_cast<int>(negative ? -v : v);
    }

    boost::multiprecision::cpp_int digits() {
        const std::size_t start = pos_;
        while (is_digit(pos_)) ++pos_;
        return boost::multiprecision::cpp_int(std::string(src_.substr(start, pos_ - start)));
    }

    Expr atom() {
        skip_ws();
        if (pos_ >= src_.size()) fail(atom_set);
        const char c = src_[pos_];
        switch (c) {
            case 'p': ++pos_; return Expr::leaf(Expr::Kind::p);
            case 'x': ++pos_; return Expr::leaf(Expr::Kind::x);
            case 'i': ++pos_; return Expr::leaf(Expr::Kind::imag);
            case 's': ++pos_; return Expr::leaf(Expr::Kind::s);
            case 'q': ++pos_; return Expr::leaf(Expr::Kind::q);
            case 'u': {
                ++pos_;
                // "u^-1" is one token unless more digits follow
                if (pos_ < src_.size() && src_[pos_] == '^') {
                    const std::size_t m = minus_at(pos_ + 1);
                    const std::size_t one = pos_ + 1 + m;
                    if (m && one < src_.size() && src_[one] == '1' && !is_digit(one + 1)) {
                        pos_ = one + 1;
                        return Expr::leaf(Expr::Kind::u_inv);
                    }
                }
                return Expr::leaf(Expr::Kind::u);
            }
            case '(': {
                ++pos_;
                Expr e = expr();
                if (!accept(')')) fail({")", "+", "-", "*", "^"});
                return e;
            }
            default: break;
        }
        if (is_digit(pos_)) {
            boost::multiprecision::cpp_int num = digits();
            if (pos_ < src_.size() && src_[pos_] == '/') {
                ++pos_;
                if (!is_digit(pos_)) fail({"denominator digits"});
                const std::size_t at = pos_;
                boost::multiprecision::cpp_int den = digits();
                if (den == 0) throw ParseError(at, {"nonzero denominator"}, "'0'");
                return Expr::number(Rational(num, den));
            }
            return Expr::number(Rational(num));
        }
        fail(atom_set);
    }
};

inline int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::add:
        case Expr::Kind::sub: return 1;
        case Expr::Kind::mul: return 2;
        case Expr::Kind::neg: return 3;
        case Expr::Kind::pow: return 4;
        default: return 5;
    }
}

inline std::string rational_str(const Rational& r) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace detail

inline Expr parse_expression(std::string_view text) { return detail::ExprParser(text).parse(); }

/// Minimal-parenthesis rendering; parse_expression(print_expression(e)) == e.
inline std::string print_expression(const Expr& e) {
    using K = Expr::Kind;
    auto wrap = [](const Expr& k, bool paren) {
        const std::string s = print_expression(k);
        return paren ? "(" + s + ")" : s;
    };
    switch (e.kind) {
        case K::num:
            if (e.value < 0) return "(-" + detail::rational_str(-e.value) + ")";
            return detail::rational_str(e.value);
        case K::imag: return "i";
        case K::s: return "s";
        case K::q: return "q";
        case K::p: return "p";
        case K::x: return "x";
        case K::u: return "u";
        case K::u_inv: return "u^-1";
        case K::neg: return "-" + wrap(e.kids[0], detail::precedence(e.kids[0]) < 3);
        case K::add:
        case K::sub:
            return wrap(e.kids[0], false) + (e.kind == K::add ? " + " : " - ") +
                   wrap(e.kids[1], detail::precedence(e.kids[1]) <= 1);
        case K::mul: return wrap(e.kids[0], detail::precedence(e.kids[0]) < 2) + "*" + wrap(e.kids[1], detail::precedence(e.kids[1]) <= 2);
        case K::pow: {
            const Expr& b = e.kids[0];
            // u^-1 as a plain power must not collapse into the u^-1 token
            const bool paren = detail::precedence(b) < 5 || (b.kind == K::u && e.exponent == -1);
            return wrap(b, paren) + "^" + std::to_string(e.exponent);
        }
    }
    return "?";
}

/// Exact value in the algebra; negative powers need an invertible base.
inline AlgebraElement evaluate(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::num: return AlgebraElement(ScalarQ(GaussRational(e.value)));
        case K::imag: return AlgebraElement(ScalarQ::i());
        case K::s: return AlgebraElement(ScalarQ::s(1));
        case K::q: return AlgebraElement(ScalarQ::s(2));
        case K::p: return AlgebraElement::p();
        case K::x: return AlgebraElement::x();
        case K::u: return AlgebraElement::u(1);
        case K::u_inv: return AlgebraElement::u(-1);
        case K::neg: return -evaluate(e.kids[0]);
        case K::add: return evaluate(e.kids[0]) + evaluate(e.kids[1]);
        case K::sub: return evaluate(e.kids[0]) - evaluate(e.kids[1]);
        case K::mul: return evaluate(e.kids[0]) * evaluate(e.kids[1]);
        case K::pow: {
            AlgebraElement b = evaluate(e.kids[0]);
            if (e.exponent < 0) return power(inverse(b), -e.exponent);
            return power(b, e.exponent);
        }
    }
    throw std::logic_error("unknown expression node");
}

/// Parses, reduces and prints the normal form.
inline std::string normal_form(std::string_view text) { return evaluate(parse_expression(text)).str(); }

}  // namespace qheis
