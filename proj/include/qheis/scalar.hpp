#pragma once

// Exact coefficient ring: Laurent polynomials in s = q^{1/2} with
// Gaussian-rational coefficients.

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cmath>
#include <compare>
#include <map>
#include <sstream>
#include <string>
#include <utility>

namespace qheis {

using Rational = boost::multiprecision::cpp_rational;

/// a + b i with a, b rational.
class GaussRational {
public:
    GaussRational() = default;
    GaussRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}
    GaussRational(long long re) : re_(re), im_(0) {}

    static GaussRational i() { return {0, 1}; }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }

    GaussRational conj() const { return {re_, -im_}; }

    GaussRational operator-() const { return {-re_, -im_}; }

    GaussRational& operator+=(const GaussRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussRational& operator-=(const GaussRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussRational& operator*=(const GaussRational& o) {
        Rational r = re_ * o.re_ - im_ * o.im_;
        Rational i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }

    friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
    friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
    friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }

    /// Throws std::domain_error on zero.
    GaussRational inverse() const {
        Rational n = re_ * re_ + im_ * im_;
        if (n == 0) throw std::domain_error("division by zero in GaussRational");
        return {re_ / n, -im_ / n};
    }

    friend bool operator==(const GaussRational&, const GaussRational&) = default;

    std::complex<double> to_complex() const {
        return {static_cast<double>(re_), static_cast<double>(im_)};
    }

    /// Parseable text: "3/4", "-i", "(1/2 + 3*i)".
    std::string str() const {
        auto rat = [](const Rational& r) {
            std::ostringstream os;
            os << r;
            return os.str();
        };
        if (im_ == 0) return rat(re_);
        std::string imag;
        if (im_ == 1) imag = "i";
        else if (im_ == -1) imag = "-i";
        else imag = rat(im_) + "*i";
        if (re_ == 0) return imag;
        std::string out = "(" + rat(re_);
        if (im_ < 0) {
            out += " - ";
            out += (im_ == -1) ? "i" : rat(-im_) + "*i";
        } else {
            out += " + " + imag;
        }
        return out + ")";
    }

private:
    Rational re_{0};
    Rational im_{0};
};

/// Sum of c_k s^k; zero coefficients are never stored.
class ScalarQ {
public:
    using Terms = std::map<int, GaussRational>;

    ScalarQ() = default;
    ScalarQ(GaussRational c, int power = 0) { add_term(power, std::move(c)); }
    ScalarQ(long long c) : ScalarQ(GaussRational(c)) {}

    static ScalarQ s(int power = 1) { return ScalarQ(GaussRational(1), power); }
    static ScalarQ i() { return ScalarQ(GaussRational::i()); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(int power, const GaussRational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(power, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    ScalarQ& operator+=(const ScalarQ& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    ScalarQ& operator-=(const ScalarQ& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    ScalarQ operator-() const {
        ScalarQ r;
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }

    friend ScalarQ operator+(ScalarQ a, const ScalarQ& b) { return a += b; }
    friend ScalarQ operator-(ScalarQ a, const ScalarQ& b) { return a -= b; }
    friend ScalarQ operator*(const ScalarQ& a, const ScalarQ& b) {
        ScalarQ r;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) r.add_term(ka + kb, ca * cb);
        return r;
    }
    ScalarQ& operator*=(const ScalarQ& o) { return *this = *this * o; }

    friend bool operator==(const ScalarQ&, const ScalarQ&) = default;

    /// Complex conjugation; s is real.
    ScalarQ conj() const {
        ScalarQ r;
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, c.conj());
        return r;
    }

    /// s -> s^{-1}.
    ScalarQ invert_root() const {
        ScalarQ r;
        for (const auto& [k, c] : terms_) r.terms_.emplace(-k, c);
        return r;
    }

    /// A single term c s^k with c != 0 is a unit of the ring.
    bool is_unit() const { return terms_.size() == 1; }

    ScalarQ inverse() const {
        if (!is_unit()) throw std::domain_error("scalar is not a unit of the Laurent ring");
        const auto& [k, c] = *terms_.begin();
        return ScalarQ(c.inverse(), -k);
    }

    ScalarQ pow(int n) const {
        if (n < 0) return inverse().pow(-n);
        ScalarQ r(1);
        for (int k = 0; k < n; ++k) r *= *this;
        return r;
    }

    /// Numeric value at s = root (root = sqrt(q) in the lattice models).
    std::complex<double> evaluate(double root) const {
        std::complex<double> acc{0.0, 0.0};
        for (const auto& [k, c] : terms_) acc += c.to_complex() * std::pow(root, k);
        return acc;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            std::string t = term_str(it->first, it->second);
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
    static std::string term_str(int k, const GaussRational& c) {
        std::string power = (k == 1) ? "s" : "s^" + std::to_string(k);
        if (k == 0) return c.str();
        if (c == GaussRational(1)) return power;
        if (c == GaussRational(-1)) return "-" + power;
        return c.str() + "*" + power;
    }

    Terms terms_;
};

}  // namespace qheis
