#include "qheis/expression.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qheis;

namespace {

Expr random_tree(std::mt19937_64& rng, int depth) {
    using K = Expr::Kind;
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 12 : 7);
    const int k = pick(rng);
    switch (k) {
        case 0: return Expr::number(Rational(std::uniform_int_distribution<int>(0, 20)(rng),
                                             std::uniform_int_distribution<int>(1, 6)(rng)));
        case 1: return Expr::leaf(K::imag);
        case 2: return Expr::leaf(K::s);
        case 3: return Expr::leaf(K::q);
        case 4: return Expr::leaf(K::p);
        case 5: return Expr::leaf(K::x);
        case 6: return Expr::leaf(K::u);
        case 7: return Expr::leaf(K::u_inv);
        case 8: return Expr::unary(K::neg, random_tree(rng, depth - 1));
        case 9: return Expr::binary(K::add, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 10: return Expr::binary(K::sub, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 11: return Expr::binary(K::mul, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        default: return Expr::power(random_tree(rng, depth - 1), std::uniform_int_distribution<int>(-3, 3)(rng));
    }
}

}  // namespace

TEST(Expression, DefiningRelationReducesToZero) {
    EXPECT_EQ(normal_form("p*x - s^2*x*p - i*(s^3 - s^-1)*u"), "0");
    EXPECT_EQ(normal_form("p*x - q*x*p - i*(s^3 - s^-1)*u"), "0");
}

TEST(Expression, CommutatorValue) {
    const AlgebraElement expect = AlgebraElement::u(1).scaled(ScalarQ::i() * (ScalarQ::s(3) - ScalarQ::s(-1)));
    EXPECT_EQ(evaluate(parse_expression("p*x - s^2*x*p")), expect);
}

TEST(Expression, UnicodeMinus) {
    EXPECT_EQ(normal_form("p*x \xE2\x88\x92 s^2*x*p \xE2\x88\x92 i*(s^3 \xE2\x88\x92 s^\xE2\x88\x92" "1)*u"), "0");
    EXPECT_EQ(parse_expression("u^\xE2\x88\x92" "1"), Expr::leaf(Expr::Kind::u_inv));
}

TEST(Expression, UInverseToken) {
    using K = Expr::Kind;
    EXPECT_EQ(parse_expression("u^-1"), Expr::leaf(K::u_inv));
    EXPECT_EQ(parse_expression("u^-12"), Expr::power(Expr::leaf(K::u), -12));
    EXPECT_EQ(parse_expression("u^-1^2"), Expr::power(Expr::leaf(K::u_inv), 2));
    EXPECT_EQ(evaluate(parse_expression("u*u^-1")), AlgebraElement(1));
    EXPECT_EQ(evaluate(parse_expression("(u)^-1")), AlgebraElement::u(-1));
}

TEST(Expression, PrecedenceAndAssociativity) {
    using K = Expr::Kind;
    const Expr p = Expr::leaf(K::p), x = Expr::leaf(K::x), u = Expr::leaf(K::u);
    EXPECT_EQ(parse_expression("p - x - u"), Expr::binary(K::sub, Expr::binary(K::sub, p, x), u));
    EXPECT_EQ(parse_expression("p + x*u"), Expr::binary(K::add, p, Expr::binary(K::mul, x, u)));
    EXPECT_EQ(parse_expression("-x^2"), Expr::unary(K::neg, Expr::power(x, 2)));
    EXPECT_EQ(parse_expression("  3/6 "), Expr::number(Rational(1, 2)));
}

TEST(Expression, SyntaxErrorOffsets) {
    try {
        parse_expression("p +");
        FAIL() << "expected a syntax error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 3u);
        EXPECT_FALSE(e.expected().empty());
        EXPECT_NE(std::string(e.what()).find("offset 3"), std::string::npos);
    }
    auto offset_of = [](const char* text) {
        try {
            parse_expression(text);
        } catch (const ParseError& e) {
            return static_cast<long>(e.offset());
        }
        return -1L;
    };
    EXPECT_EQ(offset_of("(p"), 2);
    EXPECT_EQ(offset_of("p x"), 2);
    EXPECT_EQ(offset_of("p^"), 2);
    EXPECT_EQ(offset_of("1/0"), 2);
    EXPECT_EQ(offset_of("y"), 0);
    EXPECT_EQ(offset_of(""), 0);
}

TEST(Expression, NonInvertiblePowerFails) {
    EXPECT_THROW(evaluate(parse_expression("p^-1")), std::domain_error);
    EXPECT_EQ(evaluate(parse_expression("(2*i*s)^-1")), AlgebraElement(ScalarQ(GaussRational(0, Rational(-1, 2)), -1)));
}

TEST(Expression, RoundTripRandomTrees) {
    std::mt19937_64 rng(2024);
    for (int n = 0; n < 500; ++n) {
        const Expr e = random_tree(rng, 4);
        const std::string text = print_expression(e);
        Expr back;
        ASSERT_NO_THROW(back = parse_expression(text)) << text;
        EXPECT_EQ(back, e) << text;
        EXPECT_EQ(print_expression(back), text);
    }
}

TEST(Expression, NormalFormReparses) {
    // printed normal forms are themselves valid input
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int n = 0; n < 200 && checked < 60; ++n) {
        const Expr e = random_tree(rng, 3);
        AlgebraElement v;
        try {
            v = evaluate(e);
        } catch (const std::domain_error&) {
            continue;
        }
        EXPECT_EQ(evaluate(parse_expression(v.str())), v) << v.str();
        ++checked;
    }
    EXPECT_GE(checked, 30);
}
