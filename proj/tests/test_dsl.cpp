#include <doctest.h>

#include <cmath>
#include <limits>

#include "subgeom/dsl.hpp"
#include "subgeom/rng.hpp"

using namespace subgeom;
using namespace subgeom::dsl;

namespace {

// Random trees that stay smooth on the whole line: denominators, log and sqrt
// arguments are shifted squares.
NodePtr random_tree(Rng& rng, int depth) {
    if (depth == 0 || rng.uniform() < 0.2)
        return rng.uniform() < 0.5 ? make_var() : make_const(std::round(rng.uniform(-2, 2) * 100) / 100);
    auto sub = [&] { return random_tree(rng, depth - 1); };
    auto shifted_square = [&] { return make_binary(Op::Add, make_const(1), make_binary(Op::Pow, sub(), make_const(2))); };
    switch (rng.uniform_int(0, 11)) {
        case 0: return make_binary(Op::Add, sub(), sub());
        case 1: return make_binary(Op::Sub, sub(), sub());
        case 2: return make_binary(Op::Mul, sub(), sub());
        case 3: return make_binary(Op::Div, sub(), shifted_square());
        case 4: return make_binary(Op::Pow, sub(), make_const(rng.uniform_int(2, 3)));
        case 5: return make_binary(Op::Pow, shifted_square(), make_unary(Op::Sin, sub()));
        case 6: return make_unary(Op::Neg, sub());
        case 7: return make_unary(Op::Sin, sub());
        case 8: return make_unary(Op::Cos, sub());
        case 9: return make_unary(Op::Exp, make_unary(Op::Sin, sub()));
        case 10: return make_unary(Op::Log, shifted_square());
        default: return make_unary(Op::Sqrt, shifted_square());
    }
}

// Ridders extrapolation of a central difference quotient in h^2. A fixed step is
// too coarse for trees like cos(exp(sin x)^6), which oscillate on a 1e-3 scale.
template <class Quotient>
std::pair<double, double> ridders_from(Quotient q, double h0) {
    constexpr int kTable = 12;
    constexpr double kShrink = 1.4, kShrink2 = kShrink * kShrink;
    double a[kTable][kTable];
    double h = h0, best = q(h), err = std::numeric_limits<double>::infinity();
    a[0][0] = best;
    for (int i = 1; i < kTable; ++i) {
        h /= kShrink;
        a[0][i] = q(h);
        double fac = kShrink2;
        for (int j = 1; j <= i; ++j) {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1);
            fac *= kShrink2;
            const double e = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
            if (e <= err) {
                err = e;
                best = a[j][i];
            }
        }
        if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2 * err) break;
    }
    return {best, err};
}

// Several starting steps; keep the estimate with the smallest error bound.
template <class Quotient>
double ridders(Quotient q, double scale) {
    std::pair<double, double> best{0.0, std::numeric_limits<double>::infinity()};
    for (double h0 : {1e-1, 1e-2, 1e-3}) {
        const auto r = ridders_from(q, h0 * scale);
        if (r.second < best.second) best = r;
    }
    return best.first;
}

}  // namespace

TEST_CASE("parser examples") {
    const Expr e = parse("u*cos(u)");
    CHECK(e.variable() == "u");
    const Expr expected(make_binary(Op::Mul, make_var(), make_unary(Op::Cos, make_var())), "u");
    CHECK(e == expected);

    SUBCASE("second identifier is unknown") {
        try {
            parse("a+b*c");
            FAIL("expected an error");
        } catch (const UnknownIdentifierError& err) {
            CHECK(err.name() == "b");
        }
    }
    SUBCASE("syntax error offset") {
        try {
            parse("2*^x");
            FAIL("expected an error");
        } catch (const ParseError& err) {
            CHECK(err.offset() == 2);
        }
    }
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("sin(x"), ParseError);
    CHECK_THROWS_AS(parse("foo(x)"), ParseError);
}

TEST_CASE("precedence and associativity") {
    CHECK(parse("2^3^2")(0) == doctest::Approx(512));
    CHECK(parse("-2^2")(0) == doctest::Approx(-4));
    CHECK(parse("8/4/2")(0) == doctest::Approx(1));
    CHECK(parse("1-2-3")(0) == doctest::Approx(-4));
    CHECK(parse("2+3*4")(0) == doctest::Approx(14));
    CHECK(parse("x*-x")(3) == doctest::Approx(-9));
}

TEST_CASE("jet values by hand") {
    auto check = [](const char* src, double x, double v, double d1, double d2) {
        const Jet2Scalar j = eval_jet2(parse(src), x);
        CHECK(j.value == doctest::Approx(v).epsilon(1e-14));
        CHECK(j.d1 == doctest::Approx(d1).epsilon(1e-14));
        CHECK(j.d2 == doctest::Approx(d2).epsilon(1e-14));
    };
    check("sin(x)", 0, 0, 1, 0);
    check("x^2", 3, 9, 6, 2);
    check("1/(1+x^2)", 1, 0.5, -0.5, 0.5);
    check("exp(2*x)", 0, 1, 2, 4);
    check("log(x)", 2, std::log(2.0), 0.5, -0.25);
    check("sqrt(x)", 4, 2, 0.25, -1.0 / 32);
    check("x^x", 1, 1, 1, 2);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(eval_jet2(parse("1/x"), 0), DomainError);
    CHECK_THROWS_AS(eval_jet2(parse("log(x)"), -1), DomainError);
    CHECK_THROWS_AS(eval_jet2(parse("sqrt(x)"), -1), DomainError);
    CHECK_THROWS_AS(parse("log(x)")(0), DomainError);
}

TEST_CASE("jets of 1000 random trees match central differences") {
    Rng rng(11);
    int tested = 0, skipped = 0;
    while (tested < 1000) {
        const Expr e(random_tree(rng, 6), "x");
        const double x = rng.uniform(-1.5, 1.5);
        const Jet2Scalar j = eval_jet2(e, x);
        // very large values make any difference quotient meaningless; count them
        if (!(std::abs(j.value) < 1e4)) {
            ++skipped;
            continue;
        }
        const double fd1 = ridders(
            [&](double h) { return (e(x + h) - e(x - h)) / (2 * h); }, 1 + std::abs(x));
        const double fd2 = ridders(
            [&](double h) { return (e(x + h) - 2 * e(x) + e(x - h)) / (h * h); }, 1 + std::abs(x));
        CHECK(j.value == doctest::Approx(e(x)).epsilon(1e-13));
        CHECK(std::abs(j.d1 - fd1) <= 1e-6 * (1 + std::abs(j.d1)));
        CHECK(std::abs(j.d2 - fd2) <= 1e-4 * (1 + std::abs(j.d2)));
        ++tested;
    }
    MESSAGE("skipped ", skipped, " samples with |value| >= 1e4");
    CHECK(skipped < 100);
}

TEST_CASE("parse after print is stable") {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const Expr built(random_tree(rng, 6), "x");
        // negative constants come back as negated literals, so compare from the first parse on
        const Expr first = parse(print(built), "x");
        const Expr second = parse(print(first), "x");
        if (!(first == second)) FAIL_CHECK("round trip changed ", print(first));
        CHECK(print(second) == print(first));
        const double x = rng.uniform(-1, 1);
        CHECK(first(x) == doctest::Approx(built(x)).epsilon(1e-12));
    }
}
