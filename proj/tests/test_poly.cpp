#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "sbsos/poly.hpp"

using namespace sbsos;

namespace {

Polynomial x_poly(int n, int var) { return Polynomial::variable(n, var); }

// independent oracle: dense recursive Horner evaluation over the last variable
double horner_eval(const Polynomial& p, const std::vector<double>& point, int var = 0) {
    if (var == p.num_vars()) return p.constant_term();
    // collect coefficient polynomials of x_var^t
    int maxp = 0;
    for (const auto& [e, c] : p.terms()) maxp = std::max(maxp, e.power(var));
    std::vector<Polynomial> coefs(maxp + 1, Polynomial(p.num_vars()));
    for (const auto& [e, c] : p.terms()) {
        const int pw = e.power(var);
        std::vector<std::pair<int, int>> rest;
        for (const auto& [v, q] : e.entries())
            if (v != var) rest.emplace_back(v, q);
        coefs[pw].add_term(Exponent(std::move(rest)), c);
    }
    double acc = 0.0;
    for (int t = maxp; t >= 0; --t) acc = acc * point[var] + horner_eval(coefs[t], point, var + 1);
    return acc;
}

Polynomial random_poly(int n, int deg, int terms, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> var(0, n - 1);
    std::uniform_int_distribution<int> dd(0, deg);
    Polynomial p(n);
    for (int t = 0; t < terms; ++t) {
        Exponent e;
        const int td = dd(rng);
        for (int q = 0; q < td; ++q) e = e.plus(Exponent::unit(var(rng)));
        p.add_term(e, coef(rng));
    }
    return p;
}

}  // namespace

TEST_CASE("add: cancellation, identity, merge") {
    Polynomial a(1);
    a.add_term(Exponent::unit(0, 2), 1.0);
    a.add_term(Exponent{}, 1.0);  // x^2 + 1
    const Polynomial b = Polynomial::constant(1, -1.0);
    const Polynomial sum = add(a, b);
    CHECK(sum.term_count() == 1);
    CHECK(sum.coeff(Exponent::unit(0, 2)) == 1.0);

    const Polynomial zero(1);
    CHECK(approx_equal(add(a, zero), a));

    Polynomial p(2), q(2);
    p.add_term(Exponent::unit(0), 1.0);
    p.add_term(Exponent::unit(1), 1.0);
    q.add_term(Exponent::unit(0), 1.0);
    q.add_term(Exponent::unit(1), -1.0);
    const Polynomial two_x1 = add(p, q);
    CHECK(two_x1.term_count() == 1);
    CHECK(two_x1.coeff(Exponent::unit(0)) == 2.0);
}

TEST_CASE("add/mul reject mismatched variable counts") {
    CHECK_THROWS_AS(add(Polynomial(2), Polynomial(3)), std::invalid_argument);
    CHECK_THROWS_AS(mul(Polynomial(2), Polynomial(3)), std::invalid_argument);
}

TEST_CASE("mul: binomial square, identity, difference of squares") {
    const Polynomial xp1 = add(x_poly(1, 0), Polynomial::constant(1, 1.0));
    const Polynomial sq = mul(xp1, xp1);
    CHECK(sq.coeff(Exponent::unit(0, 2)) == 1.0);
    CHECK(sq.coeff(Exponent::unit(0)) == 2.0);
    CHECK(sq.constant_term() == 1.0);

    std::mt19937_64 rng(7);
    const Polynomial p = random_poly(3, 3, 8, rng);
    CHECK(approx_equal(mul(p, Polynomial::constant(3, 1.0)), p));

    const Polynomial diff = mul(sub(x_poly(2, 0), x_poly(2, 1)), add(x_poly(2, 0), x_poly(2, 1)));
    Polynomial expect(2);
    expect.add_term(Exponent::unit(0, 2), 1.0);
    expect.add_term(Exponent::unit(1, 2), -1.0);
    CHECK(approx_equal(diff, expect));
}

TEST_CASE("pow: zeroth power, (1-x)^2, binomial coefficients") {
    CHECK(approx_equal(pow(x_poly(1, 0), 0), Polynomial::constant(1, 1.0)));

    const Polynomial one_minus_x = sub(Polynomial::constant(1, 1.0), x_poly(1, 0));
    const Polynomial sq = pow(one_minus_x, 2);
    CHECK(sq.constant_term() == 1.0);
    CHECK(sq.coeff(Exponent::unit(0)) == -2.0);
    CHECK(sq.coeff(Exponent::unit(0, 2)) == 1.0);

    const Polynomial cube = pow(add(x_poly(2, 0), x_poly(2, 1)), 3);
    CHECK(cube.term_count() == 4);
    CHECK(cube.coeff(Exponent::unit(0, 2).plus(Exponent::unit(1))) == 3.0);
}

TEST_CASE("evaluate: quadratic at 1, zero polynomial, Horner oracle") {
    Polynomial p(1);
    p.add_term(Exponent::unit(0, 2), 1.0);
    p.add_term(Exponent::unit(0), 2.0);
    p.add_term(Exponent{}, 1.0);
    const std::vector<double> one{1.0};
    CHECK(p.evaluate(one) == doctest::Approx(4.0));

    const std::vector<double> pt{0.37};
    CHECK(Polynomial(1).evaluate(pt) == 0.0);

    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const Polynomial q = random_poly(n, 4, 12, rng);
        std::vector<double> point(n);
        for (double& v : point) v = coord(rng);
        const double direct = q.evaluate(point);
        const double oracle = horner_eval(q, point);
        CHECK(direct == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("support_vars") {
    Polynomial p(4);
    p.add_term(Exponent::unit(1).plus(Exponent::unit(3)), 1.0);
    p.add_term(Exponent::unit(3, 2), 1.0);
    CHECK(p.support_vars() == std::vector<int>{1, 3});

    CHECK(Polynomial::constant(2, 5.0).support_vars().empty());

    std::mt19937_64 rng(5);
    const Polynomial a = random_poly(5, 3, 6, rng);
    const Polynomial b = random_poly(5, 3, 6, rng);
    const auto sa = a.support_vars();
    const auto sb = b.support_vars();
    std::set<int> uni(sa.begin(), sa.end());
    uni.insert(sb.begin(), sb.end());
    for (int v : mul(a, b).support_vars()) CHECK(uni.count(v) == 1);
}

TEST_CASE("enumerate_monomials: counts, no duplicates, graded lex order") {
    CHECK(enumerate_monomials(2, 2).size() == 6);
    CHECK(enumerate_monomials(4, 2).size() == 15);
    const auto single = enumerate_monomials(1, 0);
    REQUIRE(single.size() == 1);
    CHECK(single[0].is_constant());

    for (int n : {1, 2, 3, 5})
        for (int d : {0, 1, 2, 3, 4}) {
            const auto monos = enumerate_monomials(n, d);
            CHECK(static_cast<long long>(monos.size()) == binomial(n + d, d));
            std::set<std::vector<int>> seen;
            for (const Exponent& e : monos) seen.insert(e.dense(n));
            CHECK(seen.size() == monos.size());
            for (std::size_t i = 1; i < monos.size(); ++i) CHECK(grlex_less(monos[i - 1], monos[i]));
        }

    // fixed prefix for n=2, d=2: 1, x1, x2, x1^2, x1 x2, x2^2
    const auto m22 = enumerate_monomials(2, 2);
    CHECK(m22[0].is_constant());
    CHECK(m22[1] == Exponent::unit(0));
    CHECK(m22[2] == Exponent::unit(1));
    CHECK(m22[3] == Exponent::unit(0, 2));
    CHECK(m22[4] == Exponent::unit(0).plus(Exponent::unit(1)));
    CHECK(m22[5] == Exponent::unit(1, 2));
}

TEST_CASE("add/mul commutative and associative on random triples") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const Polynomial a = random_poly(3, 3, 6, rng);
        const Polynomial b = random_poly(3, 3, 6, rng);
        const Polynomial c = random_poly(3, 3, 6, rng);
        CHECK(approx_equal(add(a, b), add(b, a), 0.0));
        CHECK(approx_equal(add(add(a, b), c), add(a, add(b, c)), 1e-15));
        CHECK(approx_equal(mul(a, b), mul(b, a), 1e-15));
        CHECK(approx_equal(mul(mul(a, b), c), mul(a, mul(b, c)), 1e-12));
    }
}

TEST_CASE("degree of product adds for nonzero polynomials") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        Polynomial a = random_poly(3, 3, 5, rng);
        Polynomial b = random_poly(3, 2, 5, rng);
        if (a.is_zero() || b.is_zero()) continue;
        CHECK(mul(a, b).degree() == a.degree() + b.degree());
    }
}

TEST_CASE("evaluate distributes over mul") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const Polynomial a = random_poly(3, 3, 8, rng);
        const Polynomial b = random_poly(3, 3, 8, rng);
        std::vector<double> point{coord(rng), coord(rng), coord(rng)};
        const double lhs = mul(a, b).evaluate(point);
        const double rhs = a.evaluate(point) * b.evaluate(point);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("binomial") {
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(6, 2) == 15);
    CHECK(binomial(52, 2) == 1326);
    CHECK(binomial(204, 2) == 20706);
    CHECK(binomial(103, 1) == 103);
}
