#include <doctest.h>

#include <random>
#include <set>

#include "sbsos/bench.hpp"
#include "sbsos/certificate.hpp"

using namespace sbsos;

TEST_CASE("enumerate_pairs: structural sizes") {
    std::vector<int> J51(51);
    for (int j = 0; j < 51; ++j) J51[j] = j;
    CHECK(enumerate_pairs(J51, 1).size() == 103);

    std::vector<int> J101(101);
    for (int j = 0; j < 101; ++j) J101[j] = j;
    CHECK(enumerate_pairs(J101, 2).size() == 20706);

    CHECK(enumerate_pairs({0, 3, 4}, 0).size() == 1);
    CHECK(enumerate_pairs({0, 3, 4}, 0)[0].alpha.is_constant());
}

TEST_CASE("enumerate_pairs: exhaustive count and uniqueness for small sizes") {
    std::mt19937_64 rng(12);
    for (int ml = 1; ml <= 8; ++ml)
        for (int d = 0; d <= 3; ++d) {
            std::vector<int> J(ml);
            for (int j = 0; j < ml; ++j) J[j] = j * 2;  // sparse indices
            const auto pairs = enumerate_pairs(J, d);
            CHECK(static_cast<long long>(pairs.size()) == binomial(2 * ml + d, d));
            std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
            for (const PairIndex& p : pairs) {
                CHECK(p.total_degree() <= d);
                seen.insert({p.alpha.dense(2 * ml), p.beta.dense(2 * ml)});
            }
            CHECK(seen.size() == pairs.size());
        }
}

TEST_CASE("h_poly: unit pair, x(1-x), degree bound") {
    const std::vector<Polynomial> g = {Polynomial::variable(1, 0)};

    const Polynomial one = h_poly(PairIndex{}, g);
    CHECK(one.term_count() == 1);
    CHECK(one.constant_term() == 1.0);

    PairIndex both;
    both.alpha = Exponent::unit(0);
    both.beta = Exponent::unit(0);
    const Polynomial h = h_poly(both, g);  // x * (1 - x)
    CHECK(h.coeff(Exponent::unit(0)) == doctest::Approx(1.0));
    CHECK(h.coeff(Exponent::unit(0, 2)) == doctest::Approx(-1.0));

    std::mt19937_64 rng(5);
    const PopProblem qp = gen_qp({4, 4}, 1, 2, 3);
    int maxdeg_g = 0;
    for (const Polynomial& gj : qp.constraints) maxdeg_g = std::max(maxdeg_g, gj.degree());
    const auto pairs = enumerate_pairs(qp.pattern->cons_blocks[0], 2);
    for (std::size_t q = 0; q < pairs.size(); q += 7) {
        const Polynomial hp = h_poly(pairs[q], qp.constraints);
        CHECK(hp.degree() <= pairs[q].total_degree() * maxdeg_g);
    }
}

TEST_CASE("h_poly evaluates to the scalar product of factors") {
    const PopProblem qp = gen_qp({3, 3}, 1, 2, 9);
    const auto pairs = enumerate_pairs(qp.pattern->cons_blocks[1], 2);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 0.6);
    for (std::size_t q = 0; q < pairs.size(); q += 5) {
        const Polynomial hp = h_poly(pairs[q], qp.constraints);
        std::vector<double> x(qp.n);
        for (double& v : x) v = u(rng);
        double expect = 1.0;
        for (const auto& [j, p] : pairs[q].alpha.entries())
            for (int r = 0; r < p; ++r) expect *= qp.constraints[j].evaluate(x);
        for (const auto& [j, p] : pairs[q].beta.entries())
            for (int r = 0; r < p; ++r) expect *= 1.0 - qp.constraints[j].evaluate(x);
        CHECK(hp.evaluate(x) == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("h_poly support stays inside the owning block") {
    const PopProblem qp = gen_qp({5, 5}, 2, 2, 21);
    const SparsityPattern& pat = *qp.pattern;
    for (int l = 0; l < pat.num_blocks(); ++l) {
        const auto pairs = enumerate_pairs(pat.cons_blocks[l], 1);
        for (const PairIndex& pr : pairs) {
            const Polynomial hp = h_poly(pr, qp.constraints);
            for (int v : hp.support_vars())
                CHECK(std::find(pat.blocks[l].begin(), pat.blocks[l].end(), v) != pat.blocks[l].end());
        }
    }
}

TEST_CASE("dmax_degree") {
    Polynomial f2(1);
    f2.add_term(Exponent::unit(0, 2), 1.0);
    Polynomial f4(1);
    f4.add_term(Exponent::unit(0, 4), 1.0);
    Polynomial f6(1);
    f6.add_term(Exponent::unit(0, 6), 1.0);
    Polynomial g2(1);
    g2.add_term(Exponent::unit(0, 2), 1.0);
    Polynomial g1(1);
    g1.add_term(Exponent::unit(0), 1.0);

    CHECK(dmax_degree(f2, {g2}, 1, 1) == 2);
    CHECK(dmax_degree(f4, {g2}, 2, 2) == 4);
    CHECK(dmax_degree(f6, {g2}, 3, 3) == 6);
    CHECK(dmax_degree(f2, {g1}, 5, 1) == 5);
    CHECK_THROWS_AS(dmax_degree(f2, {g1}, 0, 1), std::invalid_argument);
}
