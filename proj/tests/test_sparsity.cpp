#include <doctest.h>

#include <numeric>
#include <random>

#include "sbsos/bench.hpp"
#include "sbsos/sparsity.hpp"

using namespace sbsos;

namespace {

std::vector<int> range_block(int lo, int hi) {  // inclusive bounds, 0-based
    std::vector<int> b(hi - lo + 1);
    std::iota(b.begin(), b.end(), lo);
    return b;
}

}  // namespace

TEST_CASE("rip_check: banded pair, 3-cycle, single block") {
    CHECK(rip_check({range_block(0, 49), range_block(10, 59)}).ok);

    // I1={1,2}, I2={2,3}, I3={1,3}: the third block breaks the RIP
    const RipResult cyc = rip_check({{0, 1}, {1, 2}, {0, 2}});
    CHECK(!cyc.ok);
    CHECK(cyc.first_failing_block == 2);

    CHECK(rip_check({range_block(0, 9)}).ok);
}

TEST_CASE("banded_pattern: overlap arithmetic and errors") {
    const SparsityPattern two = banded_pattern({50, 50}, 40);
    CHECK(two.n == 60);
    CHECK(two.blocks[0] == range_block(0, 49));
    CHECK(two.blocks[1] == range_block(10, 59));

    CHECK(banded_pattern(std::vector<int>(11, 10), 2).n == 90);

    const SparsityPattern disjoint = banded_pattern({3, 4, 2}, 0);
    CHECK(disjoint.n == 9);
    CHECK(disjoint.blocks[1] == range_block(3, 6));

    CHECK_THROWS_AS(banded_pattern({5, 5}, 5), std::invalid_argument);
    CHECK_THROWS_AS(banded_pattern({5, 5}, -1), std::invalid_argument);
}

TEST_CASE("banded patterns always satisfy the RIP") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const int p = 1 + static_cast<int>(rng() % 6);
        const int o = static_cast<int>(rng() % 4);
        std::vector<int> nvec(p);
        for (int& v : nvec) v = o + 1 + static_cast<int>(rng() % 5);
        CHECK(rip_check(banded_pattern(nvec, o).blocks).ok);
    }
}

TEST_CASE("validate: trivial pattern passes, broken patterns report failures") {
    const PopProblem qp = gen_qp({10, 10}, 2, 2, 7);
    REQUIRE(qp.pattern.has_value());
    CHECK(validate(*qp.pattern, qp).ok);

    PopProblem trivial_prob = qp;
    trivial_prob.pattern = SparsityPattern::trivial(qp.n, qp.num_constraints());
    CHECK(validate(*trivial_prob.pattern, trivial_prob).ok);

    // drop a variable from every block: cover fails
    SparsityPattern broken = *qp.pattern;
    for (auto& block : broken.blocks)
        block.erase(std::remove(block.begin(), block.end(), 0), block.end());
    const ValidationReport rep = validate(broken, qp);
    CHECK(!rep.ok);
    CHECK(!rep.failures.empty());

    // 3-cycle blocks on a quadratic coupling all three pairs
    PopProblem tri;
    tri.n = 3;
    tri.objective = Polynomial(3);
    tri.objective.add_term(Exponent::unit(0).plus(Exponent::unit(1)), 1.0);
    tri.objective.add_term(Exponent::unit(1).plus(Exponent::unit(2)), 1.0);
    tri.objective.add_term(Exponent::unit(0).plus(Exponent::unit(2)), 1.0);
    SparsityPattern cyc;
    cyc.n = 3;
    cyc.m = 0;
    cyc.blocks = {{0, 1}, {1, 2}, {0, 2}};
    cyc.cons_blocks = {{}, {}, {}};
    const ValidationReport rep2 = validate(cyc, tri);
    CHECK(!rep2.ok);
}

TEST_CASE("detect_pattern: path graph, dense coupling, Rosenbrock blocks") {
    PopProblem path;
    path.n = 3;
    path.objective = Polynomial(3);
    path.objective.add_term(Exponent::unit(0).plus(Exponent::unit(1)), 1.0);
    path.objective.add_term(Exponent::unit(1).plus(Exponent::unit(2)), 1.0);
    const SparsityPattern pat = detect_pattern(path);
    REQUIRE(pat.num_blocks() == 2);
    CHECK(pat.blocks[0].size() == 2);
    CHECK(pat.blocks[1].size() == 2);
    CHECK(validate(pat, path).ok);

    PopProblem dense;
    dense.n = 4;
    dense.objective = Polynomial(4);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            dense.objective.add_term(Exponent::unit(i).plus(Exponent::unit(j)), 1.0);
    const SparsityPattern dp = detect_pattern(dense);
    CHECK(dp.num_blocks() == 1);
    CHECK(dp.blocks[0].size() == 4);

    PopProblem ros = gen_test_function(BenchFamily::GenRosenbrock, 12);
    ros.pattern.reset();
    ros.constraints.clear();  // pattern of the objective alone
    const SparsityPattern rp = detect_pattern(ros);
    CHECK(rp.num_blocks() == 11);
    for (const auto& block : rp.blocks) CHECK(block.size() == 2);
    CHECK(validate(rp, ros).ok);
}

TEST_CASE("detect_pattern output validates on random banded problems") {
    for (std::uint64_t seed : {1, 2, 3}) {
        PopProblem qp = gen_qp({6, 6, 6}, 2, 2, seed);
        qp.pattern.reset();
        const SparsityPattern pat = detect_pattern(qp);
        CHECK(validate(pat, qp).ok);
    }
}

TEST_CASE("decompose_objective: block split, tie break, exact reassembly") {
    PopProblem prob;
    prob.n = 3;
    prob.objective = Polynomial(3);
    prob.objective.add_term(Exponent::unit(0, 2), 1.0);
    prob.objective.add_term(Exponent::unit(2, 2), 1.0);
    SparsityPattern pat;
    pat.n = 3;
    pat.m = 0;
    pat.blocks = {{0, 1}, {1, 2}};
    pat.cons_blocks = {{}, {}};
    const auto parts = decompose_objective(prob, pat);
    CHECK(parts[0].coeff(Exponent::unit(0, 2)) == 1.0);
    CHECK(parts[1].coeff(Exponent::unit(2, 2)) == 1.0);

    prob.objective.add_term(Exponent::unit(1, 2), 5.0);  // x2^2 fits both: block 1 wins
    const auto parts2 = decompose_objective(prob, pat);
    CHECK(parts2[0].coeff(Exponent::unit(1, 2)) == 5.0);
    CHECK(parts2[1].coeff(Exponent::unit(1, 2)) == 0.0);

    const PopProblem qp = gen_qp({8, 8}, 3, 2, 11);
    const auto split = decompose_objective(qp, *qp.pattern);
    Polynomial sum(qp.n);
    for (const Polynomial& part : split) sum += part;
    CHECK(approx_equal(sum, qp.objective, 0.0));
}

TEST_CASE("add_ball_constraints: formula, count, feasible set preserved") {
    PopProblem prob;
    prob.n = 2;
    prob.objective = Polynomial(2);
    prob.constraints = {Polynomial::variable(2, 0), Polynomial::variable(2, 1)};
    SparsityPattern pat;
    pat.n = 2;
    pat.m = 2;
    pat.blocks = {{0, 1}};
    pat.cons_blocks = {{0, 1}};
    prob.pattern = pat;

    const PopProblem with_ball = add_ball_constraints(prob, {2.0});
    REQUIRE(with_ball.num_constraints() == 3);
    const Polynomial& ball = with_ball.constraints[2];
    CHECK(ball.constant_term() == 1.0);
    CHECK(ball.coeff(Exponent::unit(0, 2)) == doctest::Approx(-0.5));
    CHECK(ball.coeff(Exponent::unit(1, 2)) == doctest::Approx(-0.5));
    CHECK(with_ball.pattern->cons_blocks[0] == std::vector<int>{0, 1, 2});

    // with M_l = |I_l|, the added constraint stays within [0, 1] on the box
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x{u(rng), u(rng)};
        const double val = with_ball.constraints[2].evaluate(x);
        CHECK(val >= -1e-12);
        CHECK(val <= 1.0 + 1e-12);
    }

    CHECK_THROWS_AS(add_ball_constraints(prob, {-1.0}), std::invalid_argument);
}

TEST_CASE("scale_constraints: division, identity, membership preserved") {
    PopProblem prob;
    prob.n = 1;
    prob.objective = Polynomial(1);
    Polynomial g(1);
    g.add_term(Exponent::unit(0), 2.0);
    prob.constraints = {g};

    const PopProblem scaled = scale_constraints(prob, {2.0});
    CHECK(scaled.constraints[0].coeff(Exponent::unit(0)) == doctest::Approx(1.0));

    const PopProblem same = scale_constraints(prob, {1.0});
    CHECK(approx_equal(same.constraints[0], g));

    // membership in {g >= 0} is preserved by positive scaling
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x{u(rng)};
        const bool before = prob.constraints[0].evaluate(x) >= 0;
        const bool after = scaled.constraints[0].evaluate(x) >= 0;
        CHECK(before == after);
    }

    CHECK_THROWS_AS(scale_constraints(prob, {0.0}), std::invalid_argument);
}

TEST_CASE("assign_constraints: supporting-block modes") {
    const PopProblem qp = gen_qp({4, 4}, 1, 2, 5);  // n=7, blocks {0..3},{3..6}
    SparsityPattern pat = banded_pattern({4, 4}, 1);
    assign_constraints(pat, qp, ConstraintAssignment::AllSupportingBlocks);
    // the overlap variable's bound constraint joins both blocks
    int shared = 0;
    for (int j : pat.cons_blocks[0])
        for (int j2 : pat.cons_blocks[1])
            if (j == j2) ++shared;
    CHECK(shared == 1);

    SparsityPattern first = banded_pattern({4, 4}, 1);
    assign_constraints(first, qp, ConstraintAssignment::FirstSupportingBlock);
    int total = 0;
    for (const auto& jl : first.cons_blocks) total += static_cast<int>(jl.size());
    CHECK(total == qp.num_constraints());
}
