#include <doctest.h>

#include "sbsos/bench.hpp"
#include "sbsos/sdpbuild.hpp"

using namespace sbsos;

namespace {

struct TableRow {
    int overlap;
    int free_vars;
    int rows;
};

}  // namespace

TEST_CASE("sparse-bsos structural sizes match the banded QP reference table") {
    // n = (50,50), quadratic constraints, d = 1, k = 1
    const TableRow table[] = {
        {40, 1723, 3513}, {30, 993, 3148}, {20, 463, 2883},
        {10, 133, 2718},  {5, 43, 2673},   {1, 7, 2655},
    };
    for (const TableRow& row : table) {
        const PopProblem qp = gen_qp({50, 50}, row.overlap, 2, 1);
        const BuildResult build = build_sparse_bsos(qp, *qp.pattern, 1, 1);
        REQUIRE(build.status == BuildStatus::Ok);
        INFO("overlap ", row.overlap);
        CHECK(build.program.num_nonneg == 206);
        CHECK(build.program.psd_sides == std::vector<int>{51, 51});
        CHECK(build.program.num_free == row.free_vars);
        CHECK(build.program.num_rows() == row.rows);
    }
}

TEST_CASE("sparse-bsos structural sizes for the n = 90 linear-constraint instance") {
    const PopProblem qp = gen_qp(std::vector<int>(11, 10), 2, 1, 1);
    REQUIRE(qp.n == 90);
    REQUIRE(qp.num_constraints() == 101);

    // coarse single-block pattern
    SparsityPattern single = SparsityPattern::trivial(qp.n, qp.num_constraints());
    const BuildResult coarse = build_sparse_bsos(qp, single, 2, 1);
    REQUIRE(coarse.status == BuildStatus::Ok);
    CHECK(coarse.program.num_nonneg == 20706);
    CHECK(coarse.program.num_free == 2);
    CHECK(coarse.program.psd_sides == std::vector<int>{91});
    CHECK(coarse.program.num_rows() == 4187);

    // native banded pattern (11 x 10, overlap 2)
    const BuildResult fine = build_sparse_bsos(qp, *qp.pattern, 2, 1);
    REQUIRE(fine.status == BuildStatus::Ok);
    CHECK(fine.program.num_nonneg == 3036);
    CHECK(fine.program.num_free == 112);
    CHECK(fine.program.psd_sides == std::vector<int>(11, 11));
    CHECK(fine.program.num_rows() == 777);
}

TEST_CASE("dense-bsos delegates to the trivial pattern byte-for-byte") {
    const PopProblem qp = gen_qp({10, 10}, 2, 2, 123);
    const BuildResult dense = build_dense_bsos(qp, 1, 1);
    const BuildResult sparse =
        build_sparse_bsos(qp, SparsityPattern::trivial(qp.n, qp.num_constraints()), 1, 1);
    REQUIRE(dense.status == BuildStatus::Ok);
    CHECK(serialize(dense.program) == serialize(sparse.program));

    // nonneg count C(2m + d, d) for the trivial pattern
    const long long expected = binomial(2 * qp.num_constraints() + 1, 1);
    CHECK(dense.program.num_nonneg == expected);
}

TEST_CASE("reduce: disjoint blocks eliminate every non-constant coefficient") {
    const PopProblem qp = gen_qp({4, 4}, 0, 2, 17);
    const BuildResult build = build_sparse_bsos(qp, *qp.pattern, 1, 1);
    REQUIRE(build.status == BuildStatus::Ok);
    // survivors: t and one f^l_0 per block (the gamma = 0 row keeps them)
    CHECK(build.program.num_free == 1 + qp.pattern->num_blocks());
    for (const VariableLedger::Elimination& el : build.ledger.eliminated)
        CHECK(!el.gamma.is_constant());
    // eliminated values carry the original objective coefficients
    for (const VariableLedger::Elimination& el : build.ledger.eliminated)
        CHECK(el.value == doctest::Approx(qp.objective.coeff(el.gamma)));
}

TEST_CASE("sparse-put block sizes and infeasible orders") {
    // blocks of 2 variables with quadratic constraints, d = 2: Q0 side 6, Q_j side 3
    PopProblem prob = gen_qp({2, 2}, 1, 2, 5);
    const BuildResult put = build_sparse_put(prob, *prob.pattern, 2);
    REQUIRE(put.status == BuildStatus::Ok);
    REQUIRE(put.ledger.psd_roles.size() == put.program.psd_sides.size());
    for (std::size_t b = 0; b < put.program.psd_sides.size(); ++b) {
        if (put.ledger.psd_roles[b].constraint < 0) {
            CHECK(put.program.psd_sides[b] == 6);
        } else {
            // d_j = floor((2d - deg g_j)/2) = 1 for both linear and quadratic g_j
            CHECK(put.program.psd_sides[b] == 3);
        }
    }

    // quartic objective at d = 1 is an infeasible order
    const PopProblem quartic = gen_qp_quartic({3, 3}, 1, 2);
    const BuildResult inf = build_sparse_put(quartic, *quartic.pattern, 1);
    CHECK(inf.status == BuildStatus::InfeasibleOrder);

    // purely quadratic data at d = 1: all multiplier blocks are scalars
    const BuildResult d1 = build_sparse_put(prob, *prob.pattern, 1);
    REQUIRE(d1.status == BuildStatus::Ok);
    for (std::size_t b = 0; b < d1.program.psd_sides.size(); ++b)
        if (d1.ledger.psd_roles[b].constraint >= 0) CHECK(d1.program.psd_sides[b] == 1);
}

TEST_CASE("sparse-bsos flags unproducible objective monomials as infeasible order") {
    const PopProblem quartic = gen_qp_quartic({3, 3}, 1, 9);
    const BuildResult build = build_sparse_bsos(quartic, *quartic.pattern, 1, 1);
    CHECK(build.status == BuildStatus::InfeasibleOrder);
    // k = 2 covers degree 4
    const BuildResult ok = build_sparse_bsos(quartic, *quartic.pattern, 1, 2);
    CHECK(ok.status == BuildStatus::Ok);
}

TEST_CASE("builders reject invalid orders and patterns") {
    const PopProblem qp = gen_qp({3, 3}, 1, 2, 2);
    CHECK_THROWS_AS(build_sparse_bsos(qp, *qp.pattern, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_sparse_bsos(qp, *qp.pattern, 1, 0), std::invalid_argument);
    SparsityPattern wrong = *qp.pattern;
    wrong.blocks[0].pop_back();
    CHECK_THROWS(build_sparse_bsos(qp, wrong, 1, 1));
}

TEST_CASE("row labels partition into linking rows then per-block certificate rows") {
    const PopProblem qp = gen_qp({3, 3}, 1, 2, 31);
    const BuildResult build = build_sparse_bsos(qp, *qp.pattern, 1, 1);
    REQUIRE(build.status == BuildStatus::Ok);
    bool seen_cert = false;
    int last_block = -1;
    for (const LinearRow& row : build.program.rows) {
        if (row.label.kind == RowLabel::Kind::Certificate) {
            seen_cert = true;
            CHECK(row.label.block >= last_block);
            last_block = row.label.block;
        } else {
            CHECK(!seen_cert);  // linking rows come first
        }
    }
    CHECK(seen_cert);
}

TEST_CASE("eliminated coefficients land on certificate right-hand sides") {
    const PopProblem qp = gen_qp({3, 3}, 1, 2, 8);
    const BuildResult build = build_sparse_bsos(qp, *qp.pattern, 1, 1);
    REQUIRE(build.status == BuildStatus::Ok);
    for (const LinearRow& row : build.program.rows) {
        if (row.label.kind != RowLabel::Kind::Certificate) continue;
        const bool has_fcoef = !row.free_terms.empty();
        if (!has_fcoef)
            CHECK(row.rhs == doctest::Approx(-qp.objective.coeff(row.label.gamma)));
        else
            CHECK(row.rhs == 0.0);
    }
}
