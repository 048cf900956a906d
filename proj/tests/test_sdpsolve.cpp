#include <doctest.h>

#include <random>

#include "sbsos/sdpsolve.hpp"

using namespace sbsos;

namespace {

// max t s.t. [[1, t], [t, 1]] psd, as equality rows over one psd block
ConicProgram toy_psd_boundary() {
    ConicProgram prog;
    prog.num_free = 1;
    prog.psd_sides = {2};
    LinearRow r00, r11, r01;
    r00.psd_terms.push_back({0, 0, 0, 1.0});
    r00.rhs = 1.0;
    r11.psd_terms.push_back({0, 1, 1, 1.0});
    r11.rhs = 1.0;
    r01.psd_terms.push_back({0, 0, 1, 0.5});  // contributes X01 once
    r01.free_terms.emplace_back(0, -1.0);
    r01.rhs = 0.0;
    prog.rows = {r00, r11, r01};
    prog.obj_free.emplace_back(0, 1.0);
    return prog;
}

ConicProgram toy_nonneg() {
    // max -lambda s.t. lambda = 3, lambda >= 0
    ConicProgram prog;
    prog.num_nonneg = 1;
    LinearRow row;
    row.nonneg_terms.emplace_back(0, 1.0);
    row.rhs = 3.0;
    prog.rows = {row};
    prog.obj_nonneg.emplace_back(0, -1.0);
    return prog;
}

// random SDP with strictly feasible primal (X = I at rhs) and dual
// (objective c = A^T y0 - s0 with s0 interior), so strong duality holds
ConicProgram random_sdp(int side, int rows, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ConicProgram prog;
    prog.psd_sides = {side};
    prog.num_nonneg = 2;
    prog.num_free = 1;
    std::vector<double> y0(rows);
    for (int r = 0; r < rows; ++r) {
        LinearRow row;
        for (int i = 0; i < side; ++i)
            for (int j = i; j < side; ++j)
                if (u(rng) > 0.2) row.psd_terms.push_back({0, i, j, u(rng)});
        row.nonneg_terms.emplace_back(r % 2, u(rng));
        if (r == 0) row.free_terms.emplace_back(0, 1.0);
        // rhs at the interior point X = I, nonneg = (1,1), free = 0.3
        double rhs = 0.0;
        for (const PsdCoeff& t : row.psd_terms)
            if (t.i == t.j) rhs += t.value;
        rhs += row.nonneg_terms[0].second;
        if (r == 0) rhs += 0.3;
        row.rhs = rhs;
        y0[r] = u(rng);
        prog.rows.push_back(std::move(row));
    }
    // c = sum_r y0_r A_r - s0 (max sense), s0 = I on the psd block, 1 on nonneg
    Eigen::MatrixXd Cp = -Eigen::MatrixXd::Identity(side, side);
    std::vector<double> cn(2, -1.0), cf(1, 0.0);
    for (int r = 0; r < rows; ++r) {
        for (const PsdCoeff& t : prog.rows[r].psd_terms) Cp(t.i, t.j) += y0[r] * t.value;
        for (const auto& [v, a] : prog.rows[r].nonneg_terms) cn[v] += y0[r] * a;
        for (const auto& [v, a] : prog.rows[r].free_terms) cf[v] += y0[r] * a;
    }
    for (int i = 0; i < side; ++i)
        for (int j = i; j < side; ++j)
            if (Cp(i, j) != 0.0) prog.obj_psd.push_back({0, i, j, Cp(i, j)});
    prog.obj_nonneg.emplace_back(0, cn[0]);
    prog.obj_nonneg.emplace_back(1, cn[1]);
    prog.obj_free.emplace_back(0, cf[0]);
    return prog;
}

}  // namespace

TEST_CASE("psd boundary toy: max t with [[1,t],[t,1]] psd gives t = 1") {
    const ConicSolution sol = solve(toy_psd_boundary());
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(sol.primal_obj == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sol.dual_obj == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sol.psd_vals[0](0, 1) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("nonneg toy: max -lambda with lambda = 3") {
    const ConicSolution sol = solve(toy_nonneg());
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(sol.primal_obj == doctest::Approx(-3.0).epsilon(1e-7));
    CHECK(sol.nonneg_vals[0] == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("random strictly feasible SDPs solve to tolerance") {
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
        const ConicProgram prog = random_sdp(4, 6, seed);
        const ConicSolution sol = solve(prog);
        INFO("seed ", seed, " message ", sol.message);
        CHECK(sol.status == SolveStatus::Optimal);
        CHECK(sol.res_primal <= 1e-7);
        CHECK(sol.res_dual <= 1e-7);
        CHECK(sol.rel_gap <= 1e-6);
    }
}

TEST_CASE("weak duality identity holds along the iterate trace") {
    // pobj - dobj = <x,s> + rd.x - rp.y exactly, so pobj <= dobj + slack (max sense)
    const ConicProgram prog = random_sdp(5, 8, 42);
    const ConicSolution sol = solve(prog);
    REQUIRE(!sol.trace.empty());
    for (const IterStat& it : sol.trace) {
        const double scale = 1.0 + std::abs(it.pobj) + std::abs(it.dobj);
        const double slack = it.rdx + it.rpy + 1e-9 * scale;
        CHECK(it.pobj <= it.dobj + slack + 1e-9 * scale);
        CHECK(it.gap >= 0.0);
    }
}

TEST_CASE("returned psd blocks are numerically psd") {
    const ConicProgram prog = random_sdp(5, 8, 7);
    const ConicSolution sol = solve(prog);
    for (const Eigen::MatrixXd& X : sol.psd_vals) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X, Eigen::EigenvaluesOnly);
        const double lmax = es.eigenvalues().maxCoeff();
        CHECK(es.eigenvalues().minCoeff() >= -1e-8 * (1.0 + std::abs(lmax)));
    }
}

TEST_CASE("determinism: identical programs give identical iterate sequences") {
    const ConicProgram prog = random_sdp(4, 6, 11);
    const ConicSolution a = solve(prog);
    const ConicSolution b = solve(prog);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].pobj == b.trace[i].pobj);
        CHECK(a.trace[i].dobj == b.trace[i].dobj);
        CHECK(a.trace[i].gap == b.trace[i].gap);
    }
    CHECK(a.primal_obj == b.primal_obj);
}

TEST_CASE("rejects a program without rows") {
    ConicProgram empty;
    empty.num_free = 1;
    CHECK_THROWS_AS(solve(empty), std::invalid_argument);
}
