#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sbsos/conic.hpp"

namespace sbsos {

struct SolverOptions {
    double tol_gap = 1e-7;
    double tol_feas = 1e-7;
    int max_iter = 100;
    double step_fraction = 0.99;
    bool unified_step = false;  // use min(alpha_p, alpha_d) on both sides
    bool verbose = false;
};

enum class SolveStatus { Optimal, NearOptimal, NumericalTrouble, InfeasibleOrder };

std::string solve_status_name(SolveStatus s);

struct IterStat {
    double pobj = 0, dobj = 0;  // maximize sense
    double gap = 0;             // conic complementarity <x, s>
    double rdx = 0, rpy = 0;    // residual-weighted slack terms of the duality identity
    double prim_inf = 0, dual_inf = 0;
    double alpha_p = 0, alpha_d = 0;
};

/// Result of an interior-point solve. Primal values follow the program's
/// variable groups; `duals` holds one multiplier per equality row, scaled so
/// that for the maximize-form program  sum_r duals_r * A_r - c  lies in the
/// dual cone at optimality.
struct ConicSolution {
    SolveStatus status = SolveStatus::NumericalTrouble;
    std::vector<double> free_vals;
    std::vector<double> nonneg_vals;
    std::vector<Eigen::MatrixXd> psd_vals;
    std::vector<double> duals;
    double primal_obj = 0;  // maximize sense
    double dual_obj = 0;
    int iterations = 0;
    double res_primal = 0;
    double res_dual = 0;
    double rel_gap = 0;
    int dropped_rows = 0;  // dependent rows removed before the solve
    std::vector<IterStat> trace;
    std::string message;
};

/// Primal-dual path-following solve with Nesterov-Todd scaling and a Mehrotra
/// predictor-corrector. Free variables stay explicit in a regularized
/// quasi-definite KKT system (no splitting); one solve is single-threaded and
/// deterministic.
ConicSolution solve(const ConicProgram& program, const SolverOptions& options = {});

/// Marks a maximal independent subset of the equality rows (1 = keep).
/// Dependent rows can appear when certificate terms of degree beyond the SOS
/// block cannot span all compared monomials; the solver removes them
/// internally and reports zero multipliers for them.
std::vector<char> independent_rows(const ConicProgram& program);

}  // namespace sbsos
