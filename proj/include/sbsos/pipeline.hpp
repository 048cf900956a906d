#pragma once

#include <string>

#include "sbsos/extract.hpp"
#include "sbsos/sdpbuild.hpp"
#include "sbsos/sdpsolve.hpp"

namespace sbsos {

struct RelaxOptions {
    Hierarchy hierarchy = Hierarchy::SparseBsos;
    int d = 1;
    int k = 1;  // ignored by Sparse-PUT
    SolverOptions solver;
    double rank_tol = 1e-4;
};

/// Everything one relaxation run produces: the bound, solve diagnostics, the
/// rank-one certificate, and the structural sizes of the SDP.
struct RelaxationReport {
    Hierarchy hierarchy = Hierarchy::SparseBsos;
    int d = 0, k = 0, dmax = 0;
    bool infeasible_order = false;

    int nonneg_vars = 0, free_vars = 0, rows = 0;
    std::vector<int> psd_sides;

    SolveStatus status = SolveStatus::NumericalTrouble;
    double bound = 0.0;
    double res_primal = 0.0, res_dual = 0.0, rel_gap = 0.0;
    int iterations = 0;

    CertificateReport cert;
    double moment_consistency = 0.0;

    double time_build = 0.0, time_solve = 0.0, time_extract = 0.0, time_total = 0.0;
    std::string message;

    bool starred() const { return !infeasible_order && status != SolveStatus::Optimal; }
    std::string bound_display() const;  // "inf" for infeasible orders, "*" suffix on early stops
};

RelaxationReport run_relaxation(const PopProblem& problem, const SparsityPattern& pattern,
                                const RelaxOptions& options);

/// Rebuilds the certificate polynomial t + sum_l [sum lambda*h + v^T Q v]
/// (or its Putinar analogue) from a primal solution; at a feasible point this
/// equals the objective coefficient-wise.
Polynomial reconstruct_certificate(const ConicSolution& solution, const VariableLedger& ledger,
                                   const PopProblem& problem);

std::string report_to_json(const RelaxationReport& report);

}  // namespace sbsos
