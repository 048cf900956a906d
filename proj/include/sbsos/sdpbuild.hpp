#pragma once

#include <string>

#include "sbsos/conic.hpp"
#include "sbsos/sparsity.hpp"

namespace sbsos {

enum class BuildStatus { Ok, InfeasibleOrder };

struct BuildResult {
    BuildStatus status = BuildStatus::Ok;
    ConicProgram program;
    VariableLedger ledger;
    std::string message;  // set when status != Ok
};

/// Assembles the Sparse-BSOS relaxation of order d with SOS parameter k:
/// maximize t subject to the linking rows sum_l f^l_gamma = f_gamma
/// (gamma != 0), sum_l f^l_0 + t = f_0, and per-block certificate rows
/// f^l_gamma - sum_pairs lambda*(h_ab)_gamma - <Q^l, (v v^T)_gamma> = 0.
/// The free-variable reduction is applied before returning. Returns
/// InfeasibleOrder when the objective has a monomial no certificate term of
/// this order can produce.
BuildResult build_sparse_bsos(const PopProblem& problem, const SparsityPattern& pattern, int d, int k);

/// Sparse-BSOS with the trivial single-block pattern.
BuildResult build_dense_bsos(const PopProblem& problem, int d, int k);

/// The sparse Putinar-style relaxation of order d: per block one SOS block of
/// side s(l,d) plus one weighted SOS block of side s(l,d_j) per constraint,
/// with d_j = floor((2d - deg g_j)/2). Returns InfeasibleOrder when
/// 2d < deg f or 2d < deg g_j for some j.
BuildResult build_sparse_put(const PopProblem& problem, const SparsityPattern& pattern, int d);

struct ReduceStats {
    int eliminated_vars = 0;
    int removed_rows = 0;
};

/// Fixes every coefficient variable whose linking row has a single term
/// (monomial supported in exactly one block), moves it to the right-hand
/// sides, and removes rows that become 0 = 0. Throws on an inconsistent fixed
/// row (|lhs - rhs| > 1e-9), which indicates a malformed build.
ReduceStats reduce(ConicProgram& program, VariableLedger& ledger);

}  // namespace sbsos
