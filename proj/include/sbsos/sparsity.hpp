#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sbsos/poly.hpp"

namespace sbsos {

/// Variable blocks I_l and constraint blocks J_l of a structured sparsity
/// pattern. Indices are 0-based; blocks are kept sorted. A constraint may
/// belong to several blocks (every block whose variables cover its support).
struct SparsityPattern {
    std::vector<std::vector<int>> blocks;       // I_l, subsets of {0..n-1}
    std::vector<std::vector<int>> cons_blocks;  // J_l, subsets of {0..m-1}
    int n = 0;
    int m = 0;

    int num_blocks() const { return static_cast<int>(blocks.size()); }

    /// Single block containing every variable and every constraint.
    static SparsityPattern trivial(int n, int m);
};

/// POP data: minimize objective over K = { x : 0 <= g_j(x) <= 1 }.
struct PopProblem {
    int n = 0;
    Polynomial objective;
    std::vector<Polynomial> constraints;  // the g_j
    std::optional<SparsityPattern> pattern;

    int num_constraints() const { return static_cast<int>(constraints.size()); }
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> failures;  // one entry per failed requirement

    void fail(std::string msg) {
        ok = false;
        failures.push_back(std::move(msg));
    }
};

struct RipResult {
    bool ok = true;
    int first_failing_block = -1;  // smallest l such that block l+1 breaks the RIP
};

/// Running intersection property: for every l there is s <= l with
/// I_{l+1} \cap (I_1 u ... u I_l) contained in I_s.
RipResult rip_check(const std::vector<std::vector<int>>& blocks);

/// Checks the five requirements of a valid pattern for the given problem:
/// variable cover, constraint cover, constraint support containment,
/// objective decomposability, and the RIP. Failures are reported, not thrown.
ValidationReport validate(const SparsityPattern& pattern, const PopProblem& problem);

/// Banded pattern: c_1 = nvec_1, c_l = c_{l-1} + nvec_l - overlap, block l covers
/// the o last variables of the previous block plus nvec_l - o fresh ones.
/// Only variable blocks are produced; call assign_constraints to fill J_l.
SparsityPattern banded_pattern(const std::vector<int>& nvec, int overlap);

enum class ConstraintAssignment {
    AllSupportingBlocks,   // j joins every block with supp(g_j) inside I_l
    FirstSupportingBlock,  // j joins only the lowest-index such block
};

/// Fills cons_blocks from the problem's constraint supports. Throws if some
/// constraint fits in no block.
void assign_constraints(SparsityPattern& pattern, const PopProblem& problem,
                        ConstraintAssignment mode = ConstraintAssignment::AllSupportingBlocks);

/// Builds the correlative-sparsity graph, extends it to a chordal graph with a
/// minimum-degree elimination ordering, and returns its maximal cliques ordered
/// so that the RIP holds. Constraints are assigned to their first supporting
/// block.
SparsityPattern detect_pattern(const PopProblem& problem);

/// Splits the objective into per-block parts f_l, assigning each monomial to
/// the lowest-index block containing its support. Sum of parts equals the
/// objective exactly.
std::vector<Polynomial> decompose_objective(const PopProblem& problem, const SparsityPattern& pattern);

/// Appends the redundant ball constraint 1 - (1/M_l) * sum_{i in I_l} x_i^2 for
/// each block and registers it in J_l.
PopProblem add_ball_constraints(const PopProblem& problem, const std::vector<double>& radii);

/// Replaces g_j by g_j / bound_j. The caller certifies g_j <= bound_j on K.
PopProblem scale_constraints(const PopProblem& problem, const std::vector<double>& upper_bounds);

}  // namespace sbsos
