#pragma once

#include <string>

#include "sbsos/sparsity.hpp"

namespace sbsos {

/// On-disk POP format:
///   { "num_vars": n,
///     "objective": [ {"expo": [int * n], "coef": real}, ... ],
///     "constraints": [ [term, ...], ... ],
///     "pattern": { "blocks": [[int]], "cons_blocks": [[int]] } }   (optional)
/// Exponent arrays are dense of length n; all indices are 0-based.
PopProblem load_problem(const std::string& path);
void save_problem(const PopProblem& problem, const std::string& path);

SparsityPattern load_pattern(const std::string& path, int n, int m);
void save_pattern(const SparsityPattern& pattern, const std::string& path);

std::string problem_to_json(const PopProblem& problem);
PopProblem problem_from_json(const std::string& text);

}  // namespace sbsos
