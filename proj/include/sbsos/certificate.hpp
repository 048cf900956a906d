#pragma once

#include <vector>

#include "sbsos/poly.hpp"

namespace sbsos {

/// One certificate term index (alpha, beta): the multiplier of the product
/// prod_j g_j^{alpha_j} (1 - g_j)^{beta_j}. Both multi-indices are sparse over
/// constraint indices and supported inside the owning block's J_l.
struct PairIndex {
    Exponent alpha;
    Exponent beta;

    int total_degree() const { return alpha.degree() + beta.degree(); }
    bool operator==(const PairIndex& other) const = default;
};

/// All (alpha, beta) with support in J (sorted constraint indices) and
/// sum of entries <= d, in graded lex order over the concatenated
/// (alpha, beta) vector. Exactly binomial(2|J| + d, d) pairs.
std::vector<PairIndex> enumerate_pairs(const std::vector<int>& J, int d);

/// The expanded product prod_j g_j^{alpha_j} (1 - g_j)^{beta_j}; h_00 = 1.
Polynomial h_poly(const PairIndex& pair, const std::vector<Polynomial>& constraints);

/// Maximal certificate degree max{deg f, 2k, d * max_j deg g_j}.
int dmax_degree(const Polynomial& objective, const std::vector<Polynomial>& constraints, int d, int k);

}  // namespace sbsos
