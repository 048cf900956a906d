#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sbsos/sparsity.hpp"

namespace sbsos {

/// Deterministic uniform draws on [-1, 1]. The engine is mt19937_64 and the
/// mapping from raw 64-bit words to doubles is explicit, so streams are
/// reproducible across platforms. Independent substreams are derived from the
/// base seed with a splitmix64 hash of a purpose tag.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t tag);
    double uniform_sym();                    // [-1, 1)
    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

enum class BenchFamily {
    Qp,
    QpQuartic,
    ChainedWood,
    ChainedSingular,
    GenRosenbrock,
    DiscreteBoundary,
    BroydenBanded,
};

BenchFamily bench_family_from_name(const std::string& name);
std::string bench_family_name(BenchFamily family);

/// Random banded quadratic problem: minimize x^T A x + b^T x over
/// per-block constraints 1 - sum_{i in I_l} x_i^s >= 0 and x_i >= 0. A has
/// uniform [-1,1] entries exactly on positions covered by a common block and
/// is regenerated until it is indefinite.
PopProblem gen_qp(const std::vector<int>& nvec, int overlap, int s, std::uint64_t seed);

/// Quartic variant: adds sum_i a_i x_i^4 to the objective; constraints become
/// 1 - x_i^2 >= 0 and x_i >= 0 for every i.
PopProblem gen_qp_quartic(const std::vector<int>& nvec, int overlap, std::uint64_t seed);

/// Convex variant of gen_qp (s = 2): A is assembled from per-block Gram
/// matrices, so it is positive semidefinite with the same banded support.
PopProblem gen_qp_convex(const std::vector<int>& nvec, int overlap, std::uint64_t seed);

/// The named test functions with their standard sparsity patterns and the
/// feasible set 1 - sum_{i in I_l} x_i >= 0, x_i >= 0.
PopProblem gen_test_function(BenchFamily family, int n);

}  // namespace sbsos
