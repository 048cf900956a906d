#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>

#include "sbsos/conic.hpp"
#include "sbsos/sdpsolve.hpp"
#include "sbsos/sparsity.hpp"

namespace sbsos {

using MomentSequence = std::map<Exponent, double, GrlexLess>;

/// Moment sequences read off the equality-row duals: theta^l from the
/// per-block certificate rows, the global y from the linking rows, completed
/// through the ledger's eliminated coefficients and normalized so y_0 = 1.
struct MomentData {
    std::vector<MomentSequence> theta;  // per block, global exponent labels
    MomentSequence y;
    double y0_raw = 0.0;       // linking-row dual of gamma = 0 before normalization
    double consistency = 0.0;  // max |y_gamma - theta^l_gamma| over shared monomials
};

MomentData recover_moments(const ConicSolution& solution, const ConicProgram& program,
                           const VariableLedger& ledger);

/// Moment matrix of order a on the given variables: entry (alpha, beta) is
/// theta at alpha + beta. Throws when a required moment is missing.
Eigen::MatrixXd moment_matrix(const MomentSequence& theta, int a, const std::vector<int>& block_vars);

/// Count of singular values above rel_tol times the largest one.
int numeric_rank(const Eigen::MatrixXd& sym, double rel_tol = 1e-4);

/// Smallest omega with 2*omega >= max degree of the problem data.
int certificate_order(const PopProblem& problem);

struct CertificateReport {
    std::vector<int> ranks;
    double avg_rank = 0.0;
    bool certified = false;
    std::optional<std::vector<double>> xstar;
    double xstar_feasibility = 0.0;  // max violation of 0 <= g_j <= 1 at x*
    double xstar_obj_gap = 0.0;      // |f(x*) - bound|
};

/// Rank-one optimality test: builds M_omega(theta^l) per block, and when all
/// numeric ranks are one extracts x* = (y_gamma)_{|gamma|=1} and verifies its
/// feasibility and objective value against the bound before certifying.
CertificateReport certify(const MomentData& moments, const PopProblem& problem,
                          const SparsityPattern& pattern, double bound, double rank_tol = 1e-4);

}  // namespace sbsos
