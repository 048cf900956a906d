#include "sbsos/extract.hpp"

#include <algorithm>
#include <cmath>

namespace sbsos {

MomentData recover_moments(const ConicSolution& solution, const ConicProgram& program,
                           const VariableLedger& ledger) {
    if (solution.status != SolveStatus::Optimal && solution.status != SolveStatus::NearOptimal)
        throw std::invalid_argument("recover_moments: solution is not (near-)optimal");
    if (solution.duals.size() != static_cast<std::size_t>(program.num_rows()))
        throw std::invalid_argument("recover_moments: dual length mismatch");

    MomentData md;
    md.theta.resize(ledger.pattern.num_blocks());
    for (int r = 0; r < program.num_rows(); ++r) {
        const RowLabel& label = program.rows[r].label;
        if (label.kind == RowLabel::Kind::Linking) {
            md.y[label.gamma] = solution.duals[r];
        } else {
            // theta^l_gamma = -dual: the dual constraint of a kept coefficient
            // variable reads y_gamma + dual_cert = 0
            md.theta[label.block][label.gamma] = -solution.duals[r];
        }
    }

    auto it0 = md.y.find(Exponent{});
    if (it0 == md.y.end()) throw std::runtime_error("recover_moments: no gamma = 0 linking row");
    md.y0_raw = it0->second;
    if (std::abs(md.y0_raw) < 1e-12) throw std::runtime_error("recover_moments: degenerate normalization");

    const double inv = 1.0 / md.y0_raw;
    for (auto& [e, v] : md.y) v *= inv;
    for (auto& theta : md.theta)
        for (auto& [e, v] : theta) v *= inv;

    // complete y at monomials whose linking row was removed by the reduction
    for (const VariableLedger::Elimination& el : ledger.eliminated) {
        auto it = md.theta[el.block].find(el.gamma);
        if (it == md.theta[el.block].end()) continue;  // certificate row dropped as 0 = 0
        md.y[el.gamma] = it->second;
    }

    md.consistency = 0.0;
    for (const auto& theta : md.theta)
        for (const auto& [e, v] : theta)
            if (auto it = md.y.find(e); it != md.y.end())
                md.consistency = std::max(md.consistency, std::abs(it->second - v));
    return md;
}

Eigen::MatrixXd moment_matrix(const MomentSequence& theta, int a, const std::vector<int>& block_vars) {
    const std::vector<Exponent> local = enumerate_monomials(static_cast<int>(block_vars.size()), a);
    std::vector<Exponent> basis;
    basis.reserve(local.size());
    for (const Exponent& e : local) basis.push_back(e.relabeled(block_vars));
    const int s = static_cast<int>(basis.size());
    Eigen::MatrixXd M(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j) {
            auto it = theta.find(basis[i].plus(basis[j]));
            if (it == theta.end())
                throw std::out_of_range("moment_matrix: missing moment " + basis[i].plus(basis[j]).str());
            M(i, j) = M(j, i) = it->second;
        }
    return M;
}

int numeric_rank(const Eigen::MatrixXd& sym, double rel_tol) {
    if (sym.rows() == 0) return 0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd sv = es.eigenvalues().cwiseAbs();
    const double top = sv.maxCoeff();
    if (top <= 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > rel_tol * top) ++rank;
    return rank;
}

int certificate_order(const PopProblem& problem) {
    int maxdeg = problem.objective.degree();
    for (const Polynomial& g : problem.constraints) maxdeg = std::max(maxdeg, g.degree());
    return (maxdeg + 1) / 2;
}

CertificateReport certify(const MomentData& moments, const PopProblem& problem,
                          const SparsityPattern& pattern, double bound, double rank_tol) {
    CertificateReport report;
    const int omega = certificate_order(problem);
    bool all_rank_one = true;
    for (int l = 0; l < pattern.num_blocks(); ++l) {
        const Eigen::MatrixXd M = moment_matrix(moments.theta[l], omega, pattern.blocks[l]);
        const int rank = numeric_rank(M, rank_tol);
        report.ranks.push_back(rank);
        if (rank != 1) all_rank_one = false;
    }
    double avg = 0;
    for (int r : report.ranks) avg += r;
    report.avg_rank = report.ranks.empty() ? 0.0 : avg / report.ranks.size();

    if (!all_rank_one) return report;

    std::vector<double> xstar(problem.n, 0.0);
    for (int i = 0; i < problem.n; ++i) {
        auto it = moments.y.find(Exponent::unit(i));
        if (it == moments.y.end()) throw std::out_of_range("certify: first-order moment missing");
        xstar[i] = it->second;
    }

    double violation = 0.0;
    for (const Polynomial& g : problem.constraints) {
        const double val = g.evaluate(xstar);
        violation = std::max({violation, -val, val - 1.0});
    }
    violation = std::max(violation, 0.0);
    report.xstar_feasibility = violation;
    report.xstar_obj_gap = std::abs(problem.objective.evaluate(xstar) - bound);
    report.xstar = std::move(xstar);
    // rank alone is not trusted: the extracted point must check out
    report.certified =
        violation <= 1e-6 && report.xstar_obj_gap <= std::max(1e-6, 1e-5 * std::abs(bound));
    return report;
}

}  // namespace sbsos
