#include "sbsos/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <json.hpp>

namespace sbsos {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string RelaxationReport::bound_display() const {
    if (infeasible_order) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4e%s", bound, starred() ? "*" : "");
    return buf;
}

RelaxationReport run_relaxation(const PopProblem& problem, const SparsityPattern& pattern,
                                const RelaxOptions& options) {
    RelaxationReport report;
    report.hierarchy = options.hierarchy;
    report.d = options.d;
    report.k = options.hierarchy == Hierarchy::SparsePut ? 0 : options.k;

    const auto t0 = std::chrono::steady_clock::now();
    BuildResult build;
    switch (options.hierarchy) {
        case Hierarchy::SparseBsos: build = build_sparse_bsos(problem, pattern, options.d, options.k); break;
        case Hierarchy::DenseBsos: build = build_dense_bsos(problem, options.d, options.k); break;
        case Hierarchy::SparsePut: build = build_sparse_put(problem, pattern, options.d); break;
    }
    report.time_build = seconds_since(t0);

    if (build.status == BuildStatus::InfeasibleOrder) {
        report.infeasible_order = true;
        report.status = SolveStatus::InfeasibleOrder;
        report.message = build.message;
        report.time_total = report.time_build;
        return report;
    }

    report.dmax = build.ledger.dmax;
    report.nonneg_vars = build.program.num_nonneg;
    report.free_vars = build.program.num_free;
    report.rows = build.program.num_rows();
    report.psd_sides = build.program.psd_sides;

    const auto t1 = std::chrono::steady_clock::now();
    const ConicSolution solution = solve(build.program, options.solver);
    report.time_solve = seconds_since(t1);

    report.status = solution.status;
    report.bound = solution.primal_obj;
    report.res_primal = solution.res_primal;
    report.res_dual = solution.res_dual;
    report.rel_gap = solution.rel_gap;
    report.iterations = solution.iterations;
    report.message = solution.message;

    const auto t2 = std::chrono::steady_clock::now();
    if (solution.status == SolveStatus::Optimal || solution.status == SolveStatus::NearOptimal) {
        const MomentData moments = recover_moments(solution, build.program, build.ledger);
        report.moment_consistency = moments.consistency;
        report.cert = certify(moments, problem, pattern, report.bound, options.rank_tol);
    }
    report.time_extract = seconds_since(t2);
    report.time_total = seconds_since(t0);
    return report;
}

Polynomial reconstruct_certificate(const ConicSolution& solution, const VariableLedger& ledger,
                                   const PopProblem& problem) {
    const int n = problem.n;
    Polynomial total(n);

    for (std::size_t v = 0; v < ledger.free_roles.size(); ++v)
        if (ledger.free_roles[v].kind == VariableLedger::FreeRole::Kind::T)
            total.add_term(Exponent{}, solution.free_vals[v]);

    for (std::size_t v = 0; v < ledger.nonneg_roles.size(); ++v) {
        const double lam = solution.nonneg_vals[v];
        if (lam == 0.0) continue;
        total += lam * h_poly(ledger.nonneg_roles[v].pair, problem.constraints);
    }

    for (std::size_t bidx = 0; bidx < ledger.psd_roles.size(); ++bidx) {
        const VariableLedger::PsdRole& role = ledger.psd_roles[bidx];
        const std::vector<int>& vars = ledger.pattern.blocks[role.block];
        int basis_degree;
        Polynomial weight = Polynomial::constant(n, 1.0);
        if (ledger.hierarchy == Hierarchy::SparsePut) {
            if (role.constraint < 0) {
                basis_degree = ledger.d;
            } else {
                weight = problem.constraints[role.constraint];
                basis_degree = (2 * ledger.d - weight.degree()) / 2;
            }
        } else {
            basis_degree = ledger.k;
        }
        const std::vector<Exponent> local = enumerate_monomials(static_cast<int>(vars.size()), basis_degree);
        std::vector<Exponent> basis;
        basis.reserve(local.size());
        for (const Exponent& e : local) basis.push_back(e.relabeled(vars));

        const Eigen::MatrixXd& Q = solution.psd_vals[bidx];
        Polynomial sos(n);
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = i; j < basis.size(); ++j) {
                const double q = (i == j) ? Q(i, i) : 2.0 * Q(i, j);
                if (q != 0.0) sos.add_term(basis[i].plus(basis[j]), q);
            }
        total += mul(sos, weight);
    }
    return total;
}

std::string report_to_json(const RelaxationReport& report) {
    nlohmann::json j;
    j["version"] = 1;
    j["hierarchy"] = hierarchy_name(report.hierarchy);
    j["d"] = report.d;
    j["k"] = report.k;
    j["dmax"] = report.dmax;
    j["status"] = report.infeasible_order ? "infeasible-order" : solve_status_name(report.status);
    if (report.infeasible_order) {
        j["bound"] = nullptr;
    } else {
        j["bound"] = report.bound;
        j["starred"] = report.starred();
        j["counts"] = {{"nonneg", report.nonneg_vars},
                       {"free", report.free_vars},
                       {"rows", report.rows},
                       {"psd_sides", report.psd_sides}};
        j["residuals"] = {{"primal", report.res_primal},
                          {"dual", report.res_dual},
                          {"gap", report.rel_gap},
                          {"moment_consistency", report.moment_consistency}};
        j["iterations"] = report.iterations;
        j["ranks"] = report.cert.ranks;
        j["avg_rank"] = report.cert.avg_rank;
        j["certified"] = report.cert.certified;
        if (report.cert.xstar) {
            j["xstar"] = *report.cert.xstar;
            j["xstar_feasibility"] = report.cert.xstar_feasibility;
            j["xstar_obj_gap"] = report.cert.xstar_obj_gap;
        }
    }
    j["time"] = {{"build", report.time_build},
                 {"solve", report.time_solve},
                 {"extract", report.time_extract},
                 {"total", report.time_total}};
    if (!report.message.empty()) j["message"] = report.message;
    return j.dump(2);
}

}  // namespace sbsos
