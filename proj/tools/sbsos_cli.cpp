#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "sbsos/bench.hpp"
#include "sbsos/io_json.hpp"
#include "sbsos/pipeline.hpp"
#include "sbsos/sdpa.hpp"

namespace {

using namespace sbsos;

struct CommonArgs {
    std::string input;
    std::string pattern_arg;  // "", "trivial", "detect", "banded:<n1,n2,...;o>", or a JSON file
    std::string hierarchy = "sparse-bsos";
    int d = 1;
    int k = 1;
    double tol_gap = 1e-7;
    double tol_feas = 1e-7;
    double rank_tol = 1e-4;
    int max_iter = 100;
    bool verbose = false;
    std::string json_out;
    std::string sdpa_out;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_k = true) {
    cmd->add_option("--in", args.input, "POP problem JSON file")->required();
    cmd->add_option("--pattern", args.pattern_arg,
                    "pattern override: trivial | detect | banded:<n1,...;o> | <file.json>");
    if (with_k) cmd->add_option("--k", args.k, "SOS half-degree parameter (BSOS hierarchies)");
    cmd->add_option("--tol-gap", args.tol_gap, "relative duality gap tolerance");
    cmd->add_option("--tol-feas", args.tol_feas, "feasibility tolerance");
    cmd->add_option("--rank-tol", args.rank_tol, "relative rank threshold for the certificate");
    cmd->add_option("--max-iter", args.max_iter, "interior-point iteration cap");
    cmd->add_flag("--verbose", args.verbose, "print interior-point iterations");
    cmd->add_option("--json", args.json_out, "write a machine-readable report here");
    cmd->add_option("--sdpa-out", args.sdpa_out, "also export the SDP in SDPA sparse format");
}

Hierarchy parse_hierarchy(const std::string& name) {
    if (name == "sparse-bsos") return Hierarchy::SparseBsos;
    if (name == "dense-bsos") return Hierarchy::DenseBsos;
    if (name == "sparse-put") return Hierarchy::SparsePut;
    throw CLI::ValidationError("--hierarchy", "unknown hierarchy: " + name);
}

SparsityPattern resolve_pattern(const CommonArgs& args, const PopProblem& problem) {
    const std::string& spec = args.pattern_arg;
    if (spec.empty()) {
        if (problem.pattern) return *problem.pattern;
        return detect_pattern(problem);
    }
    if (spec == "trivial") return SparsityPattern::trivial(problem.n, problem.num_constraints());
    if (spec == "detect") return detect_pattern(problem);
    if (spec.rfind("banded:", 0) == 0) {
        const std::string body = spec.substr(7);
        const auto semi = body.find(';');
        if (semi == std::string::npos)
            throw CLI::ValidationError("--pattern", "banded pattern needs \"banded:<sizes;overlap>\"");
        std::vector<int> nvec;
        std::stringstream ss(body.substr(0, semi));
        for (std::string tok; std::getline(ss, tok, ',');) nvec.push_back(std::stoi(tok));
        SparsityPattern pattern = banded_pattern(nvec, std::stoi(body.substr(semi + 1)));
        if (pattern.n != problem.n)
            throw CLI::ValidationError("--pattern", "banded pattern covers " + std::to_string(pattern.n) +
                                                        " variables, problem has " + std::to_string(problem.n));
        assign_constraints(pattern, problem, ConstraintAssignment::AllSupportingBlocks);
        return pattern;
    }
    SparsityPattern pattern = load_pattern(spec, problem.n, problem.num_constraints());
    bool empty = true;
    for (const auto& jl : pattern.cons_blocks)
        if (!jl.empty()) empty = false;
    if (empty) assign_constraints(pattern, problem, ConstraintAssignment::AllSupportingBlocks);
    return pattern;
}

std::string psd_display(const std::vector<int>& sides) {
    // "2(51)" style: count(size) for runs of equal sizes
    std::map<int, int, std::greater<int>> counts;
    for (int s : sides) counts[s]++;
    std::string out;
    for (const auto& [size, count] : counts) {
        if (!out.empty()) out += "/";
        out += std::to_string(count) + "(" + std::to_string(size) + ")";
    }
    return out.empty() ? "-" : out;
}

void print_report(const RelaxationReport& r) {
    std::printf("hierarchy      %s\n", hierarchy_name(r.hierarchy).c_str());
    if (r.hierarchy == Hierarchy::SparsePut)
        std::printf("order          d=%d (dmax=%d)\n", r.d, r.dmax);
    else
        std::printf("order          d=%d k=%d (dmax=%d)\n", r.d, r.k, r.dmax);
    if (r.infeasible_order) {
        std::printf("solution       inf  (%s)\n", r.message.c_str());
        return;
    }
    std::printf("sdp size       %d nonneg, %d free, psd %s, %d rows\n", r.nonneg_vars, r.free_vars,
                psd_display(r.psd_sides).c_str(), r.rows);
    std::printf("status         %s (%d iterations)\n", solve_status_name(r.status).c_str(), r.iterations);
    std::printf("solution       %s\n", r.bound_display().c_str());
    std::printf("rk             %.1f%s\n", r.cert.avg_rank, r.cert.certified ? "  [certified optimal]" : "");
    if (r.cert.xstar) {
        std::printf("x*             feasibility residual %.2e, |f(x*)-bound| %.2e\n", r.cert.xstar_feasibility,
                    r.cert.xstar_obj_gap);
    }
    std::printf("residuals      primal %.2e, dual %.2e, gap %.2e\n", r.res_primal, r.res_dual, r.rel_gap);
    std::printf("time           %.2fs (build %.2fs, solve %.2fs)\n", r.time_total, r.time_build, r.time_solve);
}

RelaxOptions make_options(const CommonArgs& args, Hierarchy hier, int d) {
    RelaxOptions opt;
    opt.hierarchy = hier;
    opt.d = d;
    opt.k = args.k;
    opt.solver.tol_gap = args.tol_gap;
    opt.solver.tol_feas = args.tol_feas;
    opt.solver.max_iter = args.max_iter;
    opt.solver.verbose = args.verbose;
    opt.rank_tol = args.rank_tol;
    return opt;
}

void maybe_export_sdpa(const CommonArgs& args, const PopProblem& problem, const SparsityPattern& pattern,
                       Hierarchy hier) {
    if (args.sdpa_out.empty()) return;
    BuildResult build;
    switch (hier) {
        case Hierarchy::SparseBsos: build = build_sparse_bsos(problem, pattern, args.d, args.k); break;
        case Hierarchy::DenseBsos: build = build_dense_bsos(problem, args.d, args.k); break;
        case Hierarchy::SparsePut: build = build_sparse_put(problem, pattern, args.d); break;
    }
    if (build.status != BuildStatus::Ok)
        throw std::runtime_error("cannot export an infeasible relaxation order: " + build.message);
    export_sdpa(build.program, args.sdpa_out);
    std::printf("wrote %s\n", args.sdpa_out.c_str());
}

int cmd_solve(const CommonArgs& args) {
    const PopProblem problem = load_problem(args.input);
    const SparsityPattern pattern = resolve_pattern(args, problem);
    const Hierarchy hier = parse_hierarchy(args.hierarchy);
    const RelaxationReport report = run_relaxation(problem, pattern, make_options(args, hier, args.d));
    print_report(report);
    if (!args.json_out.empty()) {
        std::ofstream os(args.json_out);
        os << report_to_json(report) << "\n";
    }
    maybe_export_sdpa(args, problem, pattern, hier);
    return 0;
}

int cmd_sweep(const CommonArgs& args, int d_max) {
    const PopProblem problem = load_problem(args.input);
    const SparsityPattern pattern = resolve_pattern(args, problem);
    const Hierarchy hier = parse_hierarchy(args.hierarchy);

    std::vector<RelaxationReport> reports;
    std::printf("%-4s %-16s %-6s %-10s %s\n", "d", "solution", "rk", "time", "status");
    for (int d = 1; d <= d_max; ++d) {
        reports.push_back(run_relaxation(problem, pattern, make_options(args, hier, d)));
        const RelaxationReport& r = reports.back();
        std::printf("%-4d %-16s %-6.1f %-10.2f %s\n", d, r.bound_display().c_str(), r.cert.avg_rank,
                    r.time_total, r.infeasible_order ? "inf" : solve_status_name(r.status).c_str());
    }
    bool monotone = true;
    for (std::size_t i = 1; i < reports.size(); ++i) {
        if (reports[i].infeasible_order || reports[i - 1].infeasible_order) continue;
        if (reports[i].bound < reports[i - 1].bound - 1e-6) monotone = false;
    }
    std::printf("bounds non-decreasing in d (1e-6 slack): %s\n", monotone ? "yes" : "NO");
    if (!args.json_out.empty()) {
        std::ofstream os(args.json_out);
        os << "[\n";
        for (std::size_t i = 0; i < reports.size(); ++i)
            os << report_to_json(reports[i]) << (i + 1 < reports.size() ? ",\n" : "\n");
        os << "]\n";
    }
    return 0;
}

int cmd_compare(const CommonArgs& args) {
    const PopProblem problem = load_problem(args.input);
    const SparsityPattern pattern = resolve_pattern(args, problem);
    std::printf("%-12s %-16s %-6s %-9s %-9s %-8s %-14s %s\n", "hierarchy", "solution", "rk", "n-neg",
                "free", "rows", "psd", "time");
    for (Hierarchy hier : {Hierarchy::SparseBsos, Hierarchy::DenseBsos, Hierarchy::SparsePut}) {
        const RelaxationReport r = run_relaxation(problem, pattern, make_options(args, hier, args.d));
        std::printf("%-12s %-16s %-6.1f %-9d %-9d %-8d %-14s %.2fs%s\n", hierarchy_name(hier).c_str(),
                    r.bound_display().c_str(), r.cert.avg_rank, r.nonneg_vars, r.free_vars, r.rows,
                    psd_display(r.psd_sides).c_str(), r.time_total,
                    r.cert.certified ? "  [certified]" : "");
    }
    return 0;
}

int cmd_generate(const std::string& family, int n, const std::string& nvec_str, int overlap, int s,
                 std::uint64_t seed, const std::string& out) {
    PopProblem problem;
    const BenchFamily fam = bench_family_from_name(family);
    if (fam == BenchFamily::Qp || fam == BenchFamily::QpQuartic) {
        std::vector<int> nvec;
        std::stringstream ss(nvec_str);
        for (std::string tok; std::getline(ss, tok, ',');) nvec.push_back(std::stoi(tok));
        if (nvec.empty()) throw std::runtime_error("--nvec is required for the qp families");
        problem = (fam == BenchFamily::Qp) ? gen_qp(nvec, overlap, s, seed)
                                           : gen_qp_quartic(nvec, overlap, seed);
    } else {
        if (n <= 0) throw std::runtime_error("--n is required for this family");
        problem = gen_test_function(fam, n);
    }
    save_problem(problem, out);
    std::printf("wrote %s (n=%d, m=%d, %d blocks)\n", out.c_str(), problem.n, problem.num_constraints(),
                problem.pattern ? problem.pattern->num_blocks() : 0);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse-BSOS / Sparse-PUT semidefinite relaxations for sparse polynomial optimization"};
    app.require_subcommand(1);

    CommonArgs solve_args, sweep_args, compare_args, export_args;
    int sweep_dmax = 3;

    CLI::App* solve_cmd = app.add_subcommand("solve", "build, solve and certify one relaxation");
    add_common(solve_cmd, solve_args);
    solve_cmd->add_option("--hierarchy", solve_args.hierarchy, "sparse-bsos | dense-bsos | sparse-put");
    solve_cmd->add_option("--d", solve_args.d, "relaxation order");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "solve relaxations d = 1..D");
    add_common(sweep_cmd, sweep_args);
    sweep_cmd->add_option("--hierarchy", sweep_args.hierarchy, "sparse-bsos | dense-bsos | sparse-put");
    sweep_cmd->add_option("--d-max", sweep_dmax, "largest relaxation order");

    CLI::App* compare_cmd = app.add_subcommand("compare", "run all hierarchies side by side");
    add_common(compare_cmd, compare_args);
    compare_cmd->add_option("--d", compare_args.d, "relaxation order");

    std::string gen_family, gen_nvec, gen_out = "problem.json";
    int gen_n = 0, gen_o = 0, gen_s = 2;
    std::uint64_t gen_seed = 1;
    CLI::App* gen_cmd = app.add_subcommand("generate", "emit a benchmark problem as JSON");
    gen_cmd->add_option("--family", gen_family,
                        "qp | qp-quartic | chained-wood | chained-singular | gen-rosenbrock | "
                        "discrete-boundary | broyden-banded")
        ->required();
    gen_cmd->add_option("--n", gen_n, "dimension (named test functions)");
    gen_cmd->add_option("--nvec", gen_nvec, "comma-separated block sizes (qp families)");
    gen_cmd->add_option("--o", gen_o, "overlap between consecutive blocks");
    gen_cmd->add_option("--s", gen_s, "qp constraint degree (1 or 2)");
    gen_cmd->add_option("--seed", gen_seed, "random seed");
    gen_cmd->add_option("--out", gen_out, "output file");

    CLI::App* export_cmd = app.add_subcommand("export", "write the SDP in SDPA sparse format");
    add_common(export_cmd, export_args);
    export_cmd->add_option("--hierarchy", export_args.hierarchy, "sparse-bsos | dense-bsos | sparse-put");
    export_cmd->add_option("--d", export_args.d, "relaxation order");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return cmd_solve(solve_args);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, sweep_dmax);
        if (compare_cmd->parsed()) return cmd_compare(compare_args);
        if (gen_cmd->parsed())
            return cmd_generate(gen_family, gen_n, gen_nvec, gen_o, gen_s, gen_seed, gen_out);
        if (export_cmd->parsed()) {
            if (export_args.sdpa_out.empty()) throw std::runtime_error("export needs --sdpa-out");
            const PopProblem problem = load_problem(export_args.input);
            const SparsityPattern pattern = resolve_pattern(export_args, problem);
            maybe_export_sdpa(export_args, problem, pattern, parse_hierarchy(export_args.hierarchy));
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
