#include "sbsos/sdpbuild.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sbsos {

namespace {

constexpr double kFixedRowTol = 1e-9;

struct BlockBasis {
    std::vector<int> vars;                          // sorted global indices
    std::vector<Exponent> monos;                    // I_l^{dmax}, global labels
    std::map<Exponent, int, GrlexLess> mono_index;  // within monos
};

BlockBasis block_monomials(const std::vector<int>& vars, int dmax) {
    BlockBasis b;
    b.vars = vars;
    const auto local = enumerate_monomials(static_cast<int>(vars.size()), dmax);
    b.monos.reserve(local.size());
    for (std::size_t i = 0; i < local.size(); ++i) {
        b.monos.push_back(local[i].relabeled(vars));
        b.mono_index.emplace(b.monos.back(), static_cast<int>(i));
    }
    return b;
}

std::vector<Exponent> block_basis_of_degree(const std::vector<int>& vars, int deg) {
    std::vector<Exponent> out;
    for (const Exponent& e : enumerate_monomials(static_cast<int>(vars.size()), deg))
        out.push_back(e.relabeled(vars));
    return out;
}

// gamma -> list of (i, j) basis pairs (i <= j) whose product carries that
// monomial with the given scalar weight; used for <Q, (v v^T w)_gamma> rows
using PsdHits = std::map<Exponent, std::vector<PsdCoeff>, GrlexLess>;

void accumulate_psd_hits(PsdHits& hits, int psd_block, const std::vector<Exponent>& basis,
                         const Polynomial* weight) {
    const int s = static_cast<int>(basis.size());
    for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j) {
            const Exponent prod = basis[i].plus(basis[j]);
            if (weight == nullptr) {
                hits[prod].push_back(PsdCoeff{psd_block, i, j, 1.0});
            } else {
                for (const auto& [e, c] : weight->terms())
                    hits[prod.plus(e)].push_back(PsdCoeff{psd_block, i, j, c});
            }
        }
}

struct CommonBuild {
    int dmax = 0;
    std::vector<BlockBasis> blocks;
    // gamma -> blocks whose monomial set contains it (ascending)
    std::map<Exponent, std::vector<int>, GrlexLess> gamma_blocks;
    // free variable ids: t is 0, then (block, mono) in enumeration order
    std::vector<std::vector<int>> fvar;
};

CommonBuild common_build(const PopProblem& problem, const SparsityPattern& pattern, int dmax,
                         ConicProgram& prog, VariableLedger& ledger) {
    CommonBuild cb;
    cb.dmax = dmax;
    const int p = pattern.num_blocks();
    cb.blocks.reserve(p);
    for (int l = 0; l < p; ++l) cb.blocks.push_back(block_monomials(pattern.blocks[l], dmax));
    for (int l = 0; l < p; ++l)
        for (const Exponent& e : cb.blocks[l].monos) cb.gamma_blocks[e].push_back(l);

    prog.num_free = 1;
    ledger.free_roles.push_back({VariableLedger::FreeRole::Kind::T, -1, Exponent{}});
    cb.fvar.resize(p);
    for (int l = 0; l < p; ++l) {
        cb.fvar[l].reserve(cb.blocks[l].monos.size());
        for (const Exponent& e : cb.blocks[l].monos) {
            cb.fvar[l].push_back(prog.num_free++);
            ledger.free_roles.push_back({VariableLedger::FreeRole::Kind::FCoef, l, e});
        }
    }
    return cb;
}

void append_linking_rows(const CommonBuild& cb, const PopProblem& problem, ConicProgram& prog) {
    for (const auto& [gamma, owners] : cb.gamma_blocks) {
        LinearRow row;
        row.label = {RowLabel::Kind::Linking, -1, gamma};
        if (gamma.is_constant()) row.free_terms.emplace_back(0, 1.0);  // t
        for (int l : owners) {
            const int idx = cb.blocks[l].mono_index.at(gamma);
            row.free_terms.emplace_back(cb.fvar[l][idx], 1.0);
        }
        row.rhs = problem.objective.coeff(gamma);
        prog.rows.push_back(std::move(row));
    }
}

void check_problem(const PopProblem& problem, const SparsityPattern& pattern) {
    const ValidationReport report = validate(pattern, problem);
    if (!report.ok) throw std::invalid_argument("build: invalid pattern: " + report.failures.front());
}

}  // namespace

BuildResult build_sparse_bsos(const PopProblem& problem, const SparsityPattern& pattern, int d, int k) {
    if (d < 1 || k < 1) throw std::invalid_argument("build_sparse_bsos: need d >= 1 and k >= 1");
    check_problem(problem, pattern);

    BuildResult result;
    result.ledger.hierarchy = Hierarchy::SparseBsos;
    result.ledger.d = d;
    result.ledger.k = k;
    result.ledger.pattern = pattern;

    int max_deg_g = 0;
    for (const Polynomial& g : problem.constraints) max_deg_g = std::max(max_deg_g, g.degree());
    const int producible = std::max(2 * k, d * max_deg_g);
    for (const auto& [e, c] : problem.objective.terms())
        if (e.degree() > producible) {
            result.status = BuildStatus::InfeasibleOrder;
            result.message = "objective monomial " + e.str() + " of degree " + std::to_string(e.degree()) +
                             " cannot appear in a certificate of order (d=" + std::to_string(d) +
                             ", k=" + std::to_string(k) + ")";
            return result;
        }

    const int dmax = dmax_degree(problem.objective, problem.constraints, d, k);
    result.ledger.dmax = dmax;

    ConicProgram& prog = result.program;
    CommonBuild cb = common_build(problem, pattern, dmax, prog, result.ledger);
    const int p = pattern.num_blocks();

    // per-block certificate machinery
    std::vector<std::vector<PairIndex>> pairs(p);
    std::vector<std::map<Exponent, std::vector<std::pair<int, double>>, GrlexLess>> lambda_hits(p);
    std::vector<PsdHits> psd_hits(p);
    std::vector<int> lambda_base(p);
    for (int l = 0; l < p; ++l) {
        pairs[l] = enumerate_pairs(pattern.cons_blocks[l], d);
        lambda_base[l] = prog.num_nonneg;
        prog.num_nonneg += static_cast<int>(pairs[l].size());
        for (std::size_t q = 0; q < pairs[l].size(); ++q) {
            result.ledger.nonneg_roles.push_back({l, pairs[l][q]});
            const Polynomial h = h_poly(pairs[l][q], problem.constraints);
            for (const auto& [e, c] : h.terms()) lambda_hits[l][e].emplace_back(static_cast<int>(q), c);
        }
        const std::vector<Exponent> basis = block_basis_of_degree(pattern.blocks[l], k);
        prog.psd_sides.push_back(static_cast<int>(basis.size()));
        result.ledger.psd_roles.push_back({l, -1});
        accumulate_psd_hits(psd_hits[l], l, basis, nullptr);
    }

    append_linking_rows(cb, problem, prog);

    for (int l = 0; l < p; ++l) {
        for (std::size_t mi = 0; mi < cb.blocks[l].monos.size(); ++mi) {
            const Exponent& gamma = cb.blocks[l].monos[mi];
            LinearRow row;
            row.label = {RowLabel::Kind::Certificate, l, gamma};
            row.free_terms.emplace_back(cb.fvar[l][mi], 1.0);
            if (auto it = lambda_hits[l].find(gamma); it != lambda_hits[l].end())
                for (const auto& [q, c] : it->second) row.nonneg_terms.emplace_back(lambda_base[l] + q, -c);
            if (auto it = psd_hits[l].find(gamma); it != psd_hits[l].end())
                for (PsdCoeff t : it->second) {
                    t.value = -t.value;
                    row.psd_terms.push_back(t);
                }
            prog.rows.push_back(std::move(row));
        }
    }

    prog.obj_free.emplace_back(0, 1.0);  // maximize t
    reduce(prog, result.ledger);
    return result;
}

BuildResult build_dense_bsos(const PopProblem& problem, int d, int k) {
    BuildResult result =
        build_sparse_bsos(problem, SparsityPattern::trivial(problem.n, problem.num_constraints()), d, k);
    result.ledger.hierarchy = Hierarchy::DenseBsos;
    return result;
}

BuildResult build_sparse_put(const PopProblem& problem, const SparsityPattern& pattern, int d) {
    if (d < 1) throw std::invalid_argument("build_sparse_put: need d >= 1");
    check_problem(problem, pattern);

    BuildResult result;
    result.ledger.hierarchy = Hierarchy::SparsePut;
    result.ledger.d = d;
    result.ledger.k = 0;
    result.ledger.pattern = pattern;

    if (problem.objective.degree() > 2 * d) {
        result.status = BuildStatus::InfeasibleOrder;
        result.message = "relaxation order too small: 2d < deg(f)";
        return result;
    }
    for (const Polynomial& g : problem.constraints)
        if (g.degree() > 2 * d) {
            result.status = BuildStatus::InfeasibleOrder;
            result.message = "relaxation order too small: 2d < deg(g_j)";
            return result;
        }

    const int dmax = 2 * d;
    result.ledger.dmax = dmax;

    ConicProgram& prog = result.program;
    CommonBuild cb = common_build(problem, pattern, dmax, prog, result.ledger);
    const int p = pattern.num_blocks();

    std::vector<PsdHits> psd_hits(p);
    for (int l = 0; l < p; ++l) {
        const std::vector<Exponent> basis0 = block_basis_of_degree(pattern.blocks[l], d);
        prog.psd_sides.push_back(static_cast<int>(basis0.size()));
        result.ledger.psd_roles.push_back({l, -1});
        accumulate_psd_hits(psd_hits[l], static_cast<int>(prog.psd_sides.size()) - 1, basis0, nullptr);
        for (int j : pattern.cons_blocks[l]) {
            const int dj = (2 * d - problem.constraints[j].degree()) / 2;
            const std::vector<Exponent> basis_j = block_basis_of_degree(pattern.blocks[l], dj);
            prog.psd_sides.push_back(static_cast<int>(basis_j.size()));
            result.ledger.psd_roles.push_back({l, j});
            accumulate_psd_hits(psd_hits[l], static_cast<int>(prog.psd_sides.size()) - 1, basis_j,
                                &problem.constraints[j]);
        }
    }

    append_linking_rows(cb, problem, prog);

    for (int l = 0; l < p; ++l) {
        for (std::size_t mi = 0; mi < cb.blocks[l].monos.size(); ++mi) {
            const Exponent& gamma = cb.blocks[l].monos[mi];
            LinearRow row;
            row.label = {RowLabel::Kind::Certificate, l, gamma};
            row.free_terms.emplace_back(cb.fvar[l][mi], 1.0);
            if (auto it = psd_hits[l].find(gamma); it != psd_hits[l].end())
                for (PsdCoeff t : it->second) {
                    t.value = -t.value;
                    row.psd_terms.push_back(t);
                }
            prog.rows.push_back(std::move(row));
        }
    }

    prog.obj_free.emplace_back(0, 1.0);
    reduce(prog, result.ledger);
    return result;
}

ReduceStats reduce(ConicProgram& program, VariableLedger& ledger) {
    ReduceStats stats;
    std::vector<double> fixed_value(program.num_free, 0.0);
    std::vector<bool> fixed(program.num_free, false);

    for (const LinearRow& row : program.rows) {
        if (row.label.kind != RowLabel::Kind::Linking) continue;
        if (row.free_terms.size() != 1 || !row.nonneg_terms.empty() || !row.psd_terms.empty()) continue;
        const auto& [var, coef] = row.free_terms.front();
        const VariableLedger::FreeRole& role = ledger.free_roles[var];
        if (role.kind != VariableLedger::FreeRole::Kind::FCoef) continue;
        fixed[var] = true;
        fixed_value[var] = row.rhs / coef;
        ledger.eliminated.push_back({role.block, role.gamma, fixed_value[var]});
        ++stats.eliminated_vars;
    }
    if (stats.eliminated_vars == 0) return stats;

    // substitute into every row, dropping rows with no variables left
    std::vector<LinearRow> kept;
    kept.reserve(program.rows.size());
    for (LinearRow& row : program.rows) {
        std::vector<std::pair<int, double>> remaining;
        remaining.reserve(row.free_terms.size());
        for (const auto& [var, coef] : row.free_terms) {
            if (fixed[var])
                row.rhs -= coef * fixed_value[var];
            else
                remaining.emplace_back(var, coef);
        }
        row.free_terms = std::move(remaining);
        if (row.empty()) {
            if (std::abs(row.rhs) > kFixedRowTol)
                throw std::runtime_error("reduce: inconsistent fixed row (malformed build)");
            ledger.removed_rows.push_back(row.label);
            ++stats.removed_rows;
            continue;
        }
        kept.push_back(std::move(row));
    }
    program.rows = std::move(kept);

    // compact free-variable indices
    std::vector<int> remap(program.num_free, -1);
    std::vector<VariableLedger::FreeRole> new_roles;
    int next = 0;
    for (int v = 0; v < program.num_free; ++v)
        if (!fixed[v]) {
            remap[v] = next++;
            new_roles.push_back(ledger.free_roles[v]);
        }
    program.num_free = next;
    ledger.free_roles = std::move(new_roles);
    for (LinearRow& row : program.rows)
        for (auto& [var, coef] : row.free_terms) var = remap[var];
    for (auto& [var, coef] : program.obj_free) {
        if (remap[var] < 0) throw std::runtime_error("reduce: objective variable was eliminated");
        var = remap[var];
    }
    return stats;
}

}  // namespace sbsos
