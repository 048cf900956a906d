#include "sbsos/sparsity.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace sbsos {

namespace {

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
    // both sorted
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<int> sorted_intersection(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

SparsityPattern SparsityPattern::trivial(int n, int m) {
    SparsityPattern p;
    p.n = n;
    p.m = m;
    p.blocks.resize(1);
    p.blocks[0].resize(n);
    std::iota(p.blocks[0].begin(), p.blocks[0].end(), 0);
    p.cons_blocks.resize(1);
    p.cons_blocks[0].resize(m);
    std::iota(p.cons_blocks[0].begin(), p.cons_blocks[0].end(), 0);
    return p;
}

RipResult rip_check(const std::vector<std::vector<int>>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("rip_check: no blocks");
    std::vector<int> covered = blocks[0];
    for (std::size_t l = 1; l < blocks.size(); ++l) {
        const std::vector<int> inter = sorted_intersection(blocks[l], covered);
        bool found = false;
        for (std::size_t s = 0; s < l && !found; ++s) found = is_subset(inter, blocks[s]);
        if (!found) return RipResult{false, static_cast<int>(l)};
        covered = sorted_union(covered, blocks[l]);
    }
    return RipResult{true, -1};
}

ValidationReport validate(const SparsityPattern& pattern, const PopProblem& problem) {
    ValidationReport report;
    if (pattern.n != problem.n) {
        report.fail("pattern n does not match problem n");
        return report;
    }
    if (pattern.m != problem.num_constraints()) {
        report.fail("pattern m does not match constraint count");
        return report;
    }
    if (pattern.blocks.empty() || pattern.blocks.size() != pattern.cons_blocks.size()) {
        report.fail("pattern must have equally many variable and constraint blocks");
        return report;
    }

    std::vector<bool> var_covered(problem.n, false);
    for (const auto& block : pattern.blocks)
        for (int v : block) {
            if (v < 0 || v >= problem.n) {
                report.fail("variable index out of range in a block");
                return report;
            }
            var_covered[v] = true;
        }
    for (int v = 0; v < problem.n; ++v)
        if (!var_covered[v]) {
            report.fail("variable cover: x" + std::to_string(v + 1) + " appears in no block");
            break;
        }

    std::vector<bool> cons_covered(problem.num_constraints(), false);
    for (const auto& jl : pattern.cons_blocks)
        for (int j : jl) {
            if (j < 0 || j >= problem.num_constraints()) {
                report.fail("constraint index out of range in a block");
                return report;
            }
            cons_covered[j] = true;
        }
    for (int j = 0; j < problem.num_constraints(); ++j)
        if (!cons_covered[j]) {
            report.fail("constraint cover: g" + std::to_string(j + 1) + " appears in no block");
            break;
        }

    for (std::size_t l = 0; l < pattern.cons_blocks.size(); ++l)
        for (int j : pattern.cons_blocks[l]) {
            const auto supp = problem.constraints[j].support_vars();
            if (!is_subset(supp, pattern.blocks[l])) {
                report.fail("constraint support: g" + std::to_string(j + 1) + " not contained in block " +
                            std::to_string(l + 1));
            }
        }

    for (const auto& [e, c] : problem.objective.terms()) {
        const auto supp = e.support();
        bool found = false;
        for (const auto& block : pattern.blocks)
            if (is_subset(supp, block)) {
                found = true;
                break;
            }
        if (!found) {
            report.fail("objective monomial " + e.str() + " fits in no block");
            break;
        }
    }

    const RipResult rip = rip_check(pattern.blocks);
    if (!rip.ok)
        report.fail("RIP fails at block " + std::to_string(rip.first_failing_block + 1));
    return report;
}

SparsityPattern banded_pattern(const std::vector<int>& nvec, int overlap) {
    if (nvec.empty()) throw std::invalid_argument("banded_pattern: empty block size vector");
    if (overlap < 0) throw std::invalid_argument("banded_pattern: negative overlap");
    SparsityPattern pattern;
    int c = 0;
    for (std::size_t l = 0; l < nvec.size(); ++l) {
        if (nvec[l] <= overlap) throw std::invalid_argument("banded_pattern: block size must exceed overlap");
        c = (l == 0) ? nvec[0] : c + nvec[l] - overlap;
        std::vector<int> block(nvec[l]);
        std::iota(block.begin(), block.end(), c - nvec[l]);
        pattern.blocks.push_back(std::move(block));
    }
    pattern.n = c;
    pattern.cons_blocks.resize(nvec.size());
    return pattern;
}

void assign_constraints(SparsityPattern& pattern, const PopProblem& problem, ConstraintAssignment mode) {
    pattern.m = problem.num_constraints();
    pattern.cons_blocks.assign(pattern.blocks.size(), {});
    for (int j = 0; j < problem.num_constraints(); ++j) {
        const auto supp = problem.constraints[j].support_vars();
        bool placed = false;
        for (std::size_t l = 0; l < pattern.blocks.size(); ++l) {
            if (is_subset(supp, pattern.blocks[l])) {
                pattern.cons_blocks[l].push_back(j);
                placed = true;
                if (mode == ConstraintAssignment::FirstSupportingBlock) break;
            }
        }
        if (!placed)
            throw std::invalid_argument("assign_constraints: g" + std::to_string(j + 1) +
                                        " is supported in no block");
    }
}

namespace {

// Maximal cliques of the chordal extension induced by a minimum-degree
// elimination ordering, ties broken by lowest vertex index.
std::vector<std::vector<int>> chordal_cliques(std::vector<std::set<int>> adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<bool> eliminated(n, false);
    std::vector<std::vector<int>> cliques;
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v) {
            if (eliminated[v]) continue;
            if (best == -1 || adj[v].size() < adj[best].size()) best = v;
        }
        std::vector<int> clique;
        clique.push_back(best);
        for (int u : adj[best]) clique.push_back(u);
        std::sort(clique.begin(), clique.end());
        cliques.push_back(clique);
        // fill: connect the remaining neighbours of `best`
        for (int u : adj[best])
            for (int w : adj[best])
                if (u < w) {
                    adj[u].insert(w);
                    adj[w].insert(u);
                }
        for (int u : adj[best]) adj[u].erase(best);
        adj[best].clear();
        eliminated[best] = true;
    }
    // keep only maximal cliques, preferring earlier (larger-context) ones
    std::vector<std::vector<int>> maximal;
    for (const auto& c : cliques) {
        bool contained = false;
        for (const auto& other : cliques) {
            if (&other == &c) continue;
            if (other.size() > c.size() && is_subset(c, other)) {
                contained = true;
                break;
            }
            if (other.size() == c.size() && other != c && is_subset(c, other)) {
                contained = true;
                break;
            }
        }
        if (!contained && std::find(maximal.begin(), maximal.end(), c) == maximal.end())
            maximal.push_back(c);
    }
    return maximal;
}

// Orders cliques along a maximum-weight spanning tree of the clique
// intersection graph (a clique tree), which guarantees the RIP.
std::vector<std::vector<int>> rip_order(std::vector<std::vector<int>> cliques) {
    const int p = static_cast<int>(cliques.size());
    if (p <= 1) return cliques;
    std::vector<bool> in_tree(p, false);
    std::vector<int> order;
    order.push_back(0);
    in_tree[0] = true;
    for (int step = 1; step < p; ++step) {
        int best = -1, best_w = -1;
        for (int c = 0; c < p; ++c) {
            if (in_tree[c]) continue;
            int w = 0;
            for (int t : order) {
                const auto inter = sorted_intersection(cliques[c], cliques[t]);
                w = std::max(w, static_cast<int>(inter.size()));
            }
            if (w > best_w) {
                best_w = w;
                best = c;
            }
        }
        order.push_back(best);
        in_tree[best] = true;
    }
    std::vector<std::vector<int>> out;
    out.reserve(p);
    for (int c : order) out.push_back(std::move(cliques[c]));
    return out;
}

}  // namespace

SparsityPattern detect_pattern(const PopProblem& problem) {
    const int n = problem.n;
    std::vector<std::set<int>> adj(n);
    auto connect = [&](const std::vector<int>& vars) {
        for (std::size_t a = 0; a < vars.size(); ++a)
            for (std::size_t b = a + 1; b < vars.size(); ++b) {
                adj[vars[a]].insert(vars[b]);
                adj[vars[b]].insert(vars[a]);
            }
    };
    for (const auto& [e, c] : problem.objective.terms()) connect(e.support());
    for (const auto& g : problem.constraints) connect(g.support_vars());

    SparsityPattern pattern;
    pattern.n = n;
    pattern.blocks = rip_order(chordal_cliques(std::move(adj)));
    const RipResult rip = rip_check(pattern.blocks);
    if (!rip.ok) throw std::logic_error("detect_pattern: clique-tree ordering violates the RIP");
    assign_constraints(pattern, problem, ConstraintAssignment::FirstSupportingBlock);
    return pattern;
}

std::vector<Polynomial> decompose_objective(const PopProblem& problem, const SparsityPattern& pattern) {
    const ValidationReport report = validate(pattern, problem);
    if (!report.ok) throw std::invalid_argument("decompose_objective: invalid pattern: " + report.failures[0]);
    std::vector<Polynomial> parts(pattern.num_blocks(), Polynomial(problem.n));
    for (const auto& [e, c] : problem.objective.terms()) {
        const auto supp = e.support();
        bool placed = false;
        for (std::size_t l = 0; l < pattern.blocks.size() && !placed; ++l)
            if (is_subset(supp, pattern.blocks[l])) {
                parts[l].add_term(e, c);
                placed = true;
            }
        if (!placed) throw std::invalid_argument("decompose_objective: monomial fits in no block");
    }
    return parts;
}

PopProblem add_ball_constraints(const PopProblem& problem, const std::vector<double>& radii) {
    if (!problem.pattern) throw std::invalid_argument("add_ball_constraints: problem has no pattern");
    const SparsityPattern& pattern = *problem.pattern;
    if (radii.size() != pattern.blocks.size())
        throw std::invalid_argument("add_ball_constraints: need one radius per block");
    PopProblem out = problem;
    SparsityPattern& pat = *out.pattern;
    for (std::size_t l = 0; l < pattern.blocks.size(); ++l) {
        if (radii[l] <= 0.0) throw std::invalid_argument("add_ball_constraints: radius must be positive");
        Polynomial ball = Polynomial::constant(problem.n, 1.0);
        for (int v : pattern.blocks[l]) ball.add_term(Exponent::unit(v, 2), -1.0 / radii[l]);
        pat.cons_blocks[l].push_back(out.num_constraints());
        out.constraints.push_back(std::move(ball));
    }
    pat.m = out.num_constraints();
    return out;
}

PopProblem scale_constraints(const PopProblem& problem, const std::vector<double>& upper_bounds) {
    if (upper_bounds.size() != problem.constraints.size())
        throw std::invalid_argument("scale_constraints: need one bound per constraint");
    PopProblem out = problem;
    for (std::size_t j = 0; j < upper_bounds.size(); ++j) {
        if (upper_bounds[j] <= 0.0) throw std::invalid_argument("scale_constraints: bound must be positive");
        out.constraints[j] *= 1.0 / upper_bounds[j];
    }
    return out;
}

}  // namespace sbsos
