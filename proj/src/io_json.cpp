#include "sbsos/io_json.hpp"

#include <fstream>
#include <json.hpp>

namespace sbsos {

namespace {

using nlohmann::json;

json polynomial_to_json(const Polynomial& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms()) {
        json term;
        term["expo"] = e.dense(p.num_vars());
        term["coef"] = c;
        terms.push_back(std::move(term));
    }
    return terms;
}

Polynomial polynomial_from_json(const json& terms, int n) {
    Polynomial p(n);
    for (const auto& term : terms) {
        const auto& expo = term.at("expo");
        if (static_cast<int>(expo.size()) != n)
            throw std::runtime_error("polynomial term: expo length != num_vars");
        std::vector<std::pair<int, int>> powers;
        for (int v = 0; v < n; ++v) {
            const int pw = expo[v].get<int>();
            if (pw < 0) throw std::runtime_error("polynomial term: negative power");
            if (pw > 0) powers.emplace_back(v, pw);
        }
        p.add_term(Exponent(std::move(powers)), term.at("coef").get<double>());
    }
    return p;
}

json pattern_to_json(const SparsityPattern& pattern) {
    json j;
    j["blocks"] = pattern.blocks;
    j["cons_blocks"] = pattern.cons_blocks;
    return j;
}

SparsityPattern pattern_from_json(const json& j, int n, int m) {
    SparsityPattern pattern;
    pattern.n = n;
    pattern.m = m;
    pattern.blocks = j.at("blocks").get<std::vector<std::vector<int>>>();
    if (j.contains("cons_blocks"))
        pattern.cons_blocks = j.at("cons_blocks").get<std::vector<std::vector<int>>>();
    else
        pattern.cons_blocks.resize(pattern.blocks.size());
    for (auto& block : pattern.blocks) std::sort(block.begin(), block.end());
    for (auto& jl : pattern.cons_blocks) std::sort(jl.begin(), jl.end());
    return pattern;
}

}  // namespace

std::string problem_to_json(const PopProblem& problem) {
    json j;
    j["num_vars"] = problem.n;
    j["objective"] = polynomial_to_json(problem.objective);
    json cons = json::array();
    for (const Polynomial& g : problem.constraints) cons.push_back(polynomial_to_json(g));
    j["constraints"] = std::move(cons);
    if (problem.pattern) j["pattern"] = pattern_to_json(*problem.pattern);
    return j.dump(2);
}

PopProblem problem_from_json(const std::string& text) {
    const json j = json::parse(text);
    PopProblem problem;
    problem.n = j.at("num_vars").get<int>();
    problem.objective = polynomial_from_json(j.at("objective"), problem.n);
    for (const auto& g : j.at("constraints"))
        problem.constraints.push_back(polynomial_from_json(g, problem.n));
    if (j.contains("pattern"))
        problem.pattern = pattern_from_json(j.at("pattern"), problem.n, problem.num_constraints());
    return problem;
}

PopProblem load_problem(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open problem file: " + path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return problem_from_json(text);
}

void save_problem(const PopProblem& problem, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write problem file: " + path);
    os << problem_to_json(problem) << "\n";
}

SparsityPattern load_pattern(const std::string& path, int n, int m) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open pattern file: " + path);
    json j;
    is >> j;
    return pattern_from_json(j, n, m);
}

void save_pattern(const SparsityPattern& pattern, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write pattern file: " + path);
    os << pattern_to_json(pattern).dump(2) << "\n";
}

}  // namespace sbsos
