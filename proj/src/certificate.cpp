#include "sbsos/certificate.hpp"

#include <algorithm>

namespace sbsos {

std::vector<PairIndex> enumerate_pairs(const std::vector<int>& J, int d) {
    if (d < 0) throw std::invalid_argument("enumerate_pairs: need d >= 0");
    const int ml = static_cast<int>(J.size());
    std::vector<PairIndex> out;
    if (ml == 0) {
        out.push_back(PairIndex{});
        return out;
    }
    // enumerate over 2*ml slots: the first ml map to alpha, the rest to beta
    const std::vector<Exponent> combined = enumerate_monomials(2 * ml, d);
    out.reserve(combined.size());
    for (const Exponent& e : combined) {
        std::vector<std::pair<int, int>> a, b;
        for (const auto& [slot, p] : e.entries()) {
            if (slot < ml)
                a.emplace_back(J[slot], p);
            else
                b.emplace_back(J[slot - ml], p);
        }
        out.push_back(PairIndex{Exponent(std::move(a)), Exponent(std::move(b))});
    }
    return out;
}

Polynomial h_poly(const PairIndex& pair, const std::vector<Polynomial>& constraints) {
    if (constraints.empty()) throw std::invalid_argument("h_poly: no constraints");
    const int n = constraints[0].num_vars();
    Polynomial h = Polynomial::constant(n, 1.0);
    auto factor_in = [&](const Exponent& idx, bool complement) {
        for (const auto& [j, p] : idx.entries()) {
            if (j >= static_cast<int>(constraints.size()))
                throw std::out_of_range("h_poly: constraint index out of range");
            Polynomial base = constraints[j];
            if (complement) base = Polynomial::constant(n, 1.0) - base;
            h = mul(h, pow(base, p));
        }
    };
    factor_in(pair.alpha, false);
    factor_in(pair.beta, true);
    return h;
}

int dmax_degree(const Polynomial& objective, const std::vector<Polynomial>& constraints, int d, int k) {
    if (d < 1 || k < 1) throw std::invalid_argument("dmax_degree: need d >= 1 and k >= 1");
    int max_g = 0;
    for (const Polynomial& g : constraints) max_g = std::max(max_g, g.degree());
    return std::max({objective.degree(), 2 * k, d * max_g});
}

}  // namespace sbsos
