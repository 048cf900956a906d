#include "sbsos/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sbsos {

Exponent::Exponent(std::vector<std::pair<int, int>> powers) : powers_(std::move(powers)) {
    std::sort(powers_.begin(), powers_.end());
    for (std::size_t i = 0; i < powers_.size(); ++i) {
        if (powers_[i].second <= 0) throw std::invalid_argument("Exponent: powers must be positive");
        if (powers_[i].first < 0) throw std::invalid_argument("Exponent: negative variable index");
        if (i > 0 && powers_[i].first == powers_[i - 1].first)
            throw std::invalid_argument("Exponent: duplicate variable index");
    }
}

Exponent Exponent::unit(int var, int power) {
    if (power == 0) return Exponent{};
    return Exponent({{var, power}});
}

int Exponent::degree() const {
    int d = 0;
    for (const auto& [v, p] : powers_) d += p;
    return d;
}

int Exponent::power(int var) const {
    for (const auto& [v, p] : powers_)
        if (v == var) return p;
    return 0;
}

Exponent Exponent::plus(const Exponent& other) const {
    Exponent out;
    out.powers_.reserve(powers_.size() + other.powers_.size());
    std::size_t i = 0, j = 0;
    while (i < powers_.size() || j < other.powers_.size()) {
        if (j == other.powers_.size() || (i < powers_.size() && powers_[i].first < other.powers_[j].first)) {
            out.powers_.push_back(powers_[i++]);
        } else if (i == powers_.size() || other.powers_[j].first < powers_[i].first) {
            out.powers_.push_back(other.powers_[j++]);
        } else {
            out.powers_.emplace_back(powers_[i].first, powers_[i].second + other.powers_[j].second);
            ++i;
            ++j;
        }
    }
    return out;
}

std::vector<int> Exponent::support() const {
    std::vector<int> s;
    s.reserve(powers_.size());
    for (const auto& [v, p] : powers_) s.push_back(v);
    return s;
}

std::vector<int> Exponent::dense(int n) const {
    std::vector<int> d(n, 0);
    for (const auto& [v, p] : powers_) {
        if (v >= n) throw std::out_of_range("Exponent::dense: variable index out of range");
        d[v] = p;
    }
    return d;
}

Exponent Exponent::relabeled(std::span<const int> var_map) const {
    std::vector<std::pair<int, int>> out;
    out.reserve(powers_.size());
    for (const auto& [v, p] : powers_) {
        if (v < 0 || static_cast<std::size_t>(v) >= var_map.size())
            throw std::out_of_range("Exponent::relabeled: index outside map");
        out.emplace_back(var_map[v], p);
    }
    return Exponent(std::move(out));
}

std::string Exponent::str() const {
    if (powers_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, p] : powers_) {
        if (!first) os << "*";
        os << "x" << (v + 1);
        if (p > 1) os << "^" << p;
        first = false;
    }
    return os.str();
}

bool grlex_less(const Exponent& a, const Exponent& b) {
    const int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    // same degree: first variable index where the powers differ decides,
    // larger power first (x1^2 before x1*x2 before x2^2)
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    std::size_t i = 0, j = 0;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].first == eb[j].first) {
            if (ea[i].second != eb[j].second) return ea[i].second > eb[j].second;
            ++i;
            ++j;
        } else if (ea[i].first < eb[j].first) {
            return true;  // a has positive power at a smaller index
        } else {
            return false;
        }
    }
    return i < ea.size();
}

Polynomial::Polynomial(int num_vars) : num_vars_(num_vars) {
    if (num_vars < 0) throw std::invalid_argument("Polynomial: negative num_vars");
}

Polynomial Polynomial::constant(int num_vars, double c) {
    Polynomial p(num_vars);
    p.add_term(Exponent{}, c);
    return p;
}

Polynomial Polynomial::variable(int num_vars, int var) {
    if (var < 0 || var >= num_vars) throw std::out_of_range("Polynomial::variable: index out of range");
    Polynomial p(num_vars);
    p.add_term(Exponent::unit(var), 1.0);
    return p;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.degree());
    return d;
}

double Polynomial::coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const Exponent& e, double c) {
    if (c == 0.0) return;
    if (e.max_var() >= num_vars_) throw std::out_of_range("Polynomial::add_term: variable index out of range");
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double Polynomial::evaluate(std::span<const double> point) const {
    if (static_cast<int>(point.size()) != num_vars_)
        throw std::invalid_argument("Polynomial::evaluate: point length mismatch");
    double total = 0.0;
    for (const auto& [e, c] : terms_) {
        double m = c;
        for (const auto& [v, p] : e.entries()) {
            double base = point[v];
            for (int r = 0; r < p; ++r) m *= base;
        }
        total += m;
    }
    return total;
}

std::vector<int> Polynomial::support_vars() const {
    std::vector<bool> seen(num_vars_, false);
    for (const auto& [e, c] : terms_)
        for (const auto& [v, p] : e.entries()) seen[v] = true;
    std::vector<int> out;
    for (int v = 0; v < num_vars_; ++v)
        if (seen[v]) out.push_back(v);
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    if (other.num_vars_ != num_vars_) throw std::invalid_argument("Polynomial: num_vars mismatch");
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    if (other.num_vars_ != num_vars_) throw std::invalid_argument("Polynomial: num_vars mismatch");
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(double scale) {
    if (scale == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= scale;
    return *this;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << (c >= 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        os << std::abs(c);
        if (!e.is_constant()) os << "*" << e.str();
        first = false;
    }
    return os.str();
}

Polynomial add(const Polynomial& p, const Polynomial& q) {
    Polynomial out = p;
    out += q;
    return out;
}

Polynomial sub(const Polynomial& p, const Polynomial& q) {
    Polynomial out = p;
    out -= q;
    return out;
}

Polynomial mul(const Polynomial& p, const Polynomial& q) {
    if (p.num_vars() != q.num_vars()) throw std::invalid_argument("mul: num_vars mismatch");
    Polynomial out(p.num_vars());
    for (const auto& [ep, cp] : p.terms())
        for (const auto& [eq, cq] : q.terms()) out.add_term(ep.plus(eq), cp * cq);
    return out;
}

Polynomial mul(const Polynomial& p, double scale) {
    Polynomial out = p;
    out *= scale;
    return out;
}

Polynomial pow(const Polynomial& p, int e) {
    if (e < 0) throw std::invalid_argument("pow: negative exponent");
    Polynomial out = Polynomial::constant(p.num_vars(), 1.0);
    for (int i = 0; i < e; ++i) out = mul(out, p);
    return out;
}

bool approx_equal(const Polynomial& p, const Polynomial& q, double tol) {
    if (p.num_vars() != q.num_vars()) return false;
    for (const auto& [e, c] : p.terms())
        if (std::abs(c - q.coeff(e)) > tol) return false;
    for (const auto& [e, c] : q.terms())
        if (std::abs(c - p.coeff(e)) > tol) return false;
    return true;
}

namespace {

void enumerate_rec(int n, int var, int remaining, std::vector<std::pair<int, int>>& stack,
                   std::vector<Exponent>& out) {
    if (var == n) {
        if (remaining == 0) out.push_back(Exponent(stack));
        return;
    }
    // larger power at the current variable first, matching grlex order
    for (int p = remaining; p >= 1; --p) {
        stack.emplace_back(var, p);
        enumerate_rec(n, var + 1, remaining - p, stack, out);
        stack.pop_back();
    }
    enumerate_rec(n, var + 1, remaining, stack, out);
}

}  // namespace

std::vector<Exponent> enumerate_monomials(int n, int d) {
    if (n < 1) throw std::invalid_argument("enumerate_monomials: need n >= 1");
    if (d < 0) throw std::invalid_argument("enumerate_monomials: need d >= 0");
    std::vector<Exponent> out;
    out.reserve(static_cast<std::size_t>(binomial(n + d, d)));
    std::vector<std::pair<int, int>> stack;
    for (int deg = 0; deg <= d; ++deg) enumerate_rec(n, 0, deg, stack, out);
    return out;
}

long long binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (long long i = 1; i <= k; ++i) {
        // r * (n - k + i) is always divisible by i here
        if (r > std::numeric_limits<long long>::max() / (n - k + i))
            throw std::overflow_error("binomial: overflow");
        r = r * (n - k + i) / i;
    }
    return r;
}

}  // namespace sbsos
