#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbsos {

/// Multi-index of a monomial, stored sparsely as (variable, power) pairs with
/// power > 0, sorted by variable index. Variable indices are 0-based.
class Exponent {
  public:
    Exponent() = default;
    explicit Exponent(std::vector<std::pair<int, int>> powers);

    static Exponent unit(int var, int power = 1);

    int degree() const;
    int power(int var) const;
    bool is_constant() const { return powers_.empty(); }

    // exponent-wise sum, i.e. the exponent of x^a * x^b
    Exponent plus(const Exponent& other) const;

    const std::vector<std::pair<int, int>>& entries() const { return powers_; }
    std::vector<int> support() const;
    int max_var() const { return powers_.empty() ? -1 : powers_.back().first; }

    // dense exponent vector of length n
    std::vector<int> dense(int n) const;

    // remap variable indices (e.g. block-local -> global)
    Exponent relabeled(std::span<const int> var_map) const;

    bool operator==(const Exponent& other) const { return powers_ == other.powers_; }
    bool operator!=(const Exponent& other) const { return !(*this == other); }

    std::string str() const;  // e.g. "x1^2*x3" (1-based display)

  private:
    std::vector<std::pair<int, int>> powers_;
};

/// Graded lexicographic order: lower total degree first; within a degree the
/// exponent vector that is lexicographically larger comes first, so for n=2,
/// d=2 the order is 1, x1, x2, x1^2, x1*x2, x2^2. Moment-matrix and SDP row
/// indexing rely on this order being stable.
bool grlex_less(const Exponent& a, const Exponent& b);

struct GrlexLess {
    bool operator()(const Exponent& a, const Exponent& b) const { return grlex_less(a, b); }
};

/// Sparse multivariate polynomial with double coefficients, keyed by exponent.
/// Zero coefficients are never stored.
class Polynomial {
  public:
    using TermMap = std::map<Exponent, double, GrlexLess>;

    Polynomial() : num_vars_(0) {}
    explicit Polynomial(int num_vars);

    static Polynomial constant(int num_vars, double c);
    static Polynomial variable(int num_vars, int var);

    int num_vars() const { return num_vars_; }
    const TermMap& terms() const { return terms_; }
    int term_count() const { return static_cast<int>(terms_.size()); }
    bool is_zero() const { return terms_.empty(); }

    int degree() const;  // 0 for the zero polynomial
    double coeff(const Exponent& e) const;
    double constant_term() const { return coeff(Exponent{}); }

    // accumulates c into the coefficient of e, dropping it if it cancels
    void add_term(const Exponent& e, double c);

    double evaluate(std::span<const double> point) const;
    std::vector<int> support_vars() const;

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(double scale);

    std::string str() const;

  private:
    int num_vars_;
    TermMap terms_;
};

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial sub(const Polynomial& p, const Polynomial& q);
Polynomial mul(const Polynomial& p, const Polynomial& q);
Polynomial mul(const Polynomial& p, double scale);
Polynomial pow(const Polynomial& p, int e);

inline Polynomial operator+(const Polynomial& p, const Polynomial& q) { return add(p, q); }
inline Polynomial operator-(const Polynomial& p, const Polynomial& q) { return sub(p, q); }
inline Polynomial operator*(const Polynomial& p, const Polynomial& q) { return mul(p, q); }
inline Polynomial operator*(double s, const Polynomial& p) { return mul(p, s); }

/// Coefficient-wise comparison with absolute tolerance (default 1e-9).
bool approx_equal(const Polynomial& p, const Polynomial& q, double tol = 1e-9);

/// All exponents over n variables with total degree <= d, in graded lex order.
/// The result has exactly binomial(n + d, d) entries.
std::vector<Exponent> enumerate_monomials(int n, int d);

/// Exact binomial coefficient; throws on overflow of long long.
long long binomial(long long n, long long k);

}  // namespace sbsos
