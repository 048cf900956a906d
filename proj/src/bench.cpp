#include "sbsos/bench.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace sbsos {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t kTagA = 0xA0;
constexpr std::uint64_t kTagB = 0xB0;
constexpr std::uint64_t kTagQuartic = 0xC0;

// per-block feasibility constraints 1 - sum_{i in I_l} x_i^s, then x_i >= 0
std::vector<Polynomial> box_constraints(int n, const SparsityPattern& pattern, int s) {
    std::vector<Polynomial> g;
    for (const auto& block : pattern.blocks) {
        Polynomial cap = Polynomial::constant(n, 1.0);
        for (int v : block) cap.add_term(Exponent::unit(v, s), -1.0);
        g.push_back(std::move(cap));
    }
    for (int v = 0; v < n; ++v) g.push_back(Polynomial::variable(n, v));
    return g;
}

Eigen::MatrixXd random_banded_symmetric(int n, const SparsityPattern& pattern, RandomStream& stream) {
    std::vector<std::vector<bool>> covered(n, std::vector<bool>(n, false));
    for (const auto& block : pattern.blocks)
        for (int a : block)
            for (int b : block) covered[a][b] = true;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (covered[i][j]) A(i, j) = A(j, i) = stream.uniform_sym();
    return A;
}

Polynomial quadratic_objective(int n, const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    Polynomial f(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double coef = (i == j) ? A(i, i) : 2.0 * A(i, j);
            if (coef != 0.0) f.add_term(Exponent::unit(i).plus(Exponent::unit(j)), coef);
        }
        f.add_term(Exponent::unit(i), b[i]);
    }
    return f;
}

PopProblem finish_qp(int n, SparsityPattern pattern, Polynomial objective, int s) {
    PopProblem prob;
    prob.n = n;
    prob.objective = std::move(objective);
    prob.constraints = box_constraints(n, pattern, s);
    assign_constraints(pattern, prob, ConstraintAssignment::AllSupportingBlocks);
    prob.pattern = std::move(pattern);
    return prob;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t tag) : engine_(splitmix64(seed ^ splitmix64(tag))) {}

double RandomStream::uniform_sym() {
    // 53 uniform bits -> [0,1), then stretched to [-1,1)
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

BenchFamily bench_family_from_name(const std::string& name) {
    if (name == "qp") return BenchFamily::Qp;
    if (name == "qp-quartic") return BenchFamily::QpQuartic;
    if (name == "chained-wood") return BenchFamily::ChainedWood;
    if (name == "chained-singular") return BenchFamily::ChainedSingular;
    if (name == "gen-rosenbrock") return BenchFamily::GenRosenbrock;
    if (name == "discrete-boundary") return BenchFamily::DiscreteBoundary;
    if (name == "broyden-banded") return BenchFamily::BroydenBanded;
    throw std::invalid_argument("unknown benchmark family: " + name);
}

std::string bench_family_name(BenchFamily family) {
    switch (family) {
        case BenchFamily::Qp: return "qp";
        case BenchFamily::QpQuartic: return "qp-quartic";
        case BenchFamily::ChainedWood: return "chained-wood";
        case BenchFamily::ChainedSingular: return "chained-singular";
        case BenchFamily::GenRosenbrock: return "gen-rosenbrock";
        case BenchFamily::DiscreteBoundary: return "discrete-boundary";
        case BenchFamily::BroydenBanded: return "broyden-banded";
    }
    return "unknown";
}

PopProblem gen_qp(const std::vector<int>& nvec, int overlap, int s, std::uint64_t seed) {
    if (s != 1 && s != 2) throw std::invalid_argument("gen_qp: s must be 1 or 2");
    SparsityPattern pattern = banded_pattern(nvec, overlap);
    const int n = pattern.n;

    RandomStream astream(seed, kTagA);
    Eigen::MatrixXd A;
    bool indefinite = false;
    for (int attempt = 0; attempt < 100 && !indefinite; ++attempt) {
        A = random_banded_symmetric(n, pattern, astream);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
        indefinite = es.eigenvalues().minCoeff() < 0 && es.eigenvalues().maxCoeff() > 0;
    }
    if (!indefinite) throw std::runtime_error("gen_qp: could not draw an indefinite A");

    RandomStream bstream(seed, kTagB);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b[i] = bstream.uniform_sym();

    return finish_qp(n, std::move(pattern), quadratic_objective(n, A, b), s);
}

PopProblem gen_qp_quartic(const std::vector<int>& nvec, int overlap, std::uint64_t seed) {
    SparsityPattern pattern = banded_pattern(nvec, overlap);
    const int n = pattern.n;

    RandomStream astream(seed, kTagA);
    Eigen::MatrixXd A;
    bool indefinite = false;
    for (int attempt = 0; attempt < 100 && !indefinite; ++attempt) {
        A = random_banded_symmetric(n, pattern, astream);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
        indefinite = es.eigenvalues().minCoeff() < 0 && es.eigenvalues().maxCoeff() > 0;
    }
    if (!indefinite) throw std::runtime_error("gen_qp_quartic: could not draw an indefinite A");

    RandomStream bstream(seed, kTagB);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b[i] = bstream.uniform_sym();

    Polynomial f = quadratic_objective(n, A, b);
    RandomStream qstream(seed, kTagQuartic);
    for (int i = 0; i < n; ++i) f.add_term(Exponent::unit(i, 4), qstream.uniform_sym());

    // constraints 1 - x_i^2 >= 0 and x_i >= 0 for every variable
    PopProblem prob;
    prob.n = n;
    prob.objective = std::move(f);
    for (int i = 0; i < n; ++i) {
        Polynomial cap = Polynomial::constant(n, 1.0);
        cap.add_term(Exponent::unit(i, 2), -1.0);
        prob.constraints.push_back(std::move(cap));
    }
    for (int i = 0; i < n; ++i) prob.constraints.push_back(Polynomial::variable(n, i));
    assign_constraints(pattern, prob, ConstraintAssignment::AllSupportingBlocks);
    prob.pattern = std::move(pattern);
    return prob;
}

PopProblem gen_qp_convex(const std::vector<int>& nvec, int overlap, std::uint64_t seed) {
    SparsityPattern pattern = banded_pattern(nvec, overlap);
    const int n = pattern.n;

    RandomStream astream(seed, kTagA);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (const auto& block : pattern.blocks) {
        const int nl = static_cast<int>(block.size());
        Eigen::MatrixXd B(nl, nl);
        for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nl; ++j) B(i, j) = astream.uniform_sym();
        const Eigen::MatrixXd G = B.transpose() * B / nl;
        for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nl; ++j) A(block[i], block[j]) += G(i, j);
    }

    RandomStream bstream(seed, kTagB);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b[i] = bstream.uniform_sym();

    return finish_qp(n, std::move(pattern), quadratic_objective(n, A, b), 2);
}

PopProblem gen_test_function(BenchFamily family, int n) {
    Polynomial f(n);
    std::vector<int> nvec;
    int overlap = 0;

    auto square = [](const Polynomial& p) { return mul(p, p); };
    auto x = [n](int i) { return Polynomial::variable(n, i); };  // 0-based

    switch (family) {
        case BenchFamily::ChainedWood: {
            if (n % 4 != 0 || n < 4) throw std::invalid_argument("chained-wood: need n = 0 mod 4");
            for (int i = 1; i <= n / 2 - 1; ++i) {
                const int j = 2 * i - 1;  // 1-based
                const Polynomial xj = x(j - 1), xj1 = x(j), xj2 = x(j + 1), xj3 = x(j + 2);
                f += 100.0 * square(xj1 - square(xj));
                f += square(Polynomial::constant(n, 1.0) - xj);
                f += 90.0 * square(xj3 - square(xj2));
                f += square(Polynomial::constant(n, 1.0) - xj2);
                f += 10.0 * square(xj1 + xj3 - Polynomial::constant(n, 2.0));
                f += 0.1 * square(xj1 - xj3);
            }
            nvec.assign((n - 2) / 2, 4);
            overlap = 2;
            break;
        }
        case BenchFamily::ChainedSingular: {
            if (n % 4 != 0 || n < 4) throw std::invalid_argument("chained-singular: need n = 0 mod 4");
            for (int i = 1; i <= n / 2 - 1; ++i) {
                const int j = 2 * i - 1;
                const Polynomial xj = x(j - 1), xj1 = x(j), xj2 = x(j + 1), xj3 = x(j + 2);
                f += square(xj + 10.0 * xj1);
                f += 5.0 * square(xj2 - xj3);
                f += square(square(xj1 - 2.0 * xj2));
                f += 10.0 * square(square(xj - xj3));
            }
            nvec.assign((n - 2) / 2, 4);
            overlap = 2;
            break;
        }
        case BenchFamily::GenRosenbrock: {
            if (n < 2) throw std::invalid_argument("gen-rosenbrock: need n >= 2");
            for (int i = 2; i <= n; ++i) {
                f += 100.0 * square(x(i - 1) - square(x(i - 2)));
                f += square(Polynomial::constant(n, 1.0) - x(i - 2));
            }
            nvec.assign(n - 1, 2);
            overlap = 1;
            break;
        }
        case BenchFamily::DiscreteBoundary: {
            if (n < 3) throw std::invalid_argument("discrete-boundary: need n >= 3");
            const double h = 1.0 / (n + 1);
            for (int i = 1; i <= n; ++i) {
                // fixed boundary values x_0 = x_{n+1} = 0 are substituted away
                Polynomial inner = 2.0 * x(i - 1);
                if (i - 2 >= 0) inner -= x(i - 2);
                if (i <= n - 1) inner -= x(i);
                Polynomial cube = x(i - 1) + Polynomial::constant(n, i * h + 1.0);
                inner += (0.5 * h * h) * mul(cube, square(cube));
                f += square(inner);
            }
            nvec.assign(n - 2, 3);
            overlap = 2;
            break;
        }
        case BenchFamily::BroydenBanded: {
            if (n < 7) throw std::invalid_argument("broyden-banded: need n >= 7");
            for (int i = 1; i <= n; ++i) {
                Polynomial inner =
                    mul(x(i - 1), Polynomial::constant(n, 2.0) + 10.0 * square(x(i - 1)));
                inner += Polynomial::constant(n, 1.0);
                for (int j = std::max(1, i - 5); j <= std::min(n, i + 1); ++j) {
                    if (j == i) continue;
                    inner -= mul(Polynomial::constant(n, 1.0) + x(j - 1), x(j - 1));
                }
                f += square(inner);
            }
            nvec.assign(n - 6, 7);
            overlap = 6;
            break;
        }
        default:
            throw std::invalid_argument("gen_test_function: not a named test function family");
    }

    SparsityPattern pattern = banded_pattern(nvec, overlap);
    if (pattern.n != n) throw std::logic_error("gen_test_function: pattern does not cover n variables");
    PopProblem prob;
    prob.n = n;
    prob.objective = std::move(f);
    prob.constraints = box_constraints(n, pattern, 1);
    assign_constraints(pattern, prob, ConstraintAssignment::AllSupportingBlocks);
    prob.pattern = std::move(pattern);
    return prob;
}

}  // namespace sbsos
