#include "sbsos/sdpsolve.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace sbsos {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PsdRowEntry {
    int i, j;
    double v;
};

struct PsdBlockData {
    int side = 0;
    std::vector<int> row_ids;
    std::vector<std::vector<PsdRowEntry>> row_entries;
};

// Program compiled to internal minimize form with row equilibration.
struct Compiled {
    int m = 0, nf = 0, nn = 0;
    VectorXd b;
    VectorXd cf, cn;
    std::vector<MatrixXd> Cp;
    std::vector<std::vector<std::pair<int, double>>> free_cols;
    std::vector<std::vector<std::pair<int, double>>> nn_cols;
    std::vector<PsdBlockData> blocks;
    std::vector<double> row_scale;

    // Schur groups: rows coupled through shared conic variables
    std::vector<std::vector<int>> group_rows;
    std::vector<std::vector<int>> group_blocks;
    std::vector<std::vector<int>> group_nnvars;
    std::vector<int> row_group;   // -1 when the row touches no conic variable
    std::vector<int> row_local;   // position within its group

    double norm_b = 0, norm_c = 0;
    int nu = 0;  // barrier degree: nn + sum of psd sides
};

double sym_inner(const std::vector<PsdRowEntry>& entries, const MatrixXd& X) {
    double acc = 0;
    for (const PsdRowEntry& e : entries)
        acc += e.v * (e.i == e.j ? X(e.i, e.i) : 2.0 * X(e.i, e.j));
    return acc;
}

void sym_accumulate(MatrixXd& M, const std::vector<PsdRowEntry>& entries, double w) {
    for (const PsdRowEntry& e : entries) {
        M(e.i, e.j) += w * e.v;
        if (e.i != e.j) M(e.j, e.i) += w * e.v;
    }
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void join(int a, int b) { parent[find(a)] = find(b); }
};

Compiled compile(const ConicProgram& prog) {
    Compiled c;
    c.m = prog.num_rows();
    c.nf = prog.num_free;
    c.nn = prog.num_nonneg;
    if (c.m == 0) throw std::invalid_argument("solve: program has no equality rows");

    c.b.resize(c.m);
    c.row_scale.assign(c.m, 1.0);
    c.free_cols.resize(c.nf);
    c.nn_cols.resize(c.nn);
    c.blocks.resize(prog.psd_sides.size());
    for (std::size_t bidx = 0; bidx < prog.psd_sides.size(); ++bidx)
        c.blocks[bidx].side = prog.psd_sides[bidx];

    for (int r = 0; r < c.m; ++r) {
        const LinearRow& row = prog.rows[r];
        double scale = std::abs(row.rhs);
        for (const auto& [v, a] : row.free_terms) scale = std::max(scale, std::abs(a));
        for (const auto& [v, a] : row.nonneg_terms) scale = std::max(scale, std::abs(a));
        for (const PsdCoeff& t : row.psd_terms) scale = std::max(scale, std::abs(t.value));
        if (scale == 0.0) scale = 1.0;
        c.row_scale[r] = scale;
        const double inv = 1.0 / scale;
        c.b[r] = row.rhs * inv;
        for (const auto& [v, a] : row.free_terms) c.free_cols[v].emplace_back(r, a * inv);
        for (const auto& [v, a] : row.nonneg_terms) c.nn_cols[v].emplace_back(r, a * inv);
        for (const PsdCoeff& t : row.psd_terms) {
            PsdBlockData& blk = c.blocks[t.block];
            if (blk.row_ids.empty() || blk.row_ids.back() != r) {
                blk.row_ids.push_back(r);
                blk.row_entries.emplace_back();
            }
            blk.row_entries.back().push_back({t.i, t.j, t.value * inv});
        }
    }

    // internal minimize form: negate the maximize objective
    c.cf = VectorXd::Zero(c.nf);
    for (const auto& [v, a] : prog.obj_free) c.cf[v] -= a;
    c.cn = VectorXd::Zero(c.nn);
    for (const auto& [v, a] : prog.obj_nonneg) c.cn[v] -= a;
    for (std::size_t bidx = 0; bidx < c.blocks.size(); ++bidx)
        c.Cp.push_back(MatrixXd::Zero(c.blocks[bidx].side, c.blocks[bidx].side));
    for (const PsdCoeff& t : prog.obj_psd) {
        c.Cp[t.block](t.i, t.j) -= t.value;
        if (t.i != t.j) c.Cp[t.block](t.j, t.i) -= t.value;
    }

    // Schur groups via shared conic variables
    UnionFind uf(c.m);
    for (const PsdBlockData& blk : c.blocks)
        for (std::size_t q = 1; q < blk.row_ids.size(); ++q) uf.join(blk.row_ids[q - 1], blk.row_ids[q]);
    for (const auto& col : c.nn_cols)
        for (std::size_t q = 1; q < col.size(); ++q) uf.join(col[q - 1].first, col[q].first);

    std::vector<bool> conic_row(c.m, false);
    for (const PsdBlockData& blk : c.blocks)
        for (int r : blk.row_ids) conic_row[r] = true;
    for (const auto& col : c.nn_cols)
        for (const auto& [r, a] : col) conic_row[r] = true;

    c.row_group.assign(c.m, -1);
    c.row_local.assign(c.m, -1);
    std::vector<int> rep_ids;
    for (int r = 0; r < c.m; ++r) {
        if (!conic_row[r]) continue;
        const int rep = uf.find(r);
        int g = -1;
        for (std::size_t q = 0; q < rep_ids.size(); ++q)
            if (rep_ids[q] == rep) {
                g = static_cast<int>(q);
                break;
            }
        if (g == -1) {
            g = static_cast<int>(rep_ids.size());
            rep_ids.push_back(rep);
            c.group_rows.emplace_back();
        }
        c.row_group[r] = g;
        c.row_local[r] = static_cast<int>(c.group_rows[g].size());
        c.group_rows[g].push_back(r);
    }
    c.group_blocks.resize(c.group_rows.size());
    c.group_nnvars.resize(c.group_rows.size());
    for (std::size_t bidx = 0; bidx < c.blocks.size(); ++bidx)
        if (!c.blocks[bidx].row_ids.empty())
            c.group_blocks[c.row_group[c.blocks[bidx].row_ids.front()]].push_back(static_cast<int>(bidx));
    for (int v = 0; v < c.nn; ++v)
        if (!c.nn_cols[v].empty()) c.group_nnvars[c.row_group[c.nn_cols[v].front().first]].push_back(v);

    c.norm_b = c.b.norm();
    double nc2 = c.cf.squaredNorm() + c.cn.squaredNorm();
    for (const MatrixXd& C : c.Cp) nc2 += C.squaredNorm();
    c.norm_c = std::sqrt(nc2);
    c.nu = c.nn;
    for (const PsdBlockData& blk : c.blocks) c.nu += blk.side;
    return c;
}

struct Point {
    VectorXd xf, xn, y;
    VectorXd sn;
    std::vector<MatrixXd> X, S;
};

struct Scaling {
    // nonneg
    VectorXd w, lam;  // w_i = sqrt(x_i/s_i), lam_i = sqrt(x_i*s_i)
    // psd per block
    std::vector<MatrixXd> W, R, Rinv, Lx, Ls;
    std::vector<VectorXd> lam_blk;
};

struct Direction {
    VectorXd dxf, dxn, dy, dsn;
    std::vector<MatrixXd> dX, dS;
};

// A applied to a conic-only point (free part supplied separately)
void apply_A_conic(const Compiled& c, const VectorXd& xn, const std::vector<MatrixXd>& X, VectorXd& out) {
    for (int v = 0; v < c.nn; ++v)
        for (const auto& [r, a] : c.nn_cols[v]) out[r] += a * xn[v];
    for (std::size_t bidx = 0; bidx < c.blocks.size(); ++bidx) {
        const PsdBlockData& blk = c.blocks[bidx];
        for (std::size_t q = 0; q < blk.row_ids.size(); ++q)
            out[blk.row_ids[q]] += sym_inner(blk.row_entries[q], X[bidx]);
    }
}

void apply_A_free(const Compiled& c, const VectorXd& xf, VectorXd& out) {
    for (int v = 0; v < c.nf; ++v)
        for (const auto& [r, a] : c.free_cols[v]) out[r] += a * xf[v];
}

// conic part of A^T y
void apply_At(const Compiled& c, const VectorXd& y, VectorXd& out_n, std::vector<MatrixXd>& out_X) {
    out_n.setZero();
    for (int v = 0; v < c.nn; ++v) {
        double acc = 0;
        for (const auto& [r, a] : c.nn_cols[v]) acc += a * y[r];
        out_n[v] = acc;
    }
    for (std::size_t bidx = 0; bidx < c.blocks.size(); ++bidx) {
        const PsdBlockData& blk = c.blocks[bidx];
        out_X[bidx].setZero();
        for (std::size_t q = 0; q < blk.row_ids.size(); ++q)
            sym_accumulate(out_X[bidx], blk.row_entries[q], y[blk.row_ids[q]]);
    }
}

VectorXd apply_At_free(const Compiled& c, const VectorXd& y) {
    VectorXd out(c.nf);
    for (int v = 0; v < c.nf; ++v) {
        double acc = 0;
        for (const auto& [r, a] : c.free_cols[v]) acc += a * y[r];
        out[v] = acc;
    }
    return out;
}

bool chol_with_jitter(const MatrixXd& M, MatrixXd& L) {
    MatrixXd A = M;
    const double base = std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
    for (int attempt = 0; attempt < 4; ++attempt) {
        Eigen::LLT<MatrixXd> llt(A);
        if (llt.info() == Eigen::Success) {
            L = llt.matrixL();
            return true;
        }
        A += (base * std::pow(10.0, attempt - 12.0)) * MatrixXd::Identity(M.rows(), M.cols());
    }
    return false;
}

// Nesterov-Todd scaling point per cone block
bool compute_scaling(const Compiled& c, const Point& pt, Scaling& sc) {
    sc.w.resize(c.nn);
    sc.lam.resize(c.nn);
    for (int v = 0; v < c.nn; ++v) {
        if (pt.xn[v] <= 0 || pt.sn[v] <= 0) return false;
        sc.w[v] = std::sqrt(pt.xn[v] / pt.sn[v]);
        sc.lam[v] = std::sqrt(pt.xn[v] * pt.sn[v]);
    }
    const std::size_t nb = c.blocks.size();
    sc.W.resize(nb);
    sc.R.resize(nb);
    sc.Rinv.resize(nb);
    sc.Lx.resize(nb);
    sc.Ls.resize(nb);
    sc.lam_blk.resize(nb);
    for (std::size_t bidx = 0; bidx < nb; ++bidx) {
        if (!chol_with_jitter(pt.X[bidx], sc.Lx[bidx])) return false;
        if (!chol_with_jitter(pt.S[bidx], sc.Ls[bidx])) return false;
        // R with R^{-1} X R^{-T} = R^T S R = diag(lam)
        const MatrixXd M = sc.Ls[bidx].transpose() * sc.Lx[bidx];
        Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const VectorXd sig = svd.singularValues();
        if (sig.minCoeff() <= 0) return false;
        const VectorXd sqrt_sig = sig.cwiseSqrt();
        const VectorXd isqrt_sig = sqrt_sig.cwiseInverse();
        sc.R[bidx] = sc.Lx[bidx] * svd.matrixV() * isqrt_sig.asDiagonal();
        const MatrixXd Lx_inv = sc.Lx[bidx].triangularView<Eigen::Lower>().solve(
            MatrixXd::Identity(c.blocks[bidx].side, c.blocks[bidx].side));
        sc.Rinv[bidx] = sqrt_sig.asDiagonal() * svd.matrixV().transpose() * Lx_inv;
        sc.W[bidx] = sc.R[bidx] * sc.R[bidx].transpose();
        sc.lam_blk[bidx] = sig;
    }
    return true;
}

// W * A_r * W for one sparse row coefficient matrix
MatrixXd scale_row_matrix(const std::vector<PsdRowEntry>& entries, const MatrixXd& W) {
    const int s = static_cast<int>(W.rows());
    if (static_cast<int>(entries.size()) < s) {
        MatrixXd B = MatrixXd::Zero(s, s);
        for (const PsdRowEntry& e : entries) {
            B.noalias() += e.v * (W.col(e.i) * W.col(e.j).transpose());
            if (e.i != e.j) B.noalias() += e.v * (W.col(e.j) * W.col(e.i).transpose());
        }
        return B;
    }
    MatrixXd A = MatrixXd::Zero(s, s);
    for (const PsdRowEntry& e : entries) {
        A(e.i, e.j) += e.v;
        if (e.i != e.j) A(e.j, e.i) += e.v;
    }
    MatrixXd tmp = W * A;
    return tmp * W;
}

double max_step_nonneg(const VectorXd& x, const VectorXd& dx) {
    double alpha = kInf;
    for (int i = 0; i < x.size(); ++i)
        if (dx[i] < 0) alpha = std::min(alpha, -x[i] / dx[i]);
    return alpha;
}

double max_step_psd(const MatrixXd& L, const MatrixXd& dX) {
    // largest alpha with X + alpha*dX >= 0, via lambda_min(L^-1 dX L^-T)
    const MatrixXd T = L.triangularView<Eigen::Lower>().solve(dX);
    const MatrixXd M = L.triangularView<Eigen::Lower>().solve(T.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin >= 0) return kInf;
    return -1.0 / lmin;
}

class KktSystem {
  public:
    KktSystem(const Compiled& c) : c_(c), dim_(c.m + c.nf) {
        // structural pattern: dense group blocks, A_f coupling, regularized diagonal
        std::vector<Eigen::Triplet<double>> trips;
        for (const auto& rows : c.group_rows)
            for (int a : rows)
                for (int b : rows) trips.emplace_back(a, b, 0.0);
        for (int r = 0; r < c_.m; ++r) trips.emplace_back(r, r, 0.0);
        for (int v = 0; v < c_.nf; ++v) {
            for (const auto& [r, a] : c_.free_cols[v]) {
                trips.emplace_back(r, c_.m + v, a);
                trips.emplace_back(c_.m + v, r, a);
            }
            trips.emplace_back(c_.m + v, c_.m + v, 0.0);
        }
        pattern_ = trips;
        M_.resize(dim_, dim_);
        M_.setFromTriplets(trips.begin(), trips.end());
        analyzed_ = false;
    }

    // assemble S from the current scaling and factor the regularized system
    bool factorize(const Scaling& sc) {
        group_S_.assign(c_.group_rows.size(), MatrixXd());
        for (std::size_t g = 0; g < c_.group_rows.size(); ++g) {
            const auto& rows = c_.group_rows[g];
            MatrixXd& S = group_S_[g];
            S = MatrixXd::Zero(rows.size(), rows.size());
            for (int bidx : c_.group_blocks[g]) {
                // Gram form: rows of Theta are svec(R^T A_r R), so the block
                // contribution Theta Theta^T stays positive semidefinite in
                // floating point even when the scaling is extreme
                const PsdBlockData& blk = c_.blocks[bidx];
                const MatrixXd& R = sc.R[bidx];
                const int side = blk.side;
                const int svec_dim = side * (side + 1) / 2;
                MatrixXd theta(svec_dim, blk.row_ids.size());
                MatrixXd T(side, side);
                const double sqrt2 = std::sqrt(2.0);
                for (std::size_t q = 0; q < blk.row_ids.size(); ++q) {
                    const auto& entries = blk.row_entries[q];
                    if (static_cast<int>(entries.size()) < side) {
                        T.setZero();
                        for (const PsdRowEntry& e : entries) {
                            T.noalias() += e.v * (R.row(e.i).transpose() * R.row(e.j));
                            if (e.i != e.j) T.noalias() += e.v * (R.row(e.j).transpose() * R.row(e.i));
                        }
                        T = 0.5 * (T + T.transpose());
                    } else {
                        MatrixXd A = MatrixXd::Zero(side, side);
                        for (const PsdRowEntry& e : entries) {
                            A(e.i, e.j) += e.v;
                            if (e.i != e.j) A(e.j, e.i) += e.v;
                        }
                        T.noalias() = R.transpose() * A * R;
                        T = 0.5 * (T + T.transpose());
                    }
                    int pos = 0;
                    for (int col = 0; col < side; ++col) {
                        theta(pos++, q) = T(col, col);
                        for (int rowi = col + 1; rowi < side; ++rowi) theta(pos++, q) = sqrt2 * T(rowi, col);
                    }
                }
                MatrixXd contrib(blk.row_ids.size(), blk.row_ids.size());
                contrib.setZero();
                contrib.selfadjointView<Eigen::Lower>().rankUpdate(theta.transpose());
                for (std::size_t q = 0; q < blk.row_ids.size(); ++q)
                    for (std::size_t t = 0; t <= q; ++t) {
                        const int lq = c_.row_local[blk.row_ids[q]];
                        const int lt = c_.row_local[blk.row_ids[t]];
                        S(lq, lt) += contrib(q, t);
                        if (lq != lt) S(lt, lq) += contrib(q, t);
                    }
            }
            for (int v : c_.group_nnvars[g]) {
                const double w2 = sc.w[v] * sc.w[v];
                const auto& col = c_.nn_cols[v];
                for (std::size_t a = 0; a < col.size(); ++a)
                    for (std::size_t b = a; b < col.size(); ++b) {
                        const int la = c_.row_local[col[a].first];
                        const int lb = c_.row_local[col[b].first];
                        const double val = w2 * col[a].second * col[b].second;
                        S(la, lb) += val;
                        if (la != lb) S(lb, la) += val;
                    }
            }
        }

        // per-row regularization keeps pivots well scaled even when the Schur
        // diagonal spreads over many orders of magnitude near convergence
        VectorXd sdiag = VectorXd::Zero(c_.m);
        for (std::size_t g = 0; g < c_.group_rows.size(); ++g) {
            const auto& rows = c_.group_rows[g];
            for (std::size_t a = 0; a < rows.size(); ++a) sdiag[rows[a]] = group_S_[g](a, a);
        }

        // refresh numeric values
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(pattern_.size());
        for (std::size_t g = 0; g < c_.group_rows.size(); ++g) {
            const auto& rows = c_.group_rows[g];
            for (std::size_t a = 0; a < rows.size(); ++a)
                for (std::size_t b = 0; b < rows.size(); ++b)
                    trips.emplace_back(rows[a], rows[b], group_S_[g](a, b));
        }
        for (int r = 0; r < c_.m; ++r) trips.emplace_back(r, r, 1e-12 + 1e-11 * sdiag[r]);
        for (int v = 0; v < c_.nf; ++v) {
            for (const auto& [r, a] : c_.free_cols[v]) {
                trips.emplace_back(r, c_.m + v, a);
                trips.emplace_back(c_.m + v, r, a);
            }
            trips.emplace_back(c_.m + v, c_.m + v, -1e-12);
        }
        M_.setFromTriplets(trips.begin(), trips.end());
        if (!analyzed_) {
            ldlt_.analyzePattern(M_);
            analyzed_ = true;
        }
        ldlt_.factorize(M_);
        return ldlt_.info() == Eigen::Success;
    }

    // unregularized operator [S, A_f; A_f^T, 0]
    VectorXd apply_exact(const VectorXd& v) const {
        VectorXd out = VectorXd::Zero(dim_);
        for (std::size_t g = 0; g < c_.group_rows.size(); ++g) {
            const auto& rows = c_.group_rows[g];
            if (rows.empty()) continue;
            VectorXd loc(rows.size());
            for (std::size_t a = 0; a < rows.size(); ++a) loc[a] = v[rows[a]];
            VectorXd res = group_S_[g] * loc;
            for (std::size_t a = 0; a < rows.size(); ++a) out[rows[a]] += res[a];
        }
        for (int vv = 0; vv < c_.nf; ++vv) {
            for (const auto& [r, a] : c_.free_cols[vv]) {
                out[r] += a * v[c_.m + vv];
                out[c_.m + vv] += a * v[r];
            }
        }
        return out;
    }

    VectorXd solve(const VectorXd& rhs) const {
        VectorXd sol = ldlt_.solve(rhs);
        double prev = std::numeric_limits<double>::infinity();
        VectorXd best = sol;
        for (int refine = 0; refine < 6; ++refine) {
            const VectorXd resid = rhs - apply_exact(sol);
            const double rnorm = resid.norm();
            if (rnorm < prev) {
                best = sol;
                if (rnorm <= 1e-14 * (1.0 + rhs.norm())) break;
            } else {
                break;  // refinement stopped contracting
            }
            prev = rnorm;
            sol += ldlt_.solve(resid);
        }
        return best;
    }

  private:
    const Compiled& c_;
    int dim_;
    std::vector<Eigen::Triplet<double>> pattern_;
    Eigen::SparseMatrix<double> M_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
    std::vector<MatrixXd> group_S_;
    bool analyzed_ = false;
};

struct Residuals {
    VectorXd rp;   // b - A x
    VectorXd rdf;  // c_f - A_f^T y
    VectorXd rdn;  // c_n - A_n^T y - s_n
    std::vector<MatrixXd> rdX;
    double prim_inf = 0, dual_inf = 0;
};

Residuals compute_residuals(const Compiled& c, const Point& pt) {
    Residuals res;
    res.rp = c.b;
    VectorXd ax = VectorXd::Zero(c.m);
    apply_A_conic(c, pt.xn, pt.X, ax);
    apply_A_free(c, pt.xf, ax);
    res.rp -= ax;

    res.rdf = c.cf - apply_At_free(c, pt.y);
    VectorXd atn(c.nn);
    std::vector<MatrixXd> atX(c.blocks.size());
    for (std::size_t bidx = 0; bidx < c.blocks.size(); ++bidx)
        atX[bidx].resize(c.blocks[bidx].side, c.blocks[bidx].side);
    apply_At(c, pt.y, atn, atX);
    res.rdn = c.cn - atn - pt.sn;
    res.rdX.resize(c.blocks.size());
    double dual2 = res.rdf.squaredNorm() + res.rdn.squaredNorm();
    for (std::size_t bidx = 0; bidx < c.blocks.size(); ++bidx) {
        res.rdX[bidx] = c.Cp[bidx] - atX[bidx] - pt.S[bidx];
        dual2 += res.rdX[bidx].squaredNorm();
    }
    res.prim_inf = res.rp.norm() / (1.0 + c.norm_b);
    res.dual_inf = std::sqrt(dual2) / (1.0 + c.norm_c);
    return res;
}

// one backsolve of the reduced system for targets (rp, rdf, rdn, rdX, Xi, xi)
Direction newton_raw(const Compiled& c, const KktSystem& kkt, const Scaling& sc, const VectorXd& rp,
                     const VectorXd& rdf, const VectorXd& rdn, const std::vector<MatrixXd>& rdX,
                     const std::vector<MatrixXd>& Xi, const VectorXd& xi) {
    VectorXd rhs = VectorXd::Zero(c.m + c.nf);
    // h1 = r_p + A(W r_d W - Xi) over conic parts
    VectorXd h1 = rp;
    VectorXd tn(c.nn);
    for (int v = 0; v < c.nn; ++v) tn[v] = sc.w[v] * sc.w[v] * rdn[v] - xi[v];
    std::vector<MatrixXd> tX(c.blocks.size());
    for (std::size_t bidx = 0; bidx < c.blocks.size(); ++bidx)
        tX[bidx] = sc.W[bidx] * rdX[bidx] * sc.W[bidx] - Xi[bidx];
    apply_A_conic(c, tn, tX, h1);
    rhs.head(c.m) = h1;
    rhs.tail(c.nf) = rdf;

    const VectorXd sol = kkt.solve(rhs);
    Direction dir;
    dir.dy = sol.head(c.m);
    dir.dxf = sol.tail(c.nf);

    VectorXd atn(c.nn);
    std::vector<MatrixXd> atX(c.blocks.size());
    for (std::size_t bidx = 0; bidx < c.blocks.size(); ++bidx)
        atX[bidx].resize(c.blocks[bidx].side, c.blocks[bidx].side);
    apply_At(c, dir.dy, atn, atX);

    dir.dsn = rdn - atn;
    dir.dxn.resize(c.nn);
    for (int v = 0; v < c.nn; ++v) dir.dxn[v] = xi[v] - sc.w[v] * sc.w[v] * dir.dsn[v];
    dir.dS.resize(c.blocks.size());
    dir.dX.resize(c.blocks.size());
    for (std::size_t bidx = 0; bidx < c.blocks.size(); ++bidx) {
        dir.dS[bidx] = rdX[bidx] - atX[bidx];
        dir.dX[bidx] = Xi[bidx] - sc.W[bidx] * dir.dS[bidx] * sc.W[bidx];
        dir.dX[bidx] = 0.5 * (dir.dX[bidx] + dir.dX[bidx].transpose());
        dir.dS[bidx] = 0.5 * (dir.dS[bidx] + dir.dS[bidx].transpose());
    }
    return dir;
}

// solves the Newton system for the given target Xi (psd) / xi (nonneg), with
// iterative refinement of the full KKT equations; the scaling operator W is
// applied in factored form during formation, so residual passes recover the
// digits lost when the scaled system is extremely ill conditioned
Direction newton_step(const Compiled& c, const KktSystem& kkt, const Scaling& sc, const Residuals& res,
                      const std::vector<MatrixXd>& Xi, const VectorXd& xi) {
    Direction dir = newton_raw(c, kkt, sc, res.rp, res.rdf, res.rdn, res.rdX, Xi, xi);
    for (int pass = 0; pass < 2; ++pass) {
        // residuals of the three Newton equations
        VectorXd ep = res.rp;
        VectorXd ax = VectorXd::Zero(c.m);
        apply_A_conic(c, dir.dxn, dir.dX, ax);
        apply_A_free(c, dir.dxf, ax);
        ep -= ax;

        VectorXd atn(c.nn);
        std::vector<MatrixXd> atX(c.blocks.size());
        for (std::size_t bidx = 0; bidx < c.blocks.size(); ++bidx)
            atX[bidx].resize(c.blocks[bidx].side, c.blocks[bidx].side);
        apply_At(c, dir.dy, atn, atX);
        const VectorXd edf = res.rdf - apply_At_free(c, dir.dy);
        const VectorXd edn = res.rdn - atn - dir.dsn;
        std::vector<MatrixXd> edX(c.blocks.size());
        for (std::size_t bidx = 0; bidx < c.blocks.size(); ++bidx)
            edX[bidx] = res.rdX[bidx] - atX[bidx] - dir.dS[bidx];

        VectorXd exn(c.nn);
        for (int v = 0; v < c.nn; ++v)
            exn[v] = xi[v] - dir.dxn[v] - sc.w[v] * sc.w[v] * dir.dsn[v];
        std::vector<MatrixXd> eX(c.blocks.size());
        double enorm = ep.lpNorm<Eigen::Infinity>();
        if (c.nf > 0) enorm = std::max(enorm, edf.lpNorm<Eigen::Infinity>());
        if (c.nn > 0) {
            enorm = std::max(enorm, edn.lpNorm<Eigen::Infinity>());
            enorm = std::max(enorm, exn.lpNorm<Eigen::Infinity>());
        }
        for (std::size_t bidx = 0; bidx < c.blocks.size(); ++bidx) {
            eX[bidx] = Xi[bidx] - dir.dX[bidx] - sc.W[bidx] * dir.dS[bidx] * sc.W[bidx];
            eX[bidx] = 0.5 * (eX[bidx] + eX[bidx].transpose());
            enorm = std::max(enorm, edX[bidx].cwiseAbs().maxCoeff());
            enorm = std::max(enorm, eX[bidx].cwiseAbs().maxCoeff());
        }
        if (const char* dbg = std::getenv("SBSOS_DEBUG_REFINE"); dbg && *dbg == '1')
            std::printf("        refine pass %d: enorm %.3e (ep %.2e)\n", pass, enorm,
                        ep.lpNorm<Eigen::Infinity>());
        if (enorm < 1e-11) break;

        const Direction corr = newton_raw(c, kkt, sc, ep, edf, edn, edX, eX, exn);
        dir.dy += corr.dy;
        dir.dxf += corr.dxf;
        dir.dxn += corr.dxn;
        dir.dsn += corr.dsn;
        for (std::size_t bidx = 0; bidx < c.blocks.size(); ++bidx) {
            dir.dX[bidx] += corr.dX[bidx];
            dir.dS[bidx] += corr.dS[bidx];
        }
    }
    return dir;
}

double conic_gap(const Compiled& c, const Point& pt) {
    double gap = pt.xn.dot(pt.sn);
    for (std::size_t bidx = 0; bidx < c.blocks.size(); ++bidx)
        gap += pt.X[bidx].cwiseProduct(pt.S[bidx]).sum();
    return gap;
}

}  // namespace

std::string solve_status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::NearOptimal: return "near-optimal";
        case SolveStatus::NumericalTrouble: return "numerical-trouble";
        case SolveStatus::InfeasibleOrder: return "infeasible-order";
    }
    return "unknown";
}

namespace {

// Linear dependence among equality rows can only involve rows without psd
// entries: the (v v^T)_gamma coefficient patterns occupy disjoint matrix
// entries across rows, so any vanishing combination puts zero weight on rows
// that touch a psd block. The remaining rows form, per monomial gamma, a
// bundle {linking row, certificate rows} coupled through the coefficient
// variables f^l_gamma. Eliminating those variables condenses each bundle to
// one row over the nonnegative multipliers; dependent condensed rows identify
// one removable original row each. Removed rows get multiplier zero, a valid
// dual completion. The structural assumptions are verified and the mask
// degenerates to all-keep when they do not hold.
std::vector<char> independent_row_mask(const ConicProgram& program) {
    std::vector<char> keep(program.num_rows(), 1);

    std::vector<int> free_occurrences(program.num_free, 0);
    for (const LinearRow& row : program.rows)
        for (const auto& [v, a] : row.free_terms) free_occurrences[v]++;

    struct Bundle {
        std::vector<int> cert_rows;
        int linking_row = -1;
    };
    std::map<Exponent, Bundle, GrlexLess> bundles;
    for (int r = 0; r < program.num_rows(); ++r) {
        const LinearRow& row = program.rows[r];
        if (row.psd_terms.empty() && row.label.kind == RowLabel::Kind::Certificate)
            bundles[row.label.gamma].cert_rows.push_back(r);
    }
    if (bundles.empty()) return keep;
    for (int r = 0; r < program.num_rows(); ++r) {
        const LinearRow& row = program.rows[r];
        if (row.psd_terms.empty() && row.label.kind == RowLabel::Kind::Linking) {
            auto it = bundles.find(row.label.gamma);
            if (it != bundles.end()) {
                if (it->second.linking_row >= 0 || !row.nonneg_terms.empty()) return keep;
                it->second.linking_row = r;
            }
        }
    }

    std::vector<const Bundle*> cand;
    std::vector<int> droppable;
    for (auto& [gamma, bundle] : bundles) {
        if (bundle.cert_rows.empty()) continue;
        // verify the expected shape; bail out on anything unusual
        std::vector<int> cert_vars;
        for (int r : bundle.cert_rows) {
            const LinearRow& row = program.rows[r];
            if (row.free_terms.size() > 1) return keep;
            if (row.free_terms.size() == 1) {
                if (std::abs(row.free_terms[0].second) != 1.0) return keep;
                if (free_occurrences[row.free_terms[0].first] != 2) return keep;
                cert_vars.push_back(row.free_terms[0].first);
            }
        }
        if (cert_vars.empty()) {
            if (bundle.cert_rows.size() != 1 || bundle.linking_row >= 0) return keep;
        } else {
            if (bundle.linking_row < 0) return keep;
            const LinearRow& link = program.rows[bundle.linking_row];
            if (!link.nonneg_terms.empty()) return keep;
            std::vector<int> link_vars;
            for (const auto& [v, a] : link.free_terms) {
                if (std::abs(a) != 1.0) return keep;
                link_vars.push_back(v);
            }
            std::sort(link_vars.begin(), link_vars.end());
            std::sort(cert_vars.begin(), cert_vars.end());
            if (link_vars != cert_vars) return keep;
            if (static_cast<int>(cert_vars.size()) != static_cast<int>(bundle.cert_rows.size()))
                return keep;
        }
        cand.push_back(&bundle);
        droppable.push_back(bundle.linking_row >= 0 ? bundle.linking_row : bundle.cert_rows.front());
    }
    if (cand.size() < 2) return keep;

    std::map<int, int> var_slot;
    for (const Bundle* bundle : cand)
        for (int r : bundle->cert_rows)
            for (const auto& [v, a] : program.rows[r].nonneg_terms)
                var_slot.try_emplace(v, static_cast<int>(var_slot.size()));

    // condensed rows as columns, nonnegative variables (+ rhs) as coordinates
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(var_slot.size() + 1, cand.size());
    for (std::size_t q = 0; q < cand.size(); ++q) {
        const Bundle& bundle = *cand[q];
        double rhs = bundle.linking_row >= 0 ? -program.rows[bundle.linking_row].rhs : 0.0;
        for (int r : bundle.cert_rows) {
            const LinearRow& row = program.rows[r];
            const double sign = row.free_terms.empty() ? 1.0 : row.free_terms[0].second;
            // substitute f = sign * (rhs - lambda part) into the linking row
            for (const auto& [v, a] : row.nonneg_terms) M(var_slot[v], q) += a / sign;
            rhs += row.rhs / sign;
        }
        M(var_slot.size(), q) = rhs;
        const double norm = std::max(1e-300, M.col(q).cwiseAbs().maxCoeff());
        M.col(q) /= norm;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_coef(M.topRows(var_slot.size()));
    qr_coef.setThreshold(1e-10);
    const int rank = static_cast<int>(qr_coef.rank());
    if (rank == static_cast<int>(cand.size())) return keep;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_aug(M);
    qr_aug.setThreshold(1e-10);
    if (qr_aug.rank() != rank)
        throw std::runtime_error("solve: inconsistent dependent rows (infeasible program)");

    std::vector<char> in_basis(cand.size(), 0);
    const auto& perm = qr_coef.colsPermutation().indices();
    for (int q = 0; q < rank; ++q) in_basis[perm[q]] = 1;
    for (std::size_t q = 0; q < cand.size(); ++q)
        if (!in_basis[q]) keep[droppable[q]] = 0;
    return keep;
}

}  // namespace

std::vector<char> independent_rows(const ConicProgram& program) { return independent_row_mask(program); }

ConicSolution solve(const ConicProgram& program, const SolverOptions& options) {
    const std::vector<char> keep = independent_row_mask(program);
    bool all_kept = true;
    for (char k : keep) all_kept = all_kept && k;
    if (!all_kept) {
        ConicProgram reduced = program;
        reduced.rows.clear();
        std::vector<int> kept_ids;
        for (int r = 0; r < program.num_rows(); ++r)
            if (keep[r]) {
                reduced.rows.push_back(program.rows[r]);
                kept_ids.push_back(r);
            }
        ConicSolution sol = solve(reduced, options);
        std::vector<double> duals(program.num_rows(), 0.0);
        for (std::size_t q = 0; q < kept_ids.size(); ++q) duals[kept_ids[q]] = sol.duals[q];
        sol.duals = std::move(duals);
        sol.dropped_rows = program.num_rows() - static_cast<int>(kept_ids.size());
        return sol;
    }

    const Compiled c = compile(program);
    ConicSolution out;

    Point pt;
    pt.xf = VectorXd::Zero(c.nf);
    pt.y = VectorXd::Zero(c.m);

    // data-scaled identity start per cone block
    {
        std::vector<double> rownorm(c.m, 0.0);
        for (int v = 0; v < c.nn; ++v)
            for (const auto& [r, a] : c.nn_cols[v]) rownorm[r] += a * a;
        std::vector<double> blk_norm_sq(c.blocks.size(), 0.0);
        for (std::size_t bi = 0; bi < c.blocks.size(); ++bi)
            for (std::size_t q = 0; q < c.blocks[bi].row_ids.size(); ++q) {
                double nsq = 0;
                for (const PsdRowEntry& e : c.blocks[bi].row_entries[q])
                    nsq += e.v * e.v * (e.i == e.j ? 1.0 : 2.0);
                rownorm[c.blocks[bi].row_ids[q]] += nsq;
                blk_norm_sq[bi] = std::max(blk_norm_sq[bi], nsq);
            }
        for (int v = 0; v < c.nf; ++v)
            for (const auto& [r, a] : c.free_cols[v]) rownorm[r] += a * a;
        double ratio = 1.0;
        for (int r = 0; r < c.m; ++r)
            ratio = std::max(ratio, (1.0 + std::abs(c.b[r])) / (1.0 + std::sqrt(rownorm[r])));
        const double base = std::sqrt(static_cast<double>(std::max(1, c.nu)));
        const double tau_p = std::max({10.0, base, base * ratio});
        pt.xn = VectorXd::Constant(c.nn, tau_p);
        for (std::size_t bi = 0; bi < c.blocks.size(); ++bi)
            pt.X.push_back(tau_p * MatrixXd::Identity(c.blocks[bi].side, c.blocks[bi].side));

        double cmax = 0.0;
        for (int v = 0; v < c.nn; ++v) cmax = std::max(cmax, std::abs(c.cn[v]));
        for (const MatrixXd& C : c.Cp) cmax = std::max(cmax, C.cwiseAbs().maxCoeff());
        double amax = 0.0;
        for (double nsq : blk_norm_sq) amax = std::max(amax, std::sqrt(nsq));
        const double tau_d = std::max({10.0, base, cmax, amax});
        pt.sn = VectorXd::Constant(c.nn, tau_d);
        for (std::size_t bi = 0; bi < c.blocks.size(); ++bi)
            pt.S.push_back(tau_d * MatrixXd::Identity(c.blocks[bi].side, c.blocks[bi].side));
    }

    KktSystem kkt(c);
    Scaling sc;

    double best_score = kInf;
    Point best = pt;
    int stall_count = 0;
    int last_improvement = 0;
    double best_prim = kInf, best_dual = kInf, best_gap = kInf, best_mu = kInf;

    auto finish = [&](const Point& final_pt, SolveStatus status, const std::string& msg, int iters) {
        const Residuals res = compute_residuals(c, final_pt);
        const double pobj_int = c.cf.dot(final_pt.xf) + c.cn.dot(final_pt.xn) +
                                [&] {
                                    double acc = 0;
                                    for (std::size_t bi = 0; bi < c.blocks.size(); ++bi)
                                        acc += c.Cp[bi].cwiseProduct(final_pt.X[bi]).sum();
                                    return acc;
                                }();
        const double dobj_int = c.b.dot(final_pt.y);
        out.status = status;
        out.message = msg;
        out.iterations = iters;
        out.primal_obj = -pobj_int;
        out.dual_obj = -dobj_int;
        out.res_primal = res.prim_inf;
        out.res_dual = res.dual_inf;
        out.rel_gap = std::abs(pobj_int - dobj_int) / (1.0 + std::abs(pobj_int) + std::abs(dobj_int));
        out.free_vals.assign(final_pt.xf.data(), final_pt.xf.data() + c.nf);
        out.nonneg_vals.assign(final_pt.xn.data(), final_pt.xn.data() + c.nn);
        out.psd_vals = final_pt.X;
        out.duals.resize(c.m);
        for (int r = 0; r < c.m; ++r) out.duals[r] = -final_pt.y[r] / c.row_scale[r];
    };

    for (int iter = 0; iter < options.max_iter; ++iter) {
        const Residuals res = compute_residuals(c, pt);
        const double gap = conic_gap(c, pt);
        const double mu = gap / std::max(1, c.nu);

        double pobj_int = c.cf.dot(pt.xf) + c.cn.dot(pt.xn);
        for (std::size_t bi = 0; bi < c.blocks.size(); ++bi)
            pobj_int += c.Cp[bi].cwiseProduct(pt.X[bi]).sum();
        const double dobj_int = c.b.dot(pt.y);
        const double relgap = std::abs(pobj_int - dobj_int) / (1.0 + std::abs(pobj_int) + std::abs(dobj_int));

        IterStat stat;
        stat.pobj = -pobj_int;
        stat.dobj = -dobj_int;
        stat.gap = gap;
        stat.rdx = std::abs(res.rdf.dot(pt.xf)) + std::abs(res.rdn.dot(pt.xn)) + [&] {
            double acc = 0;
            for (std::size_t bi = 0; bi < c.blocks.size(); ++bi)
                acc += std::abs(res.rdX[bi].cwiseProduct(pt.X[bi]).sum());
            return acc;
        }();
        stat.rpy = std::abs(res.rp.dot(pt.y));
        stat.prim_inf = res.prim_inf;
        stat.dual_inf = res.dual_inf;

        const double score = std::max({res.prim_inf, res.dual_inf, relgap});
        bool improved = false;
        auto track = [&](double value, double& best_value) {
            if (value < 0.9 * best_value) improved = true;
            best_value = std::min(best_value, value);
        };
        track(res.prim_inf, best_prim);
        track(res.dual_inf, best_dual);
        track(relgap, best_gap);
        track(mu, best_mu);
        if (improved) last_improvement = iter;
        if (score < best_score) {
            best_score = score;
            best = pt;
        }
        if (iter - last_improvement >= 10) {
            out.trace.push_back(stat);
            finish(best,
                   best_score <= 200 * std::max(options.tol_feas, options.tol_gap)
                       ? SolveStatus::NearOptimal
                       : SolveStatus::NumericalTrouble,
                   "no further progress", iter);
            return out;
        }

        if (options.verbose)
            std::printf("it %3d  pobj %+.8e  dobj %+.8e  gap %.2e  rp %.2e  rd %.2e  mu %.2e\n", iter,
                        -pobj_int, -dobj_int, relgap, res.prim_inf, res.dual_inf, mu);

        if (res.prim_inf <= options.tol_feas && res.dual_inf <= options.tol_feas && relgap <= options.tol_gap) {
            out.trace.push_back(stat);
            finish(pt, SolveStatus::Optimal, "", iter);
            return out;
        }

        if (!compute_scaling(c, pt, sc) || !kkt.factorize(sc)) {
            finish(best, best_score <= 200 * std::max(options.tol_feas, options.tol_gap)
                             ? SolveStatus::NearOptimal
                             : SolveStatus::NumericalTrouble,
                   "scaling or factorization failed", iter);
            return out;
        }

        // predictor
        std::vector<MatrixXd> Xi(c.blocks.size());
        for (std::size_t bi = 0; bi < c.blocks.size(); ++bi) Xi[bi] = -pt.X[bi];
        const VectorXd xi = -pt.xn;
        const Direction aff = newton_step(c, kkt, sc, res, Xi, xi);

        double ap_aff = 1.0, ad_aff = 1.0;
        ap_aff = std::min(ap_aff, max_step_nonneg(pt.xn, aff.dxn));
        ad_aff = std::min(ad_aff, max_step_nonneg(pt.sn, aff.dsn));
        for (std::size_t bi = 0; bi < c.blocks.size(); ++bi) {
            ap_aff = std::min(ap_aff, max_step_psd(sc.Lx[bi], aff.dX[bi]));
            ad_aff = std::min(ad_aff, max_step_psd(sc.Ls[bi], aff.dS[bi]));
        }

        double gap_aff = (pt.xn + ap_aff * aff.dxn).dot(pt.sn + ad_aff * aff.dsn);
        for (std::size_t bi = 0; bi < c.blocks.size(); ++bi)
            gap_aff += (pt.X[bi] + ap_aff * aff.dX[bi]).cwiseProduct(pt.S[bi] + ad_aff * aff.dS[bi]).sum();
        gap_aff = std::max(gap_aff, 0.0);
        const double expon = std::max(1.0, 3.0 * std::pow(std::min(ap_aff, ad_aff), 2.0));
        double sigma = std::pow(gap_aff / std::max(gap, 1e-300), expon);
        sigma = std::clamp(sigma, 1e-8, 1.0);

        // corrector: Xi = R G R^T with G from sigma*mu and the Mehrotra cross
        // term; the cross term is damped when it would collapse the step
        std::vector<MatrixXd> cross_blk(c.blocks.size());
        for (std::size_t bi = 0; bi < c.blocks.size(); ++bi) {
            const MatrixXd dxh = sc.Rinv[bi] * aff.dX[bi] * sc.Rinv[bi].transpose();
            const MatrixXd dsh = sc.R[bi].transpose() * aff.dS[bi] * sc.R[bi];
            cross_blk[bi] = 0.5 * (dxh * dsh + dsh * dxh);
        }
        auto corrected_direction = [&](double eta) {
            VectorXd xi_c(c.nn);
            for (int v = 0; v < c.nn; ++v) {
                const double cross_v = eta * aff.dxn[v] * aff.dsn[v];
                xi_c[v] = sc.w[v] * (sigma * mu - sc.lam[v] * sc.lam[v] - cross_v) / sc.lam[v];
            }
            std::vector<MatrixXd> Xi_c(c.blocks.size());
            for (std::size_t bi = 0; bi < c.blocks.size(); ++bi) {
                const int side = c.blocks[bi].side;
                const VectorXd& lam = sc.lam_blk[bi];
                MatrixXd G(side, side);
                for (int i = 0; i < side; ++i)
                    for (int j = 0; j < side; ++j) {
                        double rhsv = -eta * cross_blk[bi](i, j);
                        if (i == j) rhsv += sigma * mu - lam[i] * lam[i];
                        G(i, j) = 2.0 * rhsv / (lam[i] + lam[j]);
                    }
                Xi_c[bi] = sc.R[bi] * G * sc.R[bi].transpose();
                Xi_c[bi] = 0.5 * (Xi_c[bi] + Xi_c[bi].transpose());
            }
            return newton_step(c, kkt, sc, res, Xi_c, xi_c);
        };
        auto step_lengths = [&](const Direction& d) {
            double p = std::min(kInf, max_step_nonneg(pt.xn, d.dxn));
            double q = std::min(kInf, max_step_nonneg(pt.sn, d.dsn));
            for (std::size_t bi = 0; bi < c.blocks.size(); ++bi) {
                p = std::min(p, max_step_psd(sc.Lx[bi], d.dX[bi]));
                q = std::min(q, max_step_psd(sc.Ls[bi], d.dS[bi]));
            }
            return std::pair<double, double>(p, q);
        };

        Direction dir = corrected_direction(1.0);
        auto [ap, ad] = step_lengths(dir);
        if (const char* dbg = std::getenv("SBSOS_DEBUG_STEPS"); dbg && *dbg == '1' && std::min(ap, ad) < 1e-2) {
            double apn = max_step_nonneg(pt.xn, dir.dxn), adn = max_step_nonneg(pt.sn, dir.dsn);
            std::printf("        limit nonneg: ap %.1e ad %.1e  |dxn|/|xn| %.1e |dsn|/|sn| %.1e\n", apn, adn,
                        c.nn ? dir.dxn.norm() / (1 + pt.xn.norm()) : 0.0,
                        c.nn ? dir.dsn.norm() / (1 + pt.sn.norm()) : 0.0);
            for (std::size_t bi = 0; bi < c.blocks.size(); ++bi) {
                double app = max_step_psd(sc.Lx[bi], dir.dX[bi]);
                double adp = max_step_psd(sc.Ls[bi], dir.dS[bi]);
                if (std::min(app, adp) < 1e-2)
                    std::printf("        limit blk %zu side %d: ap %.1e ad %.1e |dX|/|X| %.1e |dS|/|S| %.1e\n",
                                bi, c.blocks[bi].side, app, adp, dir.dX[bi].norm() / (1 + pt.X[bi].norm()),
                                dir.dS[bi].norm() / (1 + pt.S[bi].norm()));
            }
        }
        const double aff_floor = 0.8 * std::min(ap_aff, ad_aff);
        if (std::min(ap, ad) < aff_floor) {
            for (double eta : {0.3, 0.0}) {
                Direction damped = corrected_direction(eta);
                const auto [p2, d2] = step_lengths(damped);
                if (std::min(p2, d2) > std::min(ap, ad)) {
                    dir = std::move(damped);
                    ap = p2;
                    ad = d2;
                }
                if (std::min(ap, ad) >= aff_floor) break;
            }
        }
        const double frac = std::min(options.step_fraction, 0.9 + 0.09 * std::min(ap_aff, ad_aff));
        ap = std::min(1.0, frac * ap);
        ad = std::min(1.0, frac * ad);
        if (options.unified_step) ap = ad = std::min(ap, ad);
        stat.alpha_p = ap;
        stat.alpha_d = ad;
        out.trace.push_back(stat);
        if (options.verbose)
            std::printf("      sigma %.2e  aff(%.2e, %.2e)  step(%.2e, %.2e)\n", sigma, ap_aff, ad_aff, ap,
                        ad);

        pt.xf += ap * dir.dxf;
        pt.xn += ap * dir.dxn;
        pt.y += ad * dir.dy;
        pt.sn += ad * dir.dsn;
        for (std::size_t bi = 0; bi < c.blocks.size(); ++bi) {
            pt.X[bi] += ap * dir.dX[bi];
            pt.X[bi] = 0.5 * (pt.X[bi] + pt.X[bi].transpose());
            pt.S[bi] += ad * dir.dS[bi];
            pt.S[bi] = 0.5 * (pt.S[bi] + pt.S[bi].transpose());
        }

        if (std::max(ap, ad) < 1e-4)
            ++stall_count;
        else
            stall_count = 0;
        if (stall_count >= 3 || mu < 1e-15) {
            finish(best, best_score <= 200 * std::max(options.tol_feas, options.tol_gap)
                             ? SolveStatus::NearOptimal
                             : SolveStatus::NumericalTrouble,
                   stall_count >= 3 ? "step sizes collapsed" : "barrier parameter underflow",
                   iter + 1);
            return out;
        }
    }

    finish(best, best_score <= 200 * std::max(options.tol_feas, options.tol_gap) ? SolveStatus::NearOptimal
                                                                                 : SolveStatus::NumericalTrouble,
           "iteration limit reached", options.max_iter);
    return out;
}

}  // namespace sbsos
