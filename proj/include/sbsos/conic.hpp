#pragma once

#include <string>
#include <vector>

#include "sbsos/certificate.hpp"
#include "sbsos/poly.hpp"
#include "sbsos/sparsity.hpp"

namespace sbsos {

/// Entry of a symmetric coefficient matrix on a psd variable block. Stored
/// once with i <= j; the matrix has `value` at (i,j) and (j,i), so the row
/// contribution is value*X_ii on the diagonal and 2*value*X_ij off it. The
/// SDPA exporter writes these entries verbatim.
struct PsdCoeff {
    int block = 0;
    int i = 0;
    int j = 0;
    double value = 0.0;
};

struct RowLabel {
    enum class Kind { Linking, Certificate };
    Kind kind = Kind::Linking;
    int block = -1;  // owning block for certificate rows
    Exponent gamma;  // monomial the row compares coefficients of
};

/// One linear equality over all variable groups: sum of terms = rhs.
struct LinearRow {
    std::vector<std::pair<int, double>> free_terms;
    std::vector<std::pair<int, double>> nonneg_terms;
    std::vector<PsdCoeff> psd_terms;
    double rhs = 0.0;
    RowLabel label;

    bool empty() const { return free_terms.empty() && nonneg_terms.empty() && psd_terms.empty(); }
};

/// Standard-form conic program: maximize a linear functional subject to linear
/// equalities over free variables, nonnegative variables and psd matrix
/// blocks.
struct ConicProgram {
    int num_free = 0;
    int num_nonneg = 0;
    std::vector<int> psd_sides;

    // objective, maximize sense
    std::vector<std::pair<int, double>> obj_free;
    std::vector<std::pair<int, double>> obj_nonneg;
    std::vector<PsdCoeff> obj_psd;

    std::vector<LinearRow> rows;

    int num_rows() const { return static_cast<int>(rows.size()); }
};

/// Canonical text form of a program; used for bit-stable comparisons and
/// debugging dumps.
std::string serialize(const ConicProgram& program);

enum class Hierarchy { SparseBsos, DenseBsos, SparsePut };

std::string hierarchy_name(Hierarchy h);

/// Maps solver variables back to their roles in the relaxation, including the
/// coefficients fixed by the free-variable reduction, so that dual moment
/// sequences and primal certificates can be reconstructed.
struct VariableLedger {
    struct FreeRole {
        enum class Kind { T, FCoef };
        Kind kind = Kind::T;
        int block = -1;
        Exponent gamma;
    };
    struct NonnegRole {
        int block = -1;
        PairIndex pair;
    };
    struct PsdRole {
        int block = -1;
        int constraint = -1;  // -1: the SOS block (BSOS Q or PUT Q_0); else PUT multiplier of g_j
    };
    struct Elimination {
        int block = -1;
        Exponent gamma;
        double value = 0.0;
    };

    Hierarchy hierarchy = Hierarchy::SparseBsos;
    int d = 0;
    int k = 0;
    int dmax = 0;
    SparsityPattern pattern;

    std::vector<FreeRole> free_roles;
    std::vector<NonnegRole> nonneg_roles;
    std::vector<PsdRole> psd_roles;
    std::vector<Elimination> eliminated;
    std::vector<RowLabel> removed_rows;
};

}  // namespace sbsos
