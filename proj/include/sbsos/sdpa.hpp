#pragma once

#include <string>

#include "sbsos/conic.hpp"
#include "sbsos/sdpsolve.hpp"

namespace sbsos {

/// Renders the program in SDPA sparse format (.dat-s). Layout: line 1 the
/// number of equality rows, line 2 the number of blocks, line 3 the block
/// sizes (psd blocks first, then one negative diagonal block), line 4 the
/// right-hand sides, then quintuples "matno blkno i j value" with i <= j and
/// matno 0 carrying the maximize objective. The diagonal block stacks the
/// nonnegative variables followed by the split halves u, v of each free
/// variable (x_free = u - v).
std::string to_sdpa(const ConicProgram& program);

void export_sdpa(const ConicProgram& program, const std::string& path);

/// Parsed .dat-s contents; block_sizes keeps the sign convention (negative
/// for diagonal blocks).
struct SdpaData {
    int num_rows = 0;
    std::vector<int> block_sizes;
    std::vector<double> rhs;
    struct Entry {
        int matno, blkno, i, j;
        double value;
    };
    std::vector<Entry> entries;
};

SdpaData parse_sdpa(const std::string& path);

/// Reads an external solver's solution as whitespace-separated numbers: the
/// first num_rows values are the equality multipliers y; any further values
/// are ignored. Fills duals and the dual objective (= sum rhs_r * y_r, the
/// bound in maximize sense); primal values stay empty.
ConicSolution import_sdpa_solution(const std::string& path, const ConicProgram& program);

}  // namespace sbsos
