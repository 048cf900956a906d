#include "sbsos/sdpa.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sbsos {

namespace {

void append_entry(std::string& out, int matno, int blkno, int i, int j, double v) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d %d %d %d %.17g\n", matno, blkno, i, j, v);
    out += buf;
}

}  // namespace

std::string to_sdpa(const ConicProgram& program) {
    const int npsd = static_cast<int>(program.psd_sides.size());
    const int diag_size = program.num_nonneg + 2 * program.num_free;
    const int nblocks = npsd + (diag_size > 0 ? 1 : 0);
    const int diag_blk = npsd + 1;  // 1-based

    std::string out;
    out += std::to_string(program.num_rows()) + "\n";
    out += std::to_string(nblocks) + "\n";
    std::vector<int> sizes(program.psd_sides.begin(), program.psd_sides.end());
    if (diag_size > 0) sizes.push_back(-diag_size);
    for (std::size_t q = 0; q < sizes.size(); ++q) {
        out += std::to_string(sizes[q]);
        out += (q + 1 < sizes.size()) ? ' ' : '\n';
    }

    {
        char buf[48];
        for (int r = 0; r < program.num_rows(); ++r) {
            std::snprintf(buf, sizeof(buf), "%.17g", program.rows[r].rhs);
            out += buf;
            out += (r + 1 < program.num_rows()) ? ' ' : '\n';
        }
    }

    auto emit = [&](int matno, const std::vector<std::pair<int, double>>& free_terms,
                    const std::vector<std::pair<int, double>>& nonneg_terms,
                    const std::vector<PsdCoeff>& psd_terms) {
        for (const PsdCoeff& t : psd_terms) append_entry(out, matno, t.block + 1, t.i + 1, t.j + 1, t.value);
        for (const auto& [v, a] : nonneg_terms) append_entry(out, matno, diag_blk, v + 1, v + 1, a);
        for (const auto& [v, a] : free_terms) {
            const int upos = program.num_nonneg + v + 1;
            const int vpos = program.num_nonneg + program.num_free + v + 1;
            append_entry(out, matno, diag_blk, upos, upos, a);
            append_entry(out, matno, diag_blk, vpos, vpos, -a);
        }
    };

    emit(0, program.obj_free, program.obj_nonneg, program.obj_psd);
    for (int r = 0; r < program.num_rows(); ++r)
        emit(r + 1, program.rows[r].free_terms, program.rows[r].nonneg_terms, program.rows[r].psd_terms);
    return out;
}

void export_sdpa(const ConicProgram& program, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("export_sdpa: cannot open " + path);
    os << to_sdpa(program);
    if (!os) throw std::runtime_error("export_sdpa: write failed for " + path);
}

SdpaData parse_sdpa(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("parse_sdpa: cannot open " + path);
    SdpaData data;
    std::string line;
    int stage = 0;  // 0: m, 1: nblocks, 2: sizes, 3: rhs, 4: entries
    int nblocks = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '"' || line[0] == '*') continue;
        std::istringstream ls(line);
        if (stage == 0) {
            ls >> data.num_rows;
            stage = 1;
        } else if (stage == 1) {
            ls >> nblocks;
            stage = 2;
        } else if (stage == 2) {
            int s;
            char c;
            // block sizes may be wrapped in braces or parentheses
            while (ls >> c) {
                if (c == '{' || c == '}' || c == '(' || c == ')' || c == ',') continue;
                ls.putback(c);
                if (!(ls >> s)) break;
                data.block_sizes.push_back(s);
            }
            if (static_cast<int>(data.block_sizes.size()) >= nblocks) stage = 3;
        } else if (stage == 3) {
            double v;
            while (ls >> v) data.rhs.push_back(v);
            if (static_cast<int>(data.rhs.size()) >= data.num_rows) stage = 4;
        } else {
            SdpaData::Entry e;
            if (ls >> e.matno >> e.blkno >> e.i >> e.j >> e.value) data.entries.push_back(e);
        }
    }
    if (static_cast<int>(data.block_sizes.size()) != nblocks)
        throw std::runtime_error("parse_sdpa: malformed block size line");
    if (static_cast<int>(data.rhs.size()) != data.num_rows)
        throw std::runtime_error("parse_sdpa: malformed right-hand side line");
    return data;
}

ConicSolution import_sdpa_solution(const std::string& path, const ConicProgram& program) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("import_sdpa_solution: cannot open " + path);
    std::vector<double> values;
    double v;
    while (is >> v) values.push_back(v);
    const int m = program.num_rows();
    if (static_cast<int>(values.size()) < m)
        throw std::runtime_error("import_sdpa_solution: expected at least " + std::to_string(m) + " values");
    ConicSolution sol;
    sol.status = SolveStatus::Optimal;
    sol.message = "imported";
    sol.duals.assign(values.begin(), values.begin() + m);
    double dobj = 0;
    for (int r = 0; r < m; ++r) dobj += program.rows[r].rhs * sol.duals[r];
    sol.dual_obj = dobj;
    sol.primal_obj = dobj;
    return sol;
}

}  // namespace sbsos
