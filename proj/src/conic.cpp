#include "sbsos/conic.hpp"

#include <cstdio>
#include <sstream>

namespace sbsos {

namespace {

void append_value(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void append_terms(std::string& out, const char* tag, const std::vector<std::pair<int, double>>& terms) {
    for (const auto& [idx, v] : terms) {
        out += tag;
        out += std::to_string(idx);
        out += ':';
        append_value(out, v);
        out += ' ';
    }
}

void append_psd(std::string& out, const std::vector<PsdCoeff>& terms) {
    for (const PsdCoeff& t : terms) {
        out += 'p';
        out += std::to_string(t.block);
        out += ',';
        out += std::to_string(t.i);
        out += ',';
        out += std::to_string(t.j);
        out += ':';
        append_value(out, t.value);
        out += ' ';
    }
}

}  // namespace

std::string serialize(const ConicProgram& program) {
    std::string out;
    out += "free " + std::to_string(program.num_free);
    out += " nonneg " + std::to_string(program.num_nonneg);
    out += " psd";
    for (int s : program.psd_sides) out += ' ' + std::to_string(s);
    out += "\nobj ";
    append_terms(out, "f", program.obj_free);
    append_terms(out, "n", program.obj_nonneg);
    append_psd(out, program.obj_psd);
    out += '\n';
    for (const LinearRow& row : program.rows) {
        out += "row ";
        append_terms(out, "f", row.free_terms);
        append_terms(out, "n", row.nonneg_terms);
        append_psd(out, row.psd_terms);
        out += "= ";
        append_value(out, row.rhs);
        out += '\n';
    }
    return out;
}

std::string hierarchy_name(Hierarchy h) {
    switch (h) {
        case Hierarchy::SparseBsos: return "sparse-bsos";
        case Hierarchy::DenseBsos: return "dense-bsos";
        case Hierarchy::SparsePut: return "sparse-put";
    }
    return "unknown";
}

}  // namespace sbsos
