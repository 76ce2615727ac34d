#include "whsim/iq_io.hpp"

#include "whsim/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace whsim {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_field(const std::string& field, std::size_t line_no) {
    const char* p = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(p, &end);
    while (end && (*end == ' ' || *end == '\r' || *end == '\t')) ++end;
    if (end == p || *end != '\0') {
        throw MalformedInput("iq csv: non-numeric field '" + field + "' at line " +
                             std::to_string(line_no));
    }
    return v;
}

} // namespace

void write_iq_csv(const ObservationBlock& block, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("write_iq_csv: cannot open " + path);

    const std::size_t n = block.n_s + block.n_n;
    out << "t";
    for (std::size_t c = 0; c < n; ++c) out << ",ch" << c << "_re,ch" << c << "_im";
    out << "\n";
    for (std::size_t t = 0; t < block.t_len; ++t) {
        out << t;
        for (std::size_t c = 0; c < n; ++c) {
            const cdouble v = c < block.n_s ? block.y_s(c, t) : block.y_n(c - block.n_s, t);
            out << ',' << fmt17(v.real()) << ',' << fmt17(v.imag());
        }
        out << "\n";
    }
    if (!out) throw Error("write_iq_csv: write failed for " + path);
}

ComplexMatrix read_iq_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("read_iq_csv: cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw MalformedInput("read_iq_csv: missing header in " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> head = split_csv(line);
    if (head.empty() || head[0] != "t" || head.size() < 3 || head.size() % 2 == 0) {
        throw MalformedInput("read_iq_csv: bad header in " + path);
    }
    const std::size_t n = (head.size() - 1) / 2;
    for (std::size_t c = 0; c < n; ++c) {
        const std::string want_re = "ch" + std::to_string(c) + "_re";
        const std::string want_im = "ch" + std::to_string(c) + "_im";
        if (head[1 + 2 * c] != want_re || head[2 + 2 * c] != want_im) {
            throw MalformedInput("read_iq_csv: bad header column order in " + path);
        }
    }

    std::vector<cdouble> entries; // column-major over time; transposed on return
    std::size_t t_len = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv(line);
        if (fields.size() != 1 + 2 * n) {
            throw MalformedInput("read_iq_csv: expected " + std::to_string(1 + 2 * n) +
                                 " fields at line " + std::to_string(line_no));
        }
        parse_field(fields[0], line_no); // slot index; value unused
        for (std::size_t c = 0; c < n; ++c) {
            entries.emplace_back(parse_field(fields[1 + 2 * c], line_no),
                                 parse_field(fields[2 + 2 * c], line_no));
        }
        ++t_len;
    }
    if (t_len == 0) throw MalformedInput("read_iq_csv: no data rows in " + path);

    ComplexMatrix out(n, t_len);
    for (std::size_t t = 0; t < t_len; ++t)
        for (std::size_t c = 0; c < n; ++c) out(c, t) = entries[t * n + c];
    return out;
}

ObservationBlock partition_recording(const ComplexMatrix& raw, std::size_t n_s, std::size_t n_n) {
    if (raw.rows() != n_s + n_n) {
        throw DimensionMismatch("partition_recording: recording has " + std::to_string(raw.rows()) +
                                " channels, expected " + std::to_string(n_s + n_n));
    }
    ObservationBlock block;
    block.t_len = raw.cols();
    block.n_s = n_s;
    block.n_n = n_n;
    block.y_s = ComplexMatrix(n_s, raw.cols());
    block.y_n = ComplexMatrix(n_n, raw.cols());
    for (std::size_t t = 0; t < raw.cols(); ++t) {
        for (std::size_t i = 0; i < n_s; ++i) block.y_s(i, t) = raw(i, t);
        for (std::size_t i = 0; i < n_n; ++i) block.y_n(i, t) = raw(n_s + i, t);
    }
    return block;
}

} // namespace whsim
