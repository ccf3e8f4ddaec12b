#include "mvsel/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mvsel::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return in;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string f = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        while (!f.empty() && (f.back() == ' ' || f.back() == '\r' || f.back() == '\t')) f.pop_back();
        std::size_t lead = 0;
        while (lead < f.size() && (f[lead] == ' ' || f[lead] == '\t')) ++lead;
        out.push_back(f.substr(lead));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    if (!s.empty() && *b == '+') ++b;
    const auto res = std::from_chars(b, e, v);
    if (s.empty() || res.ec != std::errc() || res.ptr != e) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": not a number: '" + s + "'");
    }
    return v;
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split_fields(line));
    }
    return rows;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out = open_out(path);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
    const auto rows = read_rows(path);
    if (rows.empty()) throw std::runtime_error(path.string() + ": empty matrix file");
    const std::size_t cols = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) {
            throw std::runtime_error(path.string() + ":" + std::to_string(i + 1) + ": expected " +
                                     std::to_string(cols) + " fields, got " + std::to_string(rows[i].size()));
        }
        for (const auto& f : rows[i]) values.push_back(parse_double(f, path, i + 1));
    }
    return Matrix::from_values(rows.size(), cols, std::move(values));
}

void write_mask_csv(const std::filesystem::path& path, const Mask& m) {
    std::ofstream out = open_out(path);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << (m(i, j) ? '1' : '0');
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Mask read_mask_csv(const std::filesystem::path& path) {
    return Mask::nonzero_pattern(read_matrix_csv(path));
}

void write_intervals_csv(const std::filesystem::path& path, const IntervalMatrix& ci) {
    std::ofstream out = open_out(path);
    for (std::size_t i = 0; i < ci.rows(); ++i)
        for (std::size_t j = 0; j < ci.cols(); ++j) {
            out << i + 1 << ',' << j + 1 << ',';
            if (const auto& iv = ci(i, j)) {
                out << format_double(iv->lo) << ',' << format_double(iv->hi) << '\n';
            } else {
                out << "NA,NA\n";
            }
        }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

IntervalMatrix read_intervals_csv(const std::filesystem::path& path) {
    const auto rows = read_rows(path);
    std::size_t nr = 0;
    std::size_t nc = 0;
    std::vector<std::pair<std::size_t, std::size_t>> idx;
    idx.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].size() != 4) {
            throw std::runtime_error(path.string() + ":" + std::to_string(k + 1) + ": expected 4 fields");
        }
        const double r = parse_double(rows[k][0], path, k + 1);
        const double c = parse_double(rows[k][1], path, k + 1);
        if (r < 1 || c < 1 || r != std::floor(r) || c != std::floor(c)) {
            throw std::runtime_error(path.string() + ":" + std::to_string(k + 1) + ": bad coordinates");
        }
        idx.emplace_back(static_cast<std::size_t>(r) - 1, static_cast<std::size_t>(c) - 1);
        nr = std::max(nr, idx.back().first + 1);
        nc = std::max(nc, idx.back().second + 1);
    }
    IntervalMatrix out(nr, nc);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k][2] == "NA") continue;
        out(idx[k].first, idx[k].second) =
            Interval{parse_double(rows[k][2], path, k + 1), parse_double(rows[k][3], path, k + 1)};
    }
    return out;
}

void write_draws_csv(const std::filesystem::path& path, std::span<const Matrix> draws) {
    std::ofstream out = open_out(path);
    for (const Matrix& d : draws) {
        const auto v = d.values();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out << ',';
            out << format_double(v[i]);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<Matrix> read_draws_csv(const std::filesystem::path& path, std::size_t rows, std::size_t cols) {
    const Matrix flat = read_matrix_csv(path);
    if (flat.cols() != rows * cols) {
        throw std::runtime_error(path.string() + ": draws have " + std::to_string(flat.cols()) +
                                 " values, expected " + std::to_string(rows * cols));
    }
    std::vector<Matrix> out;
    out.reserve(flat.rows());
    for (std::size_t k = 0; k < flat.rows(); ++k) {
        const auto r = flat.row(k);
        out.push_back(Matrix::from_values(rows, cols, std::vector<double>(r.begin(), r.end())));
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out = open_out(path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_table_csv(const std::filesystem::path& path, std::span<const std::string> header,
                     std::span<const std::vector<std::string>> rows) {
    std::ofstream out = open_out(path);
    for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t j = 0; j < r.size(); ++j) out << (j ? "," : "") << r[j];
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace mvsel::io
