#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mvsel/numerics.hpp"
#include "mvsel/summary.hpp"

namespace mvsel::io {

// Comma-separated, no header, doubles at 17 significant digits.

std::string format_double(double v);

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);

void write_mask_csv(const std::filesystem::path& path, const Mask& m);
/// Any nonzero cell counts as set.
Mask read_mask_csv(const std::filesystem::path& path);

/// One line per entry, row-major: row,col,lo,hi with one-based coordinates and
/// NA,NA for entries without nonzero draws.
void write_intervals_csv(const std::filesystem::path& path, const IntervalMatrix& ci);
IntervalMatrix read_intervals_csv(const std::filesystem::path& path);

/// One line per draw, each the row-major flattening of the matrix.
void write_draws_csv(const std::filesystem::path& path, std::span<const Matrix> draws);
std::vector<Matrix> read_draws_csv(const std::filesystem::path& path, std::size_t rows, std::size_t cols);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Header-bearing table; cells are written verbatim.
void write_table_csv(const std::filesystem::path& path, std::span<const std::string> header,
                     std::span<const std::vector<std::string>> rows);

}  // namespace mvsel::io
