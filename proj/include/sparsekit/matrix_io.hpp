#pragma once
// CSV matrix persistence: one row per line, comma-separated decimal literals,
// LF line endings, 17 significant digits on output so a save/load round trip
// reproduces every double exactly.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "sparsekit/core.hpp"

namespace sparsekit {

Matrix read_matrix_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const Matrix& a);

Matrix load_matrix(const std::filesystem::path& path);
void save_matrix(const Matrix& a, const std::filesystem::path& path);

/// Loads a vector stored either as one column or as one row.
Vector load_vector(const std::filesystem::path& path);

/// Shortest-round-trip-safe decimal text for a double (17 significant digits).
std::string format_double(double v);

/// Writes `content` to a sibling temp file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace sparsekit
