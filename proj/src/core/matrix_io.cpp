#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "sparsekit/errors.hpp"
#include "sparsekit/matrix_io.hpp"

namespace sparsekit {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view token, std::size_t line) {
  token = trim(token);
  if (token.empty()) throw ParseError(line, "empty field");
  if (token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "not a number: '" + std::string(token) + "'");
  }
  return v;
}

}  // namespace

Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> row_lines;
  std::string line;
  std::size_t lineno = 0;
  std::size_t blank_run_start = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty()) {
      if (blank_run_start == 0) blank_run_start = lineno;
      continue;
    }
    if (blank_run_start != 0 && !rows.empty()) throw ParseError(blank_run_start, "blank line inside matrix");
    blank_run_start = 0;
    std::vector<double> values;
    std::size_t start = 0;
    for (;;) {
      const auto comma = body.find(',', start);
      values.push_back(parse_number(body.substr(start, comma - start), lineno));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw ParseError(lineno, "expected " + std::to_string(rows.front().size()) + " fields, found " +
                                   std::to_string(values.size()));
    }
    rows.push_back(std::move(values));
    row_lines.push_back(lineno);
  }
  if (rows.empty()) throw ParseError(lineno == 0 ? 1 : lineno, "no matrix rows");
  Matrix a(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (!std::isfinite(rows[i][j])) throw ParseError(row_lines[i], "non-finite value");
      a(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return a;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_matrix_csv(std::ostream& out, const Matrix& a) {
  std::string line;
  for (Index i = 0; i < a.rows(); ++i) {
    line.clear();
    for (Index j = 0; j < a.cols(); ++j) {
      if (j) line += ',';
      line += format_double(a(i, j));
    }
    line += '\n';
    out << line;
  }
}

Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open matrix file: " + path.string());
  try {
    return read_matrix_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

void save_matrix(const Matrix& a, const std::filesystem::path& path) {
  std::ostringstream out;
  write_matrix_csv(out, a);
  atomic_write(path, out.str());
}

Vector load_vector(const std::filesystem::path& path) {
  const Matrix a = load_matrix(path);
  if (a.cols() == 1) return a.col(0);
  if (a.rows() == 1) return a.row(0).transpose();
  throw InvalidArgument(path.string() + ": expected a single row or column, got " +
                        std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace sparsekit
