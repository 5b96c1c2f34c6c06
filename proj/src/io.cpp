#include "kfw/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "kfw/errors.hpp"

namespace kfw {

namespace {

constexpr std::size_t kMaxDim = 100000000;  // guards size overflow

[[noreturn]] void fail(const std::string& path, std::size_t line,
                       const std::string& msg) {
  throw param_error(path + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::size_t parse_index(const std::string& tok, const std::string& path,
                        std::size_t line, const char* what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(tok, &pos);
  } catch (const std::exception&) {
    fail(path, line, std::string("expected an integer ") + what + ", got '" +
                         tok + "'");
  }
  if (pos != tok.size())
    fail(path, line, std::string("trailing characters in ") + what + " '" +
                         tok + "'");
  if (v > kMaxDim * kMaxDim)
    fail(path, line, std::string(what) + " out of range: " + tok);
  return static_cast<std::size_t>(v);
}

double parse_value(const std::string& tok, const std::string& path,
                   std::size_t line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    fail(path, line, "expected a real value, got '" + tok + "'");
  }
  if (pos != tok.size())
    fail(path, line, "trailing characters in value '" + tok + "'");
  if (!std::isfinite(v))
    fail(path, line, "non-finite entry '" + tok + "'");
  return v;
}

struct MmHeader {
  bool coordinate = false;
  std::size_t rows = 0, cols = 0, nnz = 0;
  std::size_t data_line = 0;  // line number where data starts
};

MmHeader read_header(std::ifstream& in, const std::string& path) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) fail(path, 1, "empty file");
  ++lineno;
  const auto banner = split_ws(lower(line));
  if (banner.size() < 4 || banner[0] != "%%matrixmarket" ||
      banner[1] != "matrix")
    fail(path, lineno, "malformed header; expected '%%MatrixMarket matrix "
                       "<array|coordinate> real general'");
  MmHeader h;
  if (banner[2] == "coordinate") h.coordinate = true;
  else if (banner[2] != "array")
    fail(path, lineno, "unsupported storage '" + banner[2] + "'");
  if (banner[3] != "real")
    fail(path, lineno, "unsupported field '" + banner[3] + "'");
  if (banner.size() > 4 && banner[4] != "general")
    fail(path, lineno, "unsupported symmetry '" + banner[4] + "'");

  // skip comments
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::size_t expected = h.coordinate ? 3 : 2;
    if (toks.size() != expected)
      fail(path, lineno, "size line must have " + std::to_string(expected) +
                             " fields");
    h.rows = parse_index(toks[0], path, lineno, "row count");
    h.cols = parse_index(toks[1], path, lineno, "column count");
    if (h.rows == 0 || h.cols == 0 || h.rows > kMaxDim || h.cols > kMaxDim)
      fail(path, lineno, "dimensions out of range");
    if (h.coordinate) {
      h.nnz = parse_index(toks[2], path, lineno, "entry count");
      if (h.nnz > h.rows * h.cols)
        fail(path, lineno, "entry count exceeds rows*cols");
    }
    h.data_line = lineno;
    return h;
  }
  fail(path, lineno, "missing size line");
}

}  // namespace

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw param_error("cannot open file: " + path);
  const MmHeader h = read_header(in, path);
  Matrix m(h.rows, h.cols);
  std::string line;
  std::size_t lineno = h.data_line;

  if (!h.coordinate) {
    // array format: column-major stream of rows*cols values
    std::size_t count = 0;
    const std::size_t total = h.rows * h.cols;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line[0] == '%') continue;
      for (const auto& tok : split_ws(line)) {
        if (count >= total)
          fail(path, lineno, "more than rows*cols values in array file");
        const double v = parse_value(tok, path, lineno);
        m(count % h.rows, count / h.rows) = v;
        ++count;
      }
    }
    if (count != total)
      fail(path, lineno,
           "expected " + std::to_string(total) + " values, found " +
               std::to_string(count));
    return m;
  }

  std::vector<bool> seen(h.rows * h.cols, false);
  std::size_t count = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 3)
      fail(path, lineno, "coordinate entry must be 'row col value'");
    const std::size_t r = parse_index(toks[0], path, lineno, "row index");
    const std::size_t c = parse_index(toks[1], path, lineno, "column index");
    if (r == 0 || c == 0 || r > h.rows || c > h.cols)
      fail(path, lineno, "index out of range: (" + toks[0] + ", " + toks[1] +
                             ")");
    if (seen[(r - 1) * h.cols + (c - 1)])
      fail(path, lineno, "duplicate entry (" + toks[0] + ", " + toks[1] + ")");
    seen[(r - 1) * h.cols + (c - 1)] = true;
    m(r - 1, c - 1) = parse_value(toks[2], path, lineno);
    ++count;
  }
  if (count != h.nnz)
    fail(path, lineno,
         "declared " + std::to_string(h.nnz) + " entries, found " +
             std::to_string(count));
  return m;
}

Vector read_vector_file(const std::string& path) {
  const Matrix m = read_matrix_file(path);
  if (m.rows() != 1 && m.cols() != 1)
    throw param_error(path + ": expected a vector (one row or one column), " +
                      "got " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()));
  Vector v(m.rows() * m.cols());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = m.data()[i];
  return v;
}

namespace {

void write_all(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw param_error("cannot write file: " + path);
  out << body;
  if (!out) throw param_error("write failed: " + path);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_matrix_array(const std::string& path, const Matrix& m) {
  std::string body = "%%MatrixMarket matrix array real general\n";
  body += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (std::size_t r = 0; r < m.rows(); ++r)
      body += fmt(m(r, c)) + "\n";
  write_all(path, body);
}

void write_vector_array(const std::string& path, const Vector& v) {
  std::string body = "%%MatrixMarket matrix array real general\n";
  body += std::to_string(v.size()) + " 1\n";
  for (std::size_t i = 0; i < v.size(); ++i) body += fmt(v[i]) + "\n";
  write_all(path, body);
}

void write_matrix_coordinate(const std::string& path, std::size_t rows,
                             std::size_t cols,
                             const std::vector<CoordEntry>& entries) {
  if (rows == 0 || cols == 0)
    throw param_error("write_matrix_coordinate: empty dimensions");
  std::string body = "%%MatrixMarket matrix coordinate real general\n";
  body += std::to_string(rows) + " " + std::to_string(cols) + " " +
          std::to_string(entries.size()) + "\n";
  for (const auto& e : entries) {
    if (e.row >= rows || e.col >= cols)
      throw param_error("write_matrix_coordinate: entry out of range");
    body += std::to_string(e.row + 1) + " " + std::to_string(e.col + 1) + " " +
            fmt(e.value) + "\n";
  }
  write_all(path, body);
}

}  // namespace kfw
