#pragma once

// Matrix Market readers and writers (dense "array" and sparse "coordinate"
// real general formats). Readers validate the header, dimensions, entry
// counts, duplicates, and finiteness, and report errors with the offending
// file, line, or entry. Array data is stored column-major in the file per
// the format definition.

#include <cstddef>
#include <string>
#include <vector>

#include "kfw/dense.hpp"

namespace kfw {

struct CoordEntry {
  std::size_t row = 0;  // zero-based
  std::size_t col = 0;
  double value = 0.0;
};

// Reads either format; coordinate files are densified (unlisted entries are
// zero). Throws param_error on malformed input.
Matrix read_matrix_file(const std::string& path);

// Reads an m x 1 or 1 x n array file as a vector.
Vector read_vector_file(const std::string& path);

void write_matrix_array(const std::string& path, const Matrix& m);
void write_vector_array(const std::string& path, const Vector& v);
void write_matrix_coordinate(const std::string& path, std::size_t rows,
                             std::size_t cols,
                             const std::vector<CoordEntry>& entries);

}  // namespace kfw
