#pragma once

#include <stdexcept>
#include <string>

#include "lowrank/dense_matrix.hpp"

namespace lowrank {

enum class MatrixFormat { CsvReal, CsvComplex, Pgm };

// A matrix together with how it was stored on disk, so outputs can be
// written back in the same format.
struct MatrixFile {
  MatrixFormat format = MatrixFormat::CsvReal;
  DenseMatrix matrix;
  int pgm_maxval = 255;
  bool pgm_binary = true;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dispatches on extension: .pgm reads P2/P5 grayscale (maxval <= 65535),
// anything else reads CSV with cells `a`, `a+bi` or `a-bi`. Malformed input
// raises ParseError naming the line and byte offset.
MatrixFile read_matrix_file(const std::string& path);

// Writes m in the same format as `like`. CSV uses %.17g so doubles round-trip
// exactly; PGM clamps to [0, maxval] and rounds only here.
void write_matrix_file(const std::string& path, const MatrixFile& like,
                       const DenseMatrix& m);

std::string format_double(double x);  // %.17g

}  // namespace lowrank
