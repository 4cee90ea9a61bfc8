// Minimal Matrix Market I/O: dense array and coordinate formats, real
// general/symmetric. Enough for problem ingestion and report outputs.
#pragma once

#include "saddle_rotor/corelin.hpp"

#include <fstream>
#include <sstream>

namespace saddle_rotor {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Matrix read_matrix_market(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(name + ": empty Matrix Market stream");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || object != "matrix")
    throw ParseError(name + ": bad Matrix Market banner: " + line);
  if (field != "real" && field != "integer")
    throw ParseError(name + ": unsupported field type: " + field);
  const bool coordinate = (format == "coordinate");
  if (!coordinate && format != "array")
    throw ParseError(name + ": unsupported format: " + format);
  const bool symmetric = (symmetry == "symmetric");
  if (!symmetric && symmetry != "general")
    throw ParseError(name + ": unsupported symmetry: " + symmetry);

  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sizes(line);
  Eigen::Index rows = 0, cols = 0;
  long long entries = 0;
  if (coordinate)
    sizes >> rows >> cols >> entries;
  else
    sizes >> rows >> cols;
  if (sizes.fail() || rows <= 0 || cols <= 0)
    throw ParseError(name + ": bad size line: " + line);

  Matrix m = Matrix::Zero(rows, cols);
  if (coordinate) {
    for (long long k = 0; k < entries; ++k) {
      Eigen::Index i, j;
      double v;
      if (!(in >> i >> j >> v))
        throw ParseError(name + ": truncated coordinate data");
      if (i < 1 || i > rows || j < 1 || j > cols)
        throw ParseError(name + ": coordinate out of range");
      m(i - 1, j - 1) = v;
      if (symmetric) m(j - 1, i - 1) = v;
    }
  } else {
    // Array format is column-major; symmetric stores the lower triangle.
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = symmetric ? j : 0; i < rows; ++i) {
        double v;
        if (!(in >> v)) throw ParseError(name + ": truncated array data");
        m(i, j) = v;
        if (symmetric) m(j, i) = v;
      }
    }
  }
  return m;
}

inline Matrix read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file: " + path);
  return read_matrix_market(in, path);
}

inline void write_matrix_market(std::ostream& out, const Matrix& m) {
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << " " << m.cols() << "\n";
  out.precision(17);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) out << m(i, j) << "\n";
}

inline void write_matrix_market_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  write_matrix_market(out, m);
}

}  // namespace saddle_rotor
