#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace lowrank {

using cplx = std::complex<double>;

// Row-major dense complex matrix. Values are immutable by convention once
// built; all free functions below return new matrices.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  // diag(d) padded with zeros to rows x cols.
  static DenseMatrix diagonal(const std::vector<double>& d, std::size_t rows,
                              std::size_t cols) {
    DenseMatrix m(rows, cols);
    const std::size_t n = std::min({d.size(), rows, cols});
    for (std::size_t i = 0; i < n; ++i) m(i, i) = d[i];
    return m;
  }

  static DenseMatrix diagonal(const std::vector<double>& d) {
    return diagonal(d, d.size(), d.size());
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }

  cplx& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  const std::vector<cplx>& entries() const { return entries_; }
  std::vector<cplx>& entries() { return entries_; }

  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> entries_;
};

DenseMatrix adjoint(const DenseMatrix& a);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const DenseMatrix& a, double alpha);

// Sum of squared moduli.
double frobenius_norm_sq(const DenseMatrix& a);
// frobenius_norm_sq(a - b); throws std::invalid_argument on shape mismatch.
double frobenius_dist_sq(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace lowrank
