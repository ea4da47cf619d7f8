#include "lowrank/dense_matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace lowrank {

bool DenseMatrix::all_finite() const {
  for (const cplx& z : entries_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

DenseMatrix adjoint(const DenseMatrix& a) {
  DenseMatrix r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
  return r;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("multiply: inner dimensions differ");
  DenseMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const cplx ail = a(i, l);
      if (ail == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += ail * b(l, j);
    }
  }
  return r;
}

static void require_same_shape(const DenseMatrix& a, const DenseMatrix& b,
                               const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "subtract");
  DenseMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i)
    r.entries()[i] = a.entries()[i] - b.entries()[i];
  return r;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "add");
  DenseMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i)
    r.entries()[i] = a.entries()[i] + b.entries()[i];
  return r;
}

DenseMatrix scale(const DenseMatrix& a, double alpha) {
  DenseMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i)
    r.entries()[i] = a.entries()[i] * alpha;
  return r;
}

double frobenius_norm_sq(const DenseMatrix& a) {
  double s = 0.0;
  for (const cplx& z : a.entries()) s += std::norm(z);
  return s;
}

double frobenius_dist_sq(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "frobenius_dist_sq");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += std::norm(a.entries()[i] - b.entries()[i]);
  return s;
}

}  // namespace lowrank
