#pragma once

#include <cstddef>
#include <vector>

#include "lowrank/dense_matrix.hpp"

namespace lowrank {

struct SvdOptions {
  double rank_tol = 1e-12;   // numerical rank cutoff, relative to d1
  double sweep_tol = 1e-14;  // relative off-diagonal threshold per column pair
  int max_sweeps = 60;
};

// Thin SVD of an n x m matrix: u is n x t, v is m x t with t = min(n, m),
// singular values sorted descending. u and v have orthonormal columns and
// u * diag(d) * v^* reproduces the input. Columns are phase-normalized so the
// largest-modulus entry of each column of u is real non-negative.
struct SvdFactors {
  DenseMatrix u;
  std::vector<double> singular_values;
  DenseMatrix v;
  std::size_t numerical_rank = 0;
};

// One-sided Jacobi with cyclic sweeps. Throws std::runtime_error if the
// sweep cap is hit before convergence.
SvdFactors svd(const DenseMatrix& p, const SvdOptions& opts = {});
SvdFactors svd(const DenseMatrix& p, double rank_tol);

// u * diag(d) * v^*.
DenseMatrix reconstruct(const SvdFactors& f);

// Best rank-r approximation: keep the leading r singular values.
DenseMatrix truncate_rank(const SvdFactors& f, std::size_t r);

}  // namespace lowrank
