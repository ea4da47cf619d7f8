#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "lowrank/dense_matrix.hpp"
#include "lowrank/rng.hpp"

namespace lowrank::testing {

inline DenseMatrix random_matrix(UniformRng& rng, std::size_t n, std::size_t m,
                                 bool complex_entries = true) {
  DenseMatrix a(n, m);
  for (cplx& z : a.entries()) {
    const double re = 2.0 * rng.next() - 1.0;
    const double im = complex_entries ? 2.0 * rng.next() - 1.0 : 0.0;
    z = {re, im};
  }
  return a;
}

// Modified Gram-Schmidt on a random complex matrix.
inline DenseMatrix random_unitary(UniformRng& rng, std::size_t n) {
  DenseMatrix a = random_matrix(rng, n, n, true);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < j; ++l) {
      cplx proj{};
      for (std::size_t i = 0; i < n; ++i) proj += std::conj(a(i, l)) * a(i, j);
      for (std::size_t i = 0; i < n; ++i) a(i, j) -= proj * a(i, l);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(a(i, j));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) a(i, j) /= nrm;
  }
  return a;
}

inline std::vector<double> random_descending(UniformRng& rng,
                                             std::size_t max_n,
                                             double lo = 0.1,
                                             double hi = 10.0) {
  const std::size_t n = 1 + rng.next_below(max_n);
  std::vector<double> d(n);
  for (double& x : d) x = lo + (hi - lo) * rng.next();
  std::sort(d.rbegin(), d.rend());
  return d;
}

}  // namespace lowrank::testing
