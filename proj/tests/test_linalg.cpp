#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lowrank/dense_matrix.hpp"
#include "lowrank/svd.hpp"
#include "test_support.hpp"

using namespace lowrank;
using namespace lowrank::testing;

namespace {

DenseMatrix diag2(double a, double b) {
  return DenseMatrix::diagonal({a, b});
}

double max_offdiag_from_identity(const DenseMatrix& g) {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const double target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(g(i, j) - cplx{target, 0.0}));
    }
  return worst;
}

}  // namespace

TEST_CASE("frobenius_norm_sq") {
  CHECK(frobenius_norm_sq(DenseMatrix(3, 4)) == 0.0);
  CHECK(frobenius_norm_sq(diag2(4, 1)) == doctest::Approx(17.0).epsilon(1e-15));

  DenseMatrix a(2, 2);
  a(0, 0) = 3.0;
  a(0, 1) = 4.0;
  a(1, 0) = cplx{0.0, 5.0};
  CHECK(frobenius_norm_sq(a) == doctest::Approx(50.0).epsilon(1e-15));
}

TEST_CASE("frobenius_dist_sq") {
  const DenseMatrix p = diag2(4, 1);
  CHECK(frobenius_dist_sq(p, p) == 0.0);
  CHECK(frobenius_dist_sq(p, diag2(5, 0)) == doctest::Approx(2.0));
  CHECK(frobenius_dist_sq(p, DenseMatrix::diagonal({0, 5})) ==
        doctest::Approx(32.0));
  CHECK_THROWS_AS(frobenius_dist_sq(p, DenseMatrix(3, 2)),
                  std::invalid_argument);
}

TEST_CASE("svd of a diagonal matrix") {
  const SvdFactors f = svd(diag2(4, 1));
  REQUIRE(f.singular_values.size() == 2);
  CHECK(f.singular_values[0] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(f.singular_values[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.numerical_rank == 2);
  CHECK(max_offdiag_from_identity(f.u) < 1e-12);
  CHECK(max_offdiag_from_identity(f.v) < 1e-12);
}

TEST_CASE("svd of a unitary matrix has unit singular values") {
  UniformRng rng(7);
  for (std::size_t n : {2u, 5u, 9u}) {
    const SvdFactors f = svd(random_unitary(rng, n));
    CHECK(f.numerical_rank == n);
    for (double d : f.singular_values)
      CHECK(d == doctest::Approx(1.0).epsilon(1e-11));
  }
}

TEST_CASE("svd reconstruction on a random 8x5 complex matrix") {
  UniformRng rng(11);
  const DenseMatrix a = random_matrix(rng, 8, 5);
  const SvdFactors f = svd(a);
  const double rel = std::sqrt(frobenius_dist_sq(reconstruct(f), a) /
                               frobenius_norm_sq(a));
  CHECK(rel < 1e-10);
  CHECK(std::sqrt(frobenius_norm_sq(
            subtract(multiply(adjoint(f.u), f.u),
                     DenseMatrix::identity(f.u.cols())))) < 1e-11);
  CHECK(std::sqrt(frobenius_norm_sq(
            subtract(multiply(adjoint(f.v), f.v),
                     DenseMatrix::identity(f.v.cols())))) < 1e-11);
}

TEST_CASE("svd rejects bad input and reports non-convergence explicitly") {
  CHECK_THROWS_AS(svd(DenseMatrix(0, 0)), std::invalid_argument);
  DenseMatrix nan(2, 2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(svd(nan), std::invalid_argument);

  SvdOptions opts;
  opts.max_sweeps = 0;
  UniformRng rng(3);
  CHECK_THROWS_AS(svd(random_matrix(rng, 4, 4), opts), std::runtime_error);
}

TEST_CASE("phase convention makes output deterministic") {
  UniformRng rng(5);
  const DenseMatrix a = random_matrix(rng, 6, 6);
  const SvdFactors f1 = svd(a);
  const SvdFactors f2 = svd(a);
  CHECK(frobenius_dist_sq(f1.u, f2.u) == 0.0);
  CHECK(frobenius_dist_sq(f1.v, f2.v) == 0.0);
  for (std::size_t j = 0; j < f1.u.cols(); ++j) {
    double best = 0.0;
    for (std::size_t i = 0; i < f1.u.rows(); ++i)
      best = std::max(best, std::abs(f1.u(i, j)));
    // the largest-modulus entry is real non-negative
    bool found = false;
    for (std::size_t i = 0; i < f1.u.rows(); ++i) {
      if (std::abs(f1.u(i, j)) == best) {
        CHECK(f1.u(i, j).imag() == 0.0);
        CHECK(f1.u(i, j).real() >= 0.0);
        found = true;
        break;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("reconstruct round trip and zeroed factors") {
  UniformRng rng(13);
  const DenseMatrix a = random_matrix(rng, 6, 6);
  SvdFactors f = svd(a);
  CHECK(frobenius_dist_sq(reconstruct(f), a) / frobenius_norm_sq(a) < 1e-20);

  for (double& d : f.singular_values) d = 0.0;
  CHECK(frobenius_norm_sq(reconstruct(f)) == 0.0);
}

TEST_CASE("truncate_rank") {
  const SvdFactors f = svd(diag2(4, 1));
  const DenseMatrix t1 = truncate_rank(f, 1);
  CHECK(frobenius_dist_sq(t1, diag2(4, 0)) < 1e-24);
  CHECK(frobenius_dist_sq(t1, diag2(4, 1)) == doctest::Approx(1.0));

  CHECK(frobenius_norm_sq(truncate_rank(f, 0)) == 0.0);

  const DenseMatrix p3 = DenseMatrix::diagonal({3, 2, 1});
  const SvdFactors f3 = svd(p3);
  CHECK(frobenius_dist_sq(truncate_rank(f3, 2), p3) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // r >= N returns the full reconstruction
  CHECK(frobenius_dist_sq(truncate_rank(f3, 7), p3) < 1e-20);
}

TEST_CASE("round trip property up to 64x64, real and complex") {
  UniformRng rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 1 + rng.next_below(64);
    const std::size_t m = 1 + rng.next_below(64);
    const bool complex_entries = trial % 2 == 0;
    const DenseMatrix a = random_matrix(rng, n, m, complex_entries);
    const SvdFactors f = svd(a);
    const double rel = std::sqrt(frobenius_dist_sq(reconstruct(f), a) /
                                 frobenius_norm_sq(a));
    CHECK(rel < 1e-10);
  }
}

TEST_CASE("singular values are invariant under unitary conjugation") {
  UniformRng rng(19);
  const std::size_t n = 7;
  const DenseMatrix a = random_matrix(rng, n, n);
  const DenseMatrix u = random_unitary(rng, n);
  const DenseMatrix v = random_unitary(rng, n);
  const SvdFactors fa = svd(a);
  const SvdFactors fb = svd(multiply(multiply(u, a), adjoint(v)));
  for (std::size_t i = 0; i < n; ++i)
    CHECK(fb.singular_values[i] ==
          doctest::Approx(fa.singular_values[i]).epsilon(1e-10));
}

TEST_CASE("frobenius norm equals sum of squared singular values") {
  UniformRng rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    const DenseMatrix a =
        random_matrix(rng, 3 + rng.next_below(20), 3 + rng.next_below(20));
    const SvdFactors f = svd(a);
    double sum_sq = 0.0;
    for (double d : f.singular_values) sum_sq += d * d;
    CHECK(sum_sq ==
          doctest::Approx(frobenius_norm_sq(a)).epsilon(1e-10));

    // truncation error matches the tail sum
    const std::size_t r = rng.next_below(f.singular_values.size() + 1);
    double tail = 0.0;
    for (std::size_t i = r; i < f.singular_values.size(); ++i)
      tail += f.singular_values[i] * f.singular_values[i];
    CHECK(frobenius_dist_sq(truncate_rank(f, r), a) ==
          doctest::Approx(tail).epsilon(1e-9));
  }
}

TEST_CASE("rank-deficient input gets the right numerical rank") {
  UniformRng rng(29);
  // 6x6 of rank 3
  const DenseMatrix a = random_matrix(rng, 6, 3);
  const DenseMatrix b = random_matrix(rng, 3, 6);
  const SvdFactors f = svd(multiply(a, b));
  CHECK(f.numerical_rank == 3);
  CHECK(max_offdiag_from_identity(multiply(adjoint(f.u), f.u)) < 1e-10);
}
