#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lowrank/dense_matrix.hpp"
#include "lowrank/sampler.hpp"

namespace lowrank {

// Exact discrete distribution over index sets induced by the uniform draw.
struct Outcome {
  std::vector<std::size_t> index_set;  // 0-based, sorted
  double probability = 0.0;
};

struct OutcomeTable {
  std::vector<Outcome> outcomes;
  std::vector<double> breakpoints;  // cell edges of s in [0,1)
};

// The selection is piecewise constant in s; cells are bounded by the
// fractional parts of the segment boundaries. Requires light_count <= 24.
OutcomeTable enumerate_outcomes(const SamplingPlan& plan);

// E||Q' - diag(d)||_F^2 under the plan: (r-k) c^2 - sum_{i>k} d_i^2.
// Zero when r >= N.
double expected_distortion_closed_form(const std::vector<double>& d,
                                       std::size_t r);

// Duality-style bound computed on a separate path: shift the target by the
// fixed matrix B with diag(d) - B = diag(d_1..d_k, c, ..., c), take the best
// rank-r error of the shifted target, subtract ||B||_F^2.
double lower_bound(const std::vector<double>& d, std::size_t r);

double truncation_baseline(const std::vector<double>& d, std::size_t r);

struct UnbiasednessReport {
  std::size_t samples = 0;
  double max_abs_deviation = 0.0;       // max_ij |mean_ij - p_ij|
  std::vector<double> deviation;        // row-major, |mean - p|
  std::vector<double> std_error;        // row-major, per-entry sigma/sqrt(M)
  std::size_t exceedances = 0;          // entries with deviation > 4 sigma/sqrt(M)
};

UnbiasednessReport empirical_unbiasedness(const DenseMatrix& p, std::size_t r,
                                          std::size_t samples,
                                          std::uint64_t seed, int threads = 1);

struct DistortionEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

DistortionEstimate empirical_distortion(const DenseMatrix& p, std::size_t r,
                                        std::size_t samples, std::uint64_t seed,
                                        int threads = 1);

struct OptimalityReport {
  double expected_distortion = 0.0;
  double lower_bound = 0.0;
  double truncation_baseline = 0.0;
};

// Throws std::logic_error if the closed form and the bound disagree beyond
// 1e-10 relative, or either drops below the truncation baseline.
OptimalityReport verify_optimality(const std::vector<double>& d, std::size_t r);

}  // namespace lowrank
