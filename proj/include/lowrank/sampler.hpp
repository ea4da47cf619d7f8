#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lowrank/dense_matrix.hpp"
#include "lowrank/rng.hpp"
#include "lowrank/svd.hpp"

namespace lowrank {

// Precomputed state for sampling a rank-r index set over the singular values
// d (descending, all > 0). The first heavy_count values are kept in every
// realization; the remaining "light" values are sampled with inclusion
// probability scale * d[i], each contributing fill_value when included.
struct SamplingPlan {
  std::vector<double> d;
  std::size_t r = 0;
  std::size_t k = 0;                       // heavy count
  double c = 0.0;                          // fill value, 0 when no light part
  double scale = 0.0;                      // (r - k) / sum of light d
  std::vector<double> inclusion_prob;      // per light index, size N - k
  std::vector<double> segment_boundaries;  // cumulative scale * d, last == r - k

  std::size_t light_count() const { return d.size() - k; }
  std::size_t picks() const { return r > k ? r - k : 0; }
  bool has_light() const { return k < d.size() && r > k; }
};

// One realized draw. index_set holds 0-based positions into d (all >= k),
// diag_values has length N.
struct LowRankSample {
  std::vector<std::size_t> index_set;
  std::vector<double> diag_values;
  double uniform_draw = 0.0;
};

struct SampleOptions {
  bool permute_segments = false;
};

// Smallest k' with (r - k') * d[k'] < sum_{i >= k'} d[i] (strict; equality
// makes the component heavy). Returns min(r, N) when no k' qualifies.
std::size_t heavy_split(const std::vector<double>& d, std::size_t r);

SamplingPlan build_plan(std::vector<double> d, std::size_t r);

// Index set hit by the points s, s+1, ..., s+picks-1 over the segment
// partition; deterministic in (plan, s), always returns exactly picks()
// indices. Comparison rule: boundary >= s selects.
std::vector<std::size_t> systematic_select(const SamplingPlan& plan, double s);

LowRankSample assemble_sample(const SamplingPlan& plan,
                              std::vector<std::size_t> index_set, double s);

// Algorithm end to end: SVD, plan, one systematic draw, Q = U diag(Q') V^*.
// r >= numerical rank returns P itself (deterministic).
std::pair<DenseMatrix, LowRankSample> sample_low_rank(
    const DenseMatrix& p, std::size_t r, UniformRng& rng,
    const SampleOptions& opts = {});

// Same, reusing precomputed factors (the SVD dominates the cost).
std::pair<DenseMatrix, LowRankSample> sample_low_rank(
    const SvdFactors& f, std::size_t r, UniformRng& rng,
    const SampleOptions& opts = {});

// diag values applied through the factors: U diag(q) V^*.
DenseMatrix compose_from_diag(const SvdFactors& f,
                              const std::vector<double>& diag_values);

}  // namespace lowrank
