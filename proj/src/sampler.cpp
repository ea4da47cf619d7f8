#include "lowrank/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lowrank {

namespace {

void validate_weights(const std::vector<double>& d, std::size_t r) {
  if (r < 1) throw std::invalid_argument("rank budget must be >= 1");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0))
      throw std::invalid_argument("singular values must be positive");
    if (i > 0 && d[i] > d[i - 1])
      throw std::invalid_argument("singular values must be descending");
  }
}

std::vector<std::size_t> select_from_boundaries(
    const std::vector<double>& boundaries, std::size_t picks, double s) {
  std::vector<std::size_t> hits;
  hits.reserve(picks);
  double point = s;
  for (std::size_t i = 0; i < boundaries.size() && hits.size() < picks; ++i) {
    if (boundaries[i] >= point) {
      hits.push_back(i);
      point += 1.0;  // only shifts s + j, j < picks, are in play
    }
  }
  if (hits.size() != picks)
    throw std::logic_error("systematic selection lost cardinality");
  return hits;
}

}  // namespace

std::size_t heavy_split(const std::vector<double>& d, std::size_t r) {
  validate_weights(d, r);
  const std::size_t n = d.size();
  const std::size_t kmax = std::min(r, n);
  // suffix[i] = sum of d[i..n)
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + d[i];
  for (std::size_t k = 0; k < kmax; ++k) {
    if (static_cast<double>(r - k) * d[k] < suffix[k]) return k;
  }
  return kmax;
}

SamplingPlan build_plan(std::vector<double> d, std::size_t r) {
  SamplingPlan plan;
  plan.k = heavy_split(d, r);
  plan.d = std::move(d);
  plan.r = r;
  if (!plan.has_light()) return plan;

  const std::size_t picks = plan.picks();
  double tail = 0.0;
  for (std::size_t i = plan.d.size(); i-- > plan.k;) tail += plan.d[i];
  plan.c = tail / static_cast<double>(picks);
  plan.scale = static_cast<double>(picks) / tail;

  plan.inclusion_prob.reserve(plan.light_count());
  plan.segment_boundaries.reserve(plan.light_count());
  double acc = 0.0;
  for (std::size_t i = plan.k; i < plan.d.size(); ++i) {
    const double p = plan.scale * plan.d[i];
    plan.inclusion_prob.push_back(p);
    acc += p;
    plan.segment_boundaries.push_back(acc);
  }
  const double target = static_cast<double>(picks);
  if (std::abs(acc - target) > 1e-9)
    throw std::logic_error("segment lengths do not sum to the sample size");
  plan.segment_boundaries.back() = target;
  return plan;
}

std::vector<std::size_t> systematic_select(const SamplingPlan& plan, double s) {
  if (!plan.has_light())
    throw std::invalid_argument("systematic_select: plan has no light part");
  if (!(s >= 0.0 && s < 1.0))
    throw std::invalid_argument("systematic_select: s outside [0,1)");
  std::vector<std::size_t> hits =
      select_from_boundaries(plan.segment_boundaries, plan.picks(), s);
  for (std::size_t& h : hits) h += plan.k;
  return hits;
}

LowRankSample assemble_sample(const SamplingPlan& plan,
                              std::vector<std::size_t> index_set, double s) {
  if (index_set.size() != plan.picks())
    throw std::logic_error("assemble_sample: wrong index set cardinality");
  LowRankSample sample;
  sample.uniform_draw = s;
  sample.diag_values.assign(plan.d.size(), 0.0);
  for (std::size_t i = 0; i < plan.k; ++i) sample.diag_values[i] = plan.d[i];
  for (std::size_t idx : index_set) {
    if (idx < plan.k || idx >= plan.d.size())
      throw std::logic_error("assemble_sample: index outside light range");
    if (sample.diag_values[idx] != 0.0)
      throw std::logic_error("assemble_sample: duplicate index");
    sample.diag_values[idx] = plan.c;
  }
  sample.index_set = std::move(index_set);
  return sample;
}

DenseMatrix compose_from_diag(const SvdFactors& f,
                              const std::vector<double>& diag_values) {
  const std::size_t n = f.u.rows();
  const std::size_t m = f.v.rows();
  DenseMatrix q(n, m);
  const std::size_t t = std::min(diag_values.size(), f.singular_values.size());
  for (std::size_t l = 0; l < t; ++l) {
    const double d = diag_values[l];
    if (d == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx ud = f.u(i, l) * d;
      for (std::size_t j = 0; j < m; ++j) q(i, j) += ud * std::conj(f.v(j, l));
    }
  }
  return q;
}

std::pair<DenseMatrix, LowRankSample> sample_low_rank(const SvdFactors& f,
                                                      std::size_t r,
                                                      UniformRng& rng,
                                                      const SampleOptions& opts) {
  const std::size_t rank = f.numerical_rank;
  std::vector<double> d(f.singular_values.begin(),
                        f.singular_values.begin() + rank);
  if (r >= rank) {
    LowRankSample sample;
    sample.diag_values = d;
    return {reconstruct(SvdFactors{f.u, std::move(d), f.v, rank}),
            std::move(sample)};
  }

  SamplingPlan plan = build_plan(std::move(d), r);
  LowRankSample sample;
  if (!plan.has_light()) {
    sample = assemble_sample(plan, {}, 0.0);
  } else if (!opts.permute_segments) {
    const double s = rng.next();
    sample = assemble_sample(plan, systematic_select(plan, s), s);
  } else {
    // permutation is drawn before s so both overloads consume the stream
    // identically
    const std::size_t light = plan.light_count();
    std::vector<std::size_t> perm(light);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = light; i > 1; --i)
      std::swap(perm[i - 1], perm[rng.next_below(i)]);
    const double s = rng.next();
    std::vector<double> boundaries(light);
    double acc = 0.0;
    for (std::size_t i = 0; i < light; ++i) {
      acc += plan.scale * plan.d[plan.k + perm[i]];
      boundaries[i] = acc;
    }
    boundaries.back() = static_cast<double>(plan.picks());
    std::vector<std::size_t> hits =
        select_from_boundaries(boundaries, plan.picks(), s);
    for (std::size_t& h : hits) h = plan.k + perm[h];
    std::sort(hits.begin(), hits.end());
    sample = assemble_sample(plan, std::move(hits), s);
  }
  return {compose_from_diag(f, sample.diag_values), std::move(sample)};
}

std::pair<DenseMatrix, LowRankSample> sample_low_rank(const DenseMatrix& p,
                                                      std::size_t r,
                                                      UniformRng& rng,
                                                      const SampleOptions& opts) {
  if (r < 1) throw std::invalid_argument("rank budget must be >= 1");
  SvdFactors f = svd(p);
  if (r >= f.numerical_rank) {
    LowRankSample sample;
    sample.diag_values.assign(
        f.singular_values.begin(),
        f.singular_values.begin() + f.numerical_rank);
    return {p, std::move(sample)};  // exact, not a reconstruction
  }
  return sample_low_rank(f, r, rng, opts);
}

}  // namespace lowrank
