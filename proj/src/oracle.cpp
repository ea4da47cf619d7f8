#include "lowrank/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <stdexcept>

#include "lowrank/svd.hpp"

namespace lowrank {

namespace {

constexpr std::size_t kChunk = 1024;

// Chunks are processed in any order but merged by index, so results do not
// depend on the thread count.
template <class ChunkFn>
void run_chunks(std::size_t nchunks, int threads, ChunkFn fn) {
  if (threads <= 1 || nchunks <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) fn(c);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), nchunks);
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t c = w; c < nchunks; c += workers) fn(c);
    }));
  }
  for (auto& f : futures) f.get();
}

struct Welford {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const Welford& other) {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(other.n);
    const double delta = other.mean - mean;
    mean += delta * nb / (na + nb);
    m2 += other.m2 + delta * delta * na * nb / (na + nb);
    n += other.n;
  }
};

struct ComplexWelford {
  std::size_t n = 0;
  cplx mean{};
  double m2 = 0.0;  // sum of squared moduli of deviations

  void add(cplx x) {
    ++n;
    const cplx delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += (std::conj(delta) * (x - mean)).real();
  }

  void merge(const ComplexWelford& other) {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(other.n);
    const cplx delta = other.mean - mean;
    mean += delta * (nb / (na + nb));
    m2 += other.m2 + std::norm(delta) * na * nb / (na + nb);
    n += other.n;
  }
};

void validate_instance(const std::vector<double>& d, std::size_t r) {
  if (r < 1) throw std::invalid_argument("rank budget must be >= 1");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0))
      throw std::invalid_argument("singular values must be positive");
    if (i > 0 && d[i] > d[i - 1])
      throw std::invalid_argument("singular values must be descending");
  }
}

}  // namespace

OutcomeTable enumerate_outcomes(const SamplingPlan& plan) {
  OutcomeTable table;
  if (!plan.has_light()) {
    table.breakpoints = {0.0};
    table.outcomes.push_back({{}, 1.0});
    return table;
  }
  if (plan.light_count() > 24)
    throw std::invalid_argument("enumerate_outcomes: too many light components");

  // The index set changes only where s crosses the fractional part of a
  // segment boundary.
  std::vector<double> cuts{0.0};
  for (double b : plan.segment_boundaries) {
    const double frac = b - std::floor(b);
    if (frac > 0.0 && frac < 1.0) cuts.push_back(frac);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> edges;
  for (double x : cuts) {
    if (edges.empty() || x - edges.back() > 1e-12) edges.push_back(x);
  }
  table.breakpoints = edges;
  edges.push_back(1.0);

  std::map<std::vector<std::size_t>, double> mass;
  for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
    const double width = edges[j + 1] - edges[j];
    if (width <= 0.0) continue;
    const double mid = 0.5 * (edges[j] + edges[j + 1]);
    mass[systematic_select(plan, mid)] += width;
  }
  for (auto& [iset, prob] : mass) table.outcomes.push_back({iset, prob});
  return table;
}

double expected_distortion_closed_form(const std::vector<double>& d,
                                       std::size_t r) {
  validate_instance(d, r);
  const std::size_t n = d.size();
  if (r >= n) return 0.0;
  const std::size_t k = heavy_split(d, r);
  double tail = 0.0;
  double tail_sq = 0.0;
  for (std::size_t i = n; i-- > k;) {
    tail += d[i];
    tail_sq += d[i] * d[i];
  }
  const double c = tail / static_cast<double>(r - k);
  return c * tail - tail_sq;  // (r-k) c^2 - sum_{i>k} d_i^2
}

double lower_bound(const std::vector<double>& d, std::size_t r) {
  validate_instance(d, r);
  const std::size_t n = d.size();
  if (r >= n) return 0.0;
  const std::size_t k = heavy_split(d, r);
  double tail = 0.0;
  for (std::size_t i = n; i-- > k;) tail += d[i];
  const double c = tail / static_cast<double>(r - k);
  if (k >= 1 && d[k - 1] < c)
    throw std::logic_error("lower_bound: heavy values must dominate the fill");

  // shifted target diag(d_1..d_k, c, ..., c)
  std::vector<double> shifted(n);
  for (std::size_t i = 0; i < n; ++i) shifted[i] = i < k ? d[i] : c;
  double best_rank_r_err = 0.0;
  for (std::size_t i = r; i < n; ++i) best_rank_r_err += shifted[i] * shifted[i];
  double b_sq = 0.0;
  for (std::size_t i = k; i < n; ++i) b_sq += (d[i] - c) * (d[i] - c);
  return best_rank_r_err - b_sq;
}

double truncation_baseline(const std::vector<double>& d, std::size_t r) {
  double s = 0.0;
  for (std::size_t i = r; i < d.size(); ++i) s += d[i] * d[i];
  return s;
}

UnbiasednessReport empirical_unbiasedness(const DenseMatrix& p, std::size_t r,
                                          std::size_t samples,
                                          std::uint64_t seed, int threads) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  UnbiasednessReport report;
  report.samples = samples;
  report.deviation.assign(p.size(), 0.0);
  report.std_error.assign(p.size(), 0.0);

  const SvdFactors f = svd(p);
  if (r >= f.numerical_rank) return report;  // every sample equals p

  const std::size_t nchunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::vector<ComplexWelford>> partial(
      nchunks, std::vector<ComplexWelford>(p.size()));
  run_chunks(nchunks, threads, [&](std::size_t c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(lo + kChunk, samples);
    auto& stats = partial[c];
    for (std::size_t i = lo; i < hi; ++i) {
      UniformRng rng = UniformRng::for_stream(seed, i);
      const auto [q, sample] = sample_low_rank(f, r, rng);
      for (std::size_t e = 0; e < q.size(); ++e)
        stats[e].add(q.entries()[e]);
    }
  });

  std::vector<ComplexWelford> total(p.size());
  for (const auto& stats : partial)
    for (std::size_t e = 0; e < total.size(); ++e) total[e].merge(stats[e]);

  for (std::size_t e = 0; e < total.size(); ++e) {
    const double dev = std::abs(total[e].mean - p.entries()[e]);
    const double var =
        samples > 1 ? total[e].m2 / static_cast<double>(samples - 1) : 0.0;
    const double se = std::sqrt(var / static_cast<double>(samples));
    report.deviation[e] = dev;
    report.std_error[e] = se;
    report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
    if (dev > 4.0 * se + 1e-12) ++report.exceedances;
  }
  return report;
}

DistortionEstimate empirical_distortion(const DenseMatrix& p, std::size_t r,
                                        std::size_t samples, std::uint64_t seed,
                                        int threads) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  DistortionEstimate est;
  est.samples = samples;

  const SvdFactors f = svd(p);
  if (r >= f.numerical_rank) return est;  // exact: distortion 0

  const std::size_t nchunks = (samples + kChunk - 1) / kChunk;
  std::vector<Welford> partial(nchunks);
  run_chunks(nchunks, threads, [&](std::size_t c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(lo + kChunk, samples);
    for (std::size_t i = lo; i < hi; ++i) {
      UniformRng rng = UniformRng::for_stream(seed, i);
      const auto [q, sample] = sample_low_rank(f, r, rng);
      partial[c].add(frobenius_dist_sq(p, q));
    }
  });

  Welford total;
  for (const Welford& w : partial) total.merge(w);
  est.mean = total.mean;
  const double var =
      samples > 1 ? total.m2 / static_cast<double>(samples - 1) : 0.0;
  est.std_error = std::sqrt(var / static_cast<double>(samples));
  return est;
}

OptimalityReport verify_optimality(const std::vector<double>& d,
                                   std::size_t r) {
  OptimalityReport report;
  report.expected_distortion = expected_distortion_closed_form(d, r);
  report.lower_bound = lowrank::lower_bound(d, r);
  report.truncation_baseline = lowrank::truncation_baseline(d, r);

  const double scale = std::max(1.0, std::abs(report.expected_distortion));
  if (std::abs(report.expected_distortion - report.lower_bound) > 1e-10 * scale)
    throw std::logic_error("optimality check failed: bound mismatch");
  if (report.expected_distortion < report.truncation_baseline - 1e-10 * scale ||
      report.lower_bound < report.truncation_baseline - 1e-10 * scale)
    throw std::logic_error(
        "optimality check failed: below the truncation baseline");
  return report;
}

}  // namespace lowrank
