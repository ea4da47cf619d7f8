#include "lowrank/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "lowrank/oracle.hpp"
#include "lowrank/rng.hpp"
#include "lowrank/sampler.hpp"

namespace lowrank {

namespace {

std::vector<double> random_descending(UniformRng& rng, std::size_t max_n) {
  const std::size_t n = 1 + rng.next_below(max_n);
  std::vector<double> d(n);
  for (double& x : d) x = 0.1 + 9.9 * rng.next();
  std::sort(d.rbegin(), d.rend());
  return d;
}

double outcome_distortion(const SamplingPlan& plan,
                          const std::vector<std::size_t>& index_set) {
  const LowRankSample s = assemble_sample(plan, index_set, 0.0);
  double err = 0.0;
  for (std::size_t i = 0; i < plan.d.size(); ++i) {
    const double diff = s.diag_values[i] - plan.d[i];
    err += diff * diff;
  }
  return err;
}

bool golden_example(std::string& msg) {
  const std::vector<double> d{4.0, 1.0};
  const SamplingPlan plan = build_plan(d, 1);
  if (plan.k != 0 || std::abs(plan.c - 5.0) > 1e-15 ||
      std::abs(plan.inclusion_prob[0] - 0.8) > 1e-15 ||
      std::abs(plan.inclusion_prob[1] - 0.2) > 1e-15) {
    msg = "plan for d=(4,1), r=1 is off";
    return false;
  }
  const OutcomeTable table = enumerate_outcomes(plan);
  if (table.outcomes.size() != 2 ||
      std::abs(table.outcomes[0].probability - 0.8) > 1e-12 ||
      std::abs(table.outcomes[1].probability - 0.2) > 1e-12) {
    msg = "outcome table for d=(4,1), r=1 is off";
    return false;
  }
  if (std::abs(expected_distortion_closed_form(d, 1) - 8.0) > 1e-12 ||
      std::abs(lower_bound(d, 1) - 8.0) > 1e-12) {
    msg = "closed form or bound is not 8";
    return false;
  }
  return true;
}

bool bound_match_sweep(UniformRng& rng, std::size_t instances,
                       std::string& msg) {
  for (std::size_t t = 0; t < instances; ++t) {
    const std::vector<double> d = random_descending(rng, 12);
    for (std::size_t r = 1; r <= d.size(); ++r) {
      try {
        verify_optimality(d, r);
      } catch (const std::exception& e) {
        msg = "instance " + std::to_string(t) + ", r=" + std::to_string(r) +
              ": " + e.what();
        return false;
      }
    }
  }
  return true;
}

bool oracle_equivalence(UniformRng& rng, std::size_t instances,
                        std::string& msg) {
  std::size_t done = 0;
  while (done < instances) {
    const std::vector<double> d = random_descending(rng, 12);
    const std::size_t r = 1 + rng.next_below(d.size());
    const SamplingPlan plan = build_plan(d, r);
    if (!plan.has_light() || plan.light_count() > 10) continue;
    ++done;

    const OutcomeTable table = enumerate_outcomes(plan);
    double mass = 0.0;
    double expectation = 0.0;
    std::vector<double> marginal(plan.light_count(), 0.0);
    for (const Outcome& o : table.outcomes) {
      if (o.index_set.size() != plan.picks()) {
        msg = "outcome with wrong cardinality";
        return false;
      }
      mass += o.probability;
      expectation += o.probability * outcome_distortion(plan, o.index_set);
      for (std::size_t idx : o.index_set)
        marginal[idx - plan.k] += o.probability;
    }
    if (std::abs(mass - 1.0) > 1e-12) {
      msg = "outcome masses do not sum to 1";
      return false;
    }
    const double closed = expected_distortion_closed_form(d, r);
    if (std::abs(expectation - closed) > 1e-10 * std::max(1.0, closed)) {
      msg = "enumeration disagrees with the closed form";
      return false;
    }
    for (std::size_t i = 0; i < marginal.size(); ++i) {
      if (std::abs(marginal[i] - plan.inclusion_prob[i]) > 1e-12) {
        msg = "marginal inclusion probability is off";
        return false;
      }
    }
  }
  return true;
}

bool per_realization_identity(UniformRng& rng, std::size_t instances,
                              std::string& msg) {
  std::size_t done = 0;
  while (done < instances) {
    const std::vector<double> d = random_descending(rng, 12);
    const std::size_t r = 1 + rng.next_below(d.size());
    const SamplingPlan plan = build_plan(d, r);
    if (!plan.has_light() || plan.light_count() > 10) continue;
    ++done;

    // shifted target diag(d_1..d_k, c, ..., c); the shifted error must be
    // (N - r) c^2 for every realization
    const std::size_t n = d.size();
    const double expect = static_cast<double>(n - r) * plan.c * plan.c;
    const OutcomeTable table = enumerate_outcomes(plan);
    for (const Outcome& o : table.outcomes) {
      const LowRankSample s = assemble_sample(plan, o.index_set, 0.0);
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double target = i < plan.k ? d[i] : plan.c;
        const double diff = s.diag_values[i] - target;
        err += diff * diff;
      }
      if (std::abs(err - expect) > 1e-10 * std::max(1.0, expect)) {
        msg = "shifted per-realization error is not constant";
        return false;
      }
    }
  }
  return true;
}

}  // namespace

bool run_selftest(const SelftestOptions& opts, std::ostream& out) {
  const std::size_t sweep = opts.quick ? 100 : 1000;
  const std::size_t ident = opts.quick ? 50 : 200;
  UniformRng rng(opts.seed);

  struct Suite {
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const Suite suites[] = {
      {"golden-example", [&](std::string& m) { return golden_example(m); }},
      {"bound-match-sweep",
       [&](std::string& m) { return bound_match_sweep(rng, sweep, m); }},
      {"oracle-equivalence",
       [&](std::string& m) { return oracle_equivalence(rng, sweep, m); }},
      {"per-realization-identity",
       [&](std::string& m) { return per_realization_identity(rng, ident, m); }},
  };

  bool ok = true;
  for (const Suite& suite : suites) {
    std::string msg;
    const bool pass = suite.run(msg);
    out << (pass ? "PASS" : "FAIL") << "  " << suite.name;
    if (!pass) out << "  (" << msg << ")";
    out << '\n';
    ok = ok && pass;
  }
  return ok;
}

}  // namespace lowrank
