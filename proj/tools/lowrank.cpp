#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lowrank/matrix_io.hpp"
#include "lowrank/oracle.hpp"
#include "lowrank/rng.hpp"
#include "lowrank/sampler.hpp"
#include "lowrank/selftest.hpp"
#include "lowrank/svd.hpp"

namespace fs = std::filesystem;
using namespace lowrank;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerification = 3;

// Minimal JSON emitter so numbers are always %.17g.
struct JsonWriter {
  std::ostream& out;
  int indent = 0;
  bool first = true;

  void open(char ch) {
    out << ch << '\n';
    ++indent;
    first = true;
  }
  void close(char ch) {
    out << '\n';
    --indent;
    pad();
    out << ch;
    first = false;
  }
  void pad() {
    for (int i = 0; i < indent; ++i) out << "  ";
  }
  void key(const std::string& k) {
    if (!first) out << ",\n";
    first = false;
    pad();
    out << '"' << k << "\": ";
  }
  void value(double x) { out << format_double(x); }
  void value(const std::string& s) { out << '"' << s << '"'; }
  void value(std::uint64_t n) { out << n; }
  void value(bool b) { out << (b ? "true" : "false"); }
};

std::string sample_extension(const MatrixFile& mf) {
  return mf.format == MatrixFormat::Pgm ? ".pgm" : ".csv";
}

std::vector<double> active_singular_values(const SvdFactors& f) {
  return {f.singular_values.begin(),
          f.singular_values.begin() + f.numerical_rank};
}

struct PlanSummary {
  std::size_t k = 0;
  std::optional<double> c;
};

PlanSummary summarize_plan(const std::vector<double>& d, std::size_t r) {
  PlanSummary s;
  if (d.empty() || r >= d.size()) {
    s.k = std::min(r, d.size());
    return s;
  }
  const SamplingPlan plan = build_plan(d, r);
  s.k = plan.k;
  if (plan.has_light()) s.c = plan.c;
  return s;
}

int cmd_approx(const std::string& input, std::size_t rank, std::size_t samples,
               std::uint64_t seed, bool permute, bool emit_samples,
               const std::string& out_dir) {
  const MatrixFile mf = read_matrix_file(input);
  const DenseMatrix& p = mf.matrix;
  fs::create_directories(out_dir);

  const SvdFactors f = svd(p);
  const std::vector<double> d = active_singular_values(f);
  const PlanSummary plan = summarize_plan(d, rank);
  const bool exact = rank >= f.numerical_rank;

  SampleOptions opts;
  opts.permute_segments = permute;

  DenseMatrix sum(p.rows(), p.cols());
  std::vector<double> per_sample_dist(samples);
  const std::string ext = sample_extension(mf);
  for (std::size_t i = 0; i < samples; ++i) {
    UniformRng rng = UniformRng::for_stream(seed, i);
    DenseMatrix q = exact ? p : sample_low_rank(f, rank, rng, opts).first;
    per_sample_dist[i] = frobenius_dist_sq(p, q);
    sum = add(sum, q);
    if (emit_samples) {
      char name[32];
      std::snprintf(name, sizeof(name), "sample_%05zu", i);
      write_matrix_file((fs::path(out_dir) / (name + ext)).string(), mf, q);
    }
  }
  const DenseMatrix average = scale(sum, 1.0 / static_cast<double>(samples));
  write_matrix_file((fs::path(out_dir) / ("average" + ext)).string(), mf,
                    average);

  std::ofstream meta((fs::path(out_dir) / "metadata.json").string(),
                     std::ios::binary);
  if (!meta) throw IoError("cannot write metadata.json");
  JsonWriter w{meta};
  w.open('{');
  w.key("schema"); w.value(std::size_t{1});
  w.key("input"); w.value(input);
  w.key("rank"); w.value(rank);
  w.key("samples"); w.value(samples);
  w.key("seed"); w.value(seed);
  w.key("permute_segments"); w.value(permute);
  w.key("numerical_rank"); w.value(f.numerical_rank);
  w.key("heavy_count"); w.value(plan.k);
  w.key("fill_value");
  if (plan.c) w.value(*plan.c); else meta << "null";
  w.key("average_distortion"); w.value(frobenius_dist_sq(p, average));
  w.key("per_sample_distortion");
  w.open('[');
  for (double x : per_sample_dist) {
    if (!w.first) meta << ",\n";
    w.first = false;
    w.pad();
    w.value(x);
  }
  w.close(']');
  w.close('}');
  meta << '\n';
  return kExitOk;
}

int cmd_stats(const std::string& input, std::size_t rank, std::size_t samples,
              std::uint64_t seed, bool json, int threads) {
  const MatrixFile mf = read_matrix_file(input);
  const SvdFactors f = svd(mf.matrix);
  const std::vector<double> d = active_singular_values(f);

  const bool exact = rank >= f.numerical_rank;
  const double expected =
      exact ? 0.0 : expected_distortion_closed_form(d, rank);
  const double bound = exact ? 0.0 : lower_bound(d, rank);
  const double baseline = truncation_baseline(d, rank);
  const DistortionEstimate est =
      empirical_distortion(mf.matrix, rank, samples, seed, threads);
  const double radius = 4.0 * est.std_error;

  const bool matched =
      std::abs(expected - bound) <= 1e-10 * std::max(1.0, std::abs(expected));

  if (json) {
    JsonWriter w{std::cout};
    w.open('{');
    w.key("schema"); w.value(std::size_t{1});
    w.key("rank"); w.value(rank);
    w.key("numerical_rank"); w.value(f.numerical_rank);
    w.key("expected_distortion"); w.value(expected);
    w.key("lower_bound"); w.value(bound);
    w.key("truncation_baseline"); w.value(baseline);
    w.key("empirical_mean_distortion"); w.value(est.mean);
    w.key("confidence_radius"); w.value(radius);
    w.key("samples"); w.value(est.samples);
    w.key("bound_matched"); w.value(matched);
    w.close('}');
    std::cout << '\n';
  } else {
    std::cout << "expected distortion     " << format_double(expected) << '\n'
              << "lower bound             " << format_double(bound) << '\n'
              << "truncation baseline     " << format_double(baseline) << '\n'
              << "empirical distortion    " << format_double(est.mean)
              << "  (+/- " << format_double(radius) << ", " << est.samples
              << " samples)\n"
              << "bound matched           " << (matched ? "yes" : "NO")
              << '\n';
  }
  return matched ? kExitOk : kExitVerification;
}

int cmd_oracle(const std::string& input, std::size_t rank, bool json) {
  const MatrixFile mf = read_matrix_file(input);
  const SvdFactors f = svd(mf.matrix);
  const std::vector<double> d = active_singular_values(f);

  SamplingPlan plan;
  if (rank >= d.size()) {
    plan.d = d;
    plan.r = rank;
    plan.k = d.size();
  } else {
    plan = build_plan(d, rank);
    if (plan.light_count() > 24) {
      std::cerr << "oracle: too many light components ("
                << plan.light_count() << " > 24)\n";
      return kExitUsage;
    }
  }

  const OutcomeTable table = enumerate_outcomes(plan);
  const double closed =
      rank >= d.size() ? 0.0 : expected_distortion_closed_form(d, rank);

  if (json) {
    JsonWriter w{std::cout};
    w.open('{');
    w.key("schema"); w.value(std::size_t{1});
    w.key("rank"); w.value(rank);
    w.key("heavy_count"); w.value(plan.k);
    w.key("expected_distortion"); w.value(closed);
    w.key("outcomes");
    w.open('[');
    bool first_row = true;
    for (const Outcome& o : table.outcomes) {
      if (!first_row) std::cout << ",\n";
      first_row = false;
      w.first = true;
      w.pad();
      w.open('{');
      w.key("indices");
      std::cout << '[';
      for (std::size_t i = 0; i < o.index_set.size(); ++i)
        std::cout << (i ? "," : "") << o.index_set[i] + 1;  // 1-based
      std::cout << ']';
      w.key("probability"); w.value(o.probability);
      const LowRankSample s = assemble_sample(plan, o.index_set, 0.0);
      double err = 0.0;
      for (std::size_t i = 0; i < plan.d.size(); ++i) {
        const double diff = s.diag_values[i] - plan.d[i];
        err += diff * diff;
      }
      w.key("distortion"); w.value(err);
      w.close('}');
      w.first = false;
    }
    w.close(']');
    w.close('}');
    std::cout << '\n';
  } else {
    std::cout << "heavy count " << plan.k << ", outcomes "
              << table.outcomes.size() << '\n';
    for (const Outcome& o : table.outcomes) {
      std::cout << "  {";
      for (std::size_t i = 0; i < o.index_set.size(); ++i)
        std::cout << (i ? "," : "") << o.index_set[i] + 1;
      const LowRankSample s = assemble_sample(plan, o.index_set, 0.0);
      double err = 0.0;
      for (std::size_t i = 0; i < plan.d.size(); ++i) {
        const double diff = s.diag_values[i] - plan.d[i];
        err += diff * diff;
      }
      std::cout << "}  p=" << format_double(o.probability)
                << "  distortion=" << format_double(err) << '\n';
    }
    std::cout << "expected distortion " << format_double(closed) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unbiased low-rank matrix approximation"};
  app.require_subcommand(1);

  std::string input;
  std::string out_dir;
  std::size_t rank = 1;
  std::size_t samples = 1;
  std::uint64_t seed = 0;
  bool permute = false;
  bool emit_samples = false;
  bool json = false;
  bool quick = false;
  int threads = 1;

  auto* approx = app.add_subcommand("approx", "Draw samples and their average");
  approx->add_option("--input", input)->required();
  approx->add_option("--rank", rank)->required()->check(CLI::PositiveNumber);
  approx->add_option("--samples", samples)->check(CLI::PositiveNumber);
  approx->add_option("--seed", seed);
  approx->add_flag("--permute-segments", permute);
  approx->add_flag("--emit-samples", emit_samples);
  approx->add_option("--out", out_dir)->required();

  auto* stats = app.add_subcommand("stats", "Distortion report with bound check");
  stats->add_option("--input", input)->required();
  stats->add_option("--rank", rank)->required()->check(CLI::PositiveNumber);
  stats->add_option("--samples", samples)->check(CLI::PositiveNumber);
  stats->add_option("--seed", seed);
  stats->add_option("--threads", threads)->check(CLI::PositiveNumber);
  stats->add_flag("--json", json);

  auto* oracle = app.add_subcommand("oracle", "Exact outcome table");
  oracle->add_option("--input", input)->required();
  oracle->add_option("--rank", rank)->required()->check(CLI::PositiveNumber);
  oracle->add_flag("--json", json);

  auto* selftest = app.add_subcommand("selftest", "Seeded verification sweeps");
  selftest->add_flag("--quick", quick);
  std::uint64_t selftest_seed = 12345;
  selftest->add_option("--seed", selftest_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (approx->parsed())
      return cmd_approx(input, rank, samples, seed, permute, emit_samples,
                        out_dir);
    if (stats->parsed())
      return cmd_stats(input, rank, samples, seed, json, threads);
    if (oracle->parsed()) return cmd_oracle(input, rank, json);
    if (selftest->parsed()) {
      SelftestOptions opts;
      opts.quick = quick;
      opts.seed = selftest_seed;
      return run_selftest(opts, std::cout) ? kExitOk : kExitVerification;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerification;
  }
  return kExitUsage;
}
