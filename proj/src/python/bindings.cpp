#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lowrank/oracle.hpp"
#include "lowrank/rng.hpp"
#include "lowrank/sampler.hpp"
#include "lowrank/svd.hpp"

namespace py = pybind11;
using namespace lowrank;

namespace {

using ComplexArray =
    py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

DenseMatrix to_matrix(const ComplexArray& arr) {
  if (arr.ndim() != 2) throw py::value_error("expected a 2-d array");
  DenseMatrix m(arr.shape(0), arr.shape(1));
  auto view = arr.unchecked<2>();
  for (py::ssize_t i = 0; i < arr.shape(0); ++i)
    for (py::ssize_t j = 0; j < arr.shape(1); ++j) m(i, j) = view(i, j);
  return m;
}

py::array_t<std::complex<double>> to_array(const DenseMatrix& m) {
  py::array_t<std::complex<double>> arr({m.rows(), m.cols()});
  auto view = arr.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) view(i, j) = m(i, j);
  return arr;
}

}  // namespace

PYBIND11_MODULE(_lowrank, mod) {
  mod.doc() = "Unbiased minimum-distortion low-rank matrix sampling";

  mod.def(
      "svd",
      [](const ComplexArray& p, double rank_tol) {
        const SvdFactors f = svd(to_matrix(p), rank_tol);
        return py::make_tuple(to_array(f.u), f.singular_values, to_array(f.v),
                              f.numerical_rank);
      },
      py::arg("p"), py::arg("rank_tol") = 1e-12,
      "Thin SVD (u, singular_values, v, numerical_rank) with p = u @ diag @ "
      "v.conj().T");

  mod.def(
      "truncate_rank",
      [](const ComplexArray& p, std::size_t r) {
        return to_array(truncate_rank(svd(to_matrix(p)), r));
      },
      py::arg("p"), py::arg("r"), "Best rank-r approximation (truncated SVD)");

  mod.def(
      "sample_low_rank",
      [](const ComplexArray& p, std::size_t r, std::uint64_t seed,
         std::uint64_t stream, bool permute_segments) {
        UniformRng rng = UniformRng::for_stream(seed, stream);
        SampleOptions opts;
        opts.permute_segments = permute_segments;
        auto [q, sample] = sample_low_rank(to_matrix(p), r, rng, opts);
        return py::make_tuple(to_array(q), sample.index_set,
                              sample.diag_values, sample.uniform_draw);
      },
      py::arg("p"), py::arg("r"), py::arg("seed"), py::arg("stream") = 0,
      py::arg("permute_segments") = false,
      "One draw: (q, index_set, diag_values, uniform_draw); index_set is "
      "0-based");

  mod.def("heavy_split", &heavy_split, py::arg("d"), py::arg("r"));

  mod.def(
      "build_plan",
      [](const std::vector<double>& d, std::size_t r) {
        const SamplingPlan plan = build_plan(d, r);
        py::dict out;
        out["k"] = plan.k;
        out["c"] = plan.has_light() ? py::cast(plan.c) : py::none();
        out["scale"] = plan.scale;
        out["inclusion_prob"] = plan.inclusion_prob;
        out["segment_boundaries"] = plan.segment_boundaries;
        return out;
      },
      py::arg("d"), py::arg("r"));

  mod.def("expected_distortion", &expected_distortion_closed_form,
          py::arg("d"), py::arg("r"));
  mod.def("lower_bound", &lower_bound, py::arg("d"), py::arg("r"));
  mod.def("truncation_baseline", &truncation_baseline, py::arg("d"),
          py::arg("r"));

  mod.def(
      "enumerate_outcomes",
      [](const std::vector<double>& d, std::size_t r) {
        SamplingPlan plan;
        if (r >= d.size()) {
          plan.d = d;
          plan.r = r;
          plan.k = d.size();
        } else {
          plan = build_plan(d, r);
        }
        std::vector<std::pair<std::vector<std::size_t>, double>> rows;
        for (const Outcome& o : enumerate_outcomes(plan).outcomes)
          rows.emplace_back(o.index_set, o.probability);
        return rows;
      },
      py::arg("d"), py::arg("r"),
      "Exact outcome distribution as (index_set, probability) pairs");

  mod.def(
      "empirical_distortion",
      [](const ComplexArray& p, std::size_t r, std::size_t samples,
         std::uint64_t seed, int threads) {
        const DistortionEstimate est =
            empirical_distortion(to_matrix(p), r, samples, seed, threads);
        return py::make_tuple(est.mean, est.std_error);
      },
      py::arg("p"), py::arg("r"), py::arg("samples"), py::arg("seed"),
      py::arg("threads") = 1);

  mod.def(
      "empirical_unbiasedness",
      [](const ComplexArray& p, std::size_t r, std::size_t samples,
         std::uint64_t seed, int threads) {
        const UnbiasednessReport rep =
            empirical_unbiasedness(to_matrix(p), r, samples, seed, threads);
        py::dict out;
        out["max_abs_deviation"] = rep.max_abs_deviation;
        out["deviation"] = rep.deviation;
        out["std_error"] = rep.std_error;
        out["exceedances"] = rep.exceedances;
        out["samples"] = rep.samples;
        return out;
      },
      py::arg("p"), py::arg("r"), py::arg("samples"), py::arg("seed"),
      py::arg("threads") = 1);

  mod.def(
      "verify_optimality",
      [](const std::vector<double>& d, std::size_t r) {
        const OptimalityReport rep = verify_optimality(d, r);
        py::dict out;
        out["expected_distortion"] = rep.expected_distortion;
        out["lower_bound"] = rep.lower_bound;
        out["truncation_baseline"] = rep.truncation_baseline;
        return out;
      },
      py::arg("d"), py::arg("r"));
}
