#include "lowrank/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lowrank {

namespace {

// Column-major working storage so the pairwise column sweeps are contiguous.
struct ColumnStore {
  std::size_t n = 0;  // column length
  std::size_t m = 0;  // column count
  std::vector<cplx> data;

  ColumnStore(std::size_t rows, std::size_t cols)
      : n(rows), m(cols), data(rows * cols) {}

  cplx* col(std::size_t j) { return data.data() + j * n; }
  const cplx* col(std::size_t j) const { return data.data() + j * n; }
};

cplx column_dot(const ColumnStore& g, std::size_t p, std::size_t q) {
  const cplx* a = g.col(p);
  const cplx* b = g.col(q);
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

double column_norm_sq(const ColumnStore& g, std::size_t p) {
  const cplx* a = g.col(p);
  double s = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) s += std::norm(a[i]);
  return s;
}

// Right-multiply columns (p, q) of g by the unitary 2x2
//   [ cs            sn           ]
//   [ -sn e^{-iphi} cs e^{-iphi} ]
void rotate_columns(ColumnStore& g, std::size_t p, std::size_t q, double cs,
                    double sn, cplx phase_conj) {
  cplx* a = g.col(p);
  cplx* b = g.col(q);
  for (std::size_t i = 0; i < g.n; ++i) {
    const cplx gp = a[i];
    const cplx gq = phase_conj * b[i];
    a[i] = cs * gp - sn * gq;
    b[i] = sn * gp + cs * gq;
  }
}

// Orthogonalize columns of g in place, accumulating rotations into v.
// Returns false if the sweep cap is hit. Column norms are cached per sweep
// and updated through the rotation identities.
bool jacobi_orthogonalize(ColumnStore& g, ColumnStore& v,
                          const SvdOptions& opts) {
  const std::size_t m = g.m;
  std::vector<double> norms(m);
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    for (std::size_t j = 0; j < m; ++j) norms[j] = column_norm_sq(g, j);
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        const double alpha = norms[p];
        const double beta = norms[q];
        if (alpha == 0.0 || beta == 0.0) continue;
        const cplx gamma = column_dot(g, p, q);
        const double gabs = std::abs(gamma);
        if (gabs <= opts.sweep_tol * std::sqrt(alpha * beta)) continue;
        const cplx phase_conj = std::conj(gamma) / gabs;
        const double tau = (beta - alpha) / (2.0 * gabs);
        const double t =
            std::copysign(1.0, tau) / (std::abs(tau) + std::hypot(1.0, tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        rotate_columns(g, p, q, cs, sn, phase_conj);
        rotate_columns(v, p, q, cs, sn, phase_conj);
        const double cross = 2.0 * cs * sn * gabs;
        norms[p] = cs * cs * alpha + sn * sn * beta - cross;
        norms[q] = sn * sn * alpha + cs * cs * beta + cross;
        rotated = true;
      }
    }
    if (!rotated) return true;
  }
  return false;
}

// Replace exactly-zero columns of u with unit vectors orthogonal to all
// other columns (happens only for rank-deficient input).
void fill_null_columns(DenseMatrix& u, const std::vector<double>& norms) {
  const std::size_t n = u.rows();
  const std::size_t t = u.cols();
  for (std::size_t j = 0; j < t; ++j) {
    if (norms[j] != 0.0) continue;
    for (std::size_t e = 0; e < n; ++e) {
      // candidate basis vector e, projected out against all columns
      std::vector<cplx> cand(n, cplx{});
      cand[e] = 1.0;
      for (std::size_t l = 0; l < t; ++l) {
        if (l == j) continue;
        cplx proj{};
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(u(i, l)) * cand[i];
        for (std::size_t i = 0; i < n; ++i) cand[i] -= proj * u(i, l);
      }
      double nrm = 0.0;
      for (const cplx& z : cand) nrm += std::norm(z);
      nrm = std::sqrt(nrm);
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < n; ++i) u(i, j) = cand[i] / nrm;
        break;
      }
    }
  }
}

void apply_phase_convention(SvdFactors& f) {
  for (std::size_t j = 0; j < f.u.cols(); ++j) {
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < f.u.rows(); ++i) {
      const double a = std::abs(f.u(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (best <= 0.0) continue;
    const cplx alpha = std::conj(f.u(imax, j)) / best;
    for (std::size_t i = 0; i < f.u.rows(); ++i) f.u(i, j) *= alpha;
    for (std::size_t i = 0; i < f.v.rows(); ++i) f.v(i, j) *= alpha;
    f.u(imax, j) = cplx{best, 0.0};  // kill residual imaginary dust
  }
}

SvdFactors svd_tall(const DenseMatrix& p, const SvdOptions& opts) {
  const std::size_t n = p.rows();
  const std::size_t m = p.cols();  // m <= n here
  ColumnStore g(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) g.col(j)[i] = p(i, j);
  ColumnStore v(m, m);
  for (std::size_t j = 0; j < m; ++j) v.col(j)[j] = 1.0;
  if (!jacobi_orthogonalize(g, v, opts))
    throw std::runtime_error("svd: Jacobi sweeps did not converge");

  std::vector<double> norms(m);
  for (std::size_t j = 0; j < m; ++j)
    norms[j] = std::sqrt(column_norm_sq(g, j));

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return norms[a] > norms[b];
  });

  SvdFactors f;
  f.u = DenseMatrix(n, m);
  f.v = DenseMatrix(m, m);
  f.singular_values.resize(m);
  std::vector<double> sorted_norms(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t src = order[j];
    f.singular_values[j] = norms[src];
    sorted_norms[j] = norms[src];
    if (norms[src] > 0.0) {
      for (std::size_t i = 0; i < n; ++i)
        f.u(i, j) = g.col(src)[i] / norms[src];
    }
    for (std::size_t i = 0; i < m; ++i) f.v(i, j) = v.col(src)[i];
  }
  fill_null_columns(f.u, sorted_norms);
  return f;
}

}  // namespace

SvdFactors svd(const DenseMatrix& p, const SvdOptions& opts) {
  if (p.rows() == 0 || p.cols() == 0)
    throw std::invalid_argument("svd: empty matrix");
  if (!p.all_finite())
    throw std::invalid_argument("svd: input has non-finite entries");

  SvdFactors f;
  if (p.cols() <= p.rows()) {
    f = svd_tall(p, opts);
  } else {
    SvdFactors ft = svd_tall(adjoint(p), opts);
    f.u = std::move(ft.v);
    f.v = std::move(ft.u);
    f.singular_values = std::move(ft.singular_values);
  }
  apply_phase_convention(f);

  const double d1 = f.singular_values.empty() ? 0.0 : f.singular_values[0];
  f.numerical_rank = 0;
  for (double d : f.singular_values)
    if (d > opts.rank_tol * d1) ++f.numerical_rank;
  return f;
}

SvdFactors svd(const DenseMatrix& p, double rank_tol) {
  SvdOptions opts;
  opts.rank_tol = rank_tol;
  return svd(p, opts);
}

DenseMatrix reconstruct(const SvdFactors& f) {
  const std::size_t n = f.u.rows();
  const std::size_t m = f.v.rows();
  const std::size_t t = f.singular_values.size();
  DenseMatrix r(n, m);
  for (std::size_t l = 0; l < t; ++l) {
    const double d = f.singular_values[l];
    if (d == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx ud = f.u(i, l) * d;
      for (std::size_t j = 0; j < m; ++j) r(i, j) += ud * std::conj(f.v(j, l));
    }
  }
  return r;
}

DenseMatrix truncate_rank(const SvdFactors& f, std::size_t r) {
  SvdFactors g = f;
  for (std::size_t i = r; i < g.singular_values.size(); ++i)
    g.singular_values[i] = 0.0;
  return reconstruct(g);
}

}  // namespace lowrank
