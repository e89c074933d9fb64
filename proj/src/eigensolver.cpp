#include "triwave/eigensolver.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

namespace triwave {

void TridiagonalSymmetric::validate() const {
  if (diag.empty() ? !offdiag.empty() : offdiag.size() + 1 != diag.size()) {
    throw std::invalid_argument("tridiagonal off-diagonal length must be dimension - 1");
  }
  for (double v : diag) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite diagonal entry");
  }
  for (double v : offdiag) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite off-diagonal entry");
  }
}

double TridiagonalSymmetric::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(offdiag[i - 1]);
    if (i + 1 < diag.size()) row += std::abs(offdiag[i]);
    best = std::max(best, row);
  }
  return best;
}

double SymmetricDense::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double row = 0.0;
    for (double v : this->row(i)) row += std::abs(v);
    best = std::max(best, row);
  }
  return best;
}

void SymmetricDense::validate() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (!std::isfinite((*this)(i, j))) throw std::invalid_argument("non-finite matrix entry");
      if ((*this)(i, j) != (*this)(j, i)) throw std::invalid_argument("matrix is not symmetric");
    }
  }
}

namespace {

// Implicit-shift QL on diagonal d and off-diagonal e (e[i] couples i and
// i+1, e[n-1] == 0). When `v` is non-null it holds an n x n row-major matrix
// whose columns are rotated along; on return its columns are eigenvectors.
// Follows the EISPACK tql2 formulation.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, std::vector<double>* v,
                 double tol) {
  const std::size_t n = d.size();
  if (n == 0) return;
  const double eps = std::max(DBL_EPSILON, 1e-3 * tol);
  double f = 0.0;
  double tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;

    if (m > l) {
      int sweeps = 0;
      do {
        if (++sweeps > kMaxSweepsPerEigenvalue) throw ConvergenceError(l);

        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          const std::size_t i = ii;
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (v) {
            auto& vv = *v;
            for (std::size_t k = 0; k < n; ++k) {
              const double vk1 = vv[k * n + i + 1];
              vv[k * n + i + 1] = s * vv[k * n + i] + c * vk1;
              vv[k * n + i] = c * vv[k * n + i] - s * vk1;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

Spectrum finish(std::vector<double> d, const std::vector<double>& v, std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  std::vector<double> values(n);
  std::vector<double> vectors(n * n);
  for (std::size_t out = 0; out < n; ++out) {
    const std::size_t col = order[out];
    values[out] = d[col];
    double sign = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = v[k * n + col];
      if (std::abs(x) > 1e-12) {
        sign = x < 0 ? -1.0 : 1.0;
        break;
      }
    }
    for (std::size_t k = 0; k < n; ++k) vectors[out * n + k] = sign * v[k * n + col];
  }
  return Spectrum(std::move(values), std::move(vectors), n);
}

void check_tol(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("eigensolver tolerance must be positive");
}

}  // namespace

Spectrum eig_tridiagonal(const TridiagonalSymmetric& t, double tol) {
  t.validate();
  check_tol(tol);
  const std::size_t n = t.dimension();
  std::vector<double> d = t.diag;
  std::vector<double> e(n, 0.0);
  std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  ql_implicit(d, e, &v, tol);
  return finish(std::move(d), v, n);
}

std::vector<double> eigenvalues_tridiagonal(const TridiagonalSymmetric& t, double tol) {
  t.validate();
  check_tol(tol);
  std::vector<double> d = t.diag;
  std::vector<double> e(d.size(), 0.0);
  std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());
  ql_implicit(d, e, nullptr, tol);
  std::sort(d.begin(), d.end());
  return d;
}

TridiagonalSymmetric householder_tridiagonalize(const SymmetricDense& a, std::vector<double>* q) {
  // EISPACK tred2: on exit V holds the accumulated transformation.
  const std::size_t n = a.dimension();
  TridiagonalSymmetric t;
  if (n == 0) return t;
  std::vector<double> vv(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) vv[i * n + j] = a(i, j);
  }
  auto V = [&](std::size_t i, std::size_t j) -> double& { return vv[i * n + j]; };
  std::vector<double> d(n), e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) d[j] = V(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
        V(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        V(j, i) = f;
        g = e[j] + V(j, j) * f;
        for (std::size_t k = j + 1; k < i; ++k) {
          g += V(k, j) * d[k];
          e[k] += V(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k < i; ++k) V(k, j) -= (f * e[k] + g * d[k]);
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    V(n - 1, i) = V(i, i);
    V(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
        for (std::size_t k = 0; k <= i; ++k) V(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = V(n - 1, j);
    V(n - 1, j) = 0.0;
  }
  V(n - 1, n - 1) = 1.0;

  t.diag = std::move(d);
  t.offdiag.assign(e.begin() + 1, e.end());
  if (q) *q = std::move(vv);
  return t;
}

Spectrum eig_symmetric(const SymmetricDense& a, double tol) {
  a.validate();
  check_tol(tol);
  const std::size_t n = a.dimension();
  std::vector<double> q;
  TridiagonalSymmetric t = householder_tridiagonalize(a, &q);
  std::vector<double> d = std::move(t.diag);
  std::vector<double> e(n, 0.0);
  std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());
  ql_implicit(d, e, &q, tol);
  return finish(std::move(d), q, n);
}

std::vector<double> eigenvalues_symmetric(const SymmetricDense& a, double tol) {
  a.validate();
  check_tol(tol);
  return eigenvalues_tridiagonal(householder_tridiagonalize(a), tol);
}

std::size_t sturm_count(const TridiagonalSymmetric& t, double x) {
  const std::size_t n = t.dimension();
  if (n == 0) return 0;
  double max_e2 = 1.0;
  for (double e : t.offdiag) max_e2 = std::max(max_e2, e * e);
  const double pivmin = DBL_MIN * max_e2;

  std::size_t count = 0;
  double q = t.diag[0] - x;
  for (std::size_t i = 0;; ++i) {
    // a zero pivot means x is an eigenvalue of the leading block; nudging it
    // positive keeps the count strict
    if (std::abs(q) < pivmin) q = pivmin;
    if (q < 0) ++count;
    if (i + 1 == n) break;
    q = (t.diag[i + 1] - x) - t.offdiag[i] * t.offdiag[i] / q;
  }
  return count;
}

namespace {

template <typename Apply>
double residual_impl(std::size_t n, const Spectrum& s, Apply apply) {
  if (s.source_dimension() != n || s.size() != n) {
    throw std::invalid_argument("spectrum dimension does not match matrix");
  }
  double worst = 0.0;
  std::vector<double> av(n);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto vec = s.eigenvector(i);
    apply(vec, av);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double r = av[k] - s.eigenvalue(i) * vec[k];
      sum += r * r;
    }
    worst = std::max(worst, std::sqrt(sum));
  }
  return worst;
}

}  // namespace

double residual_report(const TridiagonalSymmetric& t, const Spectrum& s) {
  const std::size_t n = t.dimension();
  return residual_impl(n, s, [&](std::span<const double> x, std::vector<double>& y) {
    for (std::size_t k = 0; k < n; ++k) {
      double acc = t.diag[k] * x[k];
      if (k > 0) acc += t.offdiag[k - 1] * x[k - 1];
      if (k + 1 < n) acc += t.offdiag[k] * x[k + 1];
      y[k] = acc;
    }
  });
}

double residual_report(const SymmetricDense& a, const Spectrum& s) {
  const std::size_t n = a.dimension();
  return residual_impl(n, s, [&](std::span<const double> x, std::vector<double>& y) {
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      const auto row = a.row(k);
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
      y[k] = acc;
    }
  });
}

double orthogonality_defect(const Spectrum& s) {
  double worst = 0.0;
  const std::size_t n = s.source_dimension();
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double dot = 0.0;
      const auto a = s.eigenvector(i);
      const auto b = s.eigenvector(j);
      for (std::size_t k = 0; k < n; ++k) dot += a[k] * b[k];
      worst = std::max(worst, std::abs(dot));
    }
  }
  return worst;
}

}  // namespace triwave
