#pragma once

// Independent reference computations used only by the tests. None of these
// share code paths with the library routines they check.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "triwave/matrix.hpp"

namespace triwave::oracle {

/// Number of eigenvalues of the dense symmetric matrix below x: count of
/// negative pivots of an unpivoted LDL^T of A - xI (Sylvester inertia).
inline std::size_t inertia_below(const SymmetricDense& a, double x) {
  const std::size_t n = a.dimension();
  std::vector<long double> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a(i, j) - (i == j ? x : 0.0);
  }
  std::size_t negatives = 0;
  for (std::size_t k = 0; k < n; ++k) {
    long double pivot = m[k * n + k];
    if (pivot == 0.0L) pivot = 1e-300L;
    if (pivot < 0) ++negatives;
    for (std::size_t i = k + 1; i < n; ++i) {
      const long double f = m[i * n + k] / pivot;
      for (std::size_t j = k + 1; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
    }
  }
  return negatives;
}

/// All eigenvalues of a dense symmetric matrix by bisection on the inertia count.
inline std::vector<double> bisect_eigenvalues(const SymmetricDense& a) {
  const std::size_t n = a.dimension();
  double radius = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(a(i, j));
    radius = std::max(radius, row);
  }
  std::vector<double> values;
  for (std::size_t k = 0; k < n; ++k) {
    double lo = -radius - 1.0, hi = radius + 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (inertia_below(a, mid) > k) hi = mid;
      else lo = mid;
    }
    values.push_back(0.5 * (lo + hi));
  }
  return values;
}

/// Seeded random symmetric matrix with entries uniform in [-1, 1].
inline SymmetricDense random_symmetric(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymmetricDense a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) a.set(i, j, u(rng));
  }
  return a;
}

/// Poisson upper tail in extended precision by brute-force summation.
inline long double poisson_tail_brute(long double mean, int n) {
  long double term = std::exp(-mean);
  long double head = 0.0L;
  for (int j = 0; j <= n; ++j) {
    head += term;
    term *= mean / (j + 1);
  }
  long double tail = 0.0L;
  for (int j = n + 1; j < n + 2000; ++j) {
    tail += term;
    term *= mean / (j + 1);
    if (term < 1e-30L * tail) break;
  }
  return tail;
}

using DenseC = Eigen::MatrixXcd;
using VectorC = Eigen::VectorXcd;

/// exp(-iHt) psi for a dense real symmetric H via Eigen's eigensolver.
inline VectorC dense_evolve(const Eigen::MatrixXd& h, const VectorC& psi, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::MatrixXd& v = es.eigenvectors();
  VectorC coeff = v.transpose().cast<std::complex<double>>() * psi;
  for (Eigen::Index i = 0; i < coeff.size(); ++i) {
    coeff[i] *= std::polar(1.0, -es.eigenvalues()[i] * t);
  }
  return v.cast<std::complex<double>>() * coeff;
}

/// Three-level atom coupled to modes a, b, c on the product space
/// {atom} x [0, cutoff]^3, built straight from the Hamiltonian's terms.
/// Index = ((atom * (c+1) + n_a) * (c+1) + n_b) * (c+1) + n_c.
struct MicroscopicDense {
  int cutoff;
  Eigen::MatrixXd h;

  std::size_t index(int atom, int na, int nb, int nc) const {
    const int e = cutoff + 1;
    return static_cast<std::size_t>(((atom * e + na) * e + nb) * e + nc);
  }
};

inline MicroscopicDense microscopic_dense(double wa, double wb, double wc, double e0, double e1,
                                          double e2, double ga, double gb, double gc, int cutoff) {
  MicroscopicDense out{cutoff, {}};
  const int e = cutoff + 1;
  const int dim = 3 * e * e * e;
  out.h = Eigen::MatrixXd::Zero(dim, dim);
  const double levels[3] = {e0, e1, e2};
  for (int atom = 0; atom < 3; ++atom) {
    for (int na = 0; na <= cutoff; ++na) {
      for (int nb = 0; nb <= cutoff; ++nb) {
        for (int nc = 0; nc <= cutoff; ++nc) {
          const auto i = out.index(atom, na, nb, nc);
          out.h(i, i) = wa * na + wb * nb + wc * nc + levels[atom];
          // |2><0| a, |1><0| b, |2><1| c and their conjugates
          if (atom == 0 && na > 0) {
            const auto j = out.index(2, na - 1, nb, nc);
            out.h(i, j) = out.h(j, i) = ga * std::sqrt(double(na));
          }
          if (atom == 0 && nb > 0) {
            const auto j = out.index(1, na, nb - 1, nc);
            out.h(i, j) = out.h(j, i) = gb * std::sqrt(double(nb));
          }
          if (atom == 1 && nc > 0) {
            const auto j = out.index(2, na, nb, nc - 1);
            out.h(i, j) = out.h(j, i) = gc * std::sqrt(double(nc));
          }
        }
      }
    }
  }
  return out;
}

}  // namespace triwave::oracle
