#pragma once

// Real symmetric eigensolvers: implicit-shift QL for tridiagonal matrices,
// Householder reduction for dense input, and a Sturm-sequence counter that
// serves as an independent check.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "triwave/matrix.hpp"

namespace triwave {

inline constexpr double kDefaultEigenTol = 1e-12;
inline constexpr int kMaxSweepsPerEigenvalue = 50;

/// Raised when QL iteration exceeds its sweep budget.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(std::size_t index)
      : std::runtime_error("eigensolver did not converge for eigenvalue " + std::to_string(index)),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Ascending eigenvalues with orthonormal eigenvectors. Each eigenvector has
/// its first nonzero component positive.
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(std::vector<double> values, std::vector<double> vectors, std::size_t dim)
      : values_(std::move(values)), vectors_(std::move(vectors)), dim_(dim) {}

  std::size_t size() const { return values_.size(); }
  std::size_t source_dimension() const { return dim_; }
  const std::vector<double>& eigenvalues() const { return values_; }
  double eigenvalue(std::size_t i) const { return values_[i]; }
  std::span<const double> eigenvector(std::size_t i) const {
    return {vectors_.data() + i * dim_, dim_};
  }

 private:
  std::vector<double> values_;
  std::vector<double> vectors_;  // eigenvector i stored contiguously
  std::size_t dim_ = 0;
};

Spectrum eig_tridiagonal(const TridiagonalSymmetric& t, double tol = kDefaultEigenTol);
Spectrum eig_symmetric(const SymmetricDense& a, double tol = kDefaultEigenTol);

/// Eigenvalues only, ascending. Same iteration without vector accumulation.
std::vector<double> eigenvalues_tridiagonal(const TridiagonalSymmetric& t,
                                            double tol = kDefaultEigenTol);
std::vector<double> eigenvalues_symmetric(const SymmetricDense& a,
                                          double tol = kDefaultEigenTol);

/// Orthogonal reduction A = Q T Q^T. `q` receives Q row-major when non-null.
TridiagonalSymmetric householder_tridiagonalize(const SymmetricDense& a,
                                                std::vector<double>* q = nullptr);

/// Number of eigenvalues strictly below x, from the signs of the pivots of
/// the LDL^T factorization of T - xI.
std::size_t sturm_count(const TridiagonalSymmetric& t, double x);

/// max_i ||A v_i - lambda_i v_i||_2. Throws std::invalid_argument on a
/// dimension mismatch.
double residual_report(const TridiagonalSymmetric& t, const Spectrum& s);
double residual_report(const SymmetricDense& a, const Spectrum& s);

/// max_{i != j} |v_i . v_j|
double orthogonality_defect(const Spectrum& s);

}  // namespace triwave
