#pragma once

// Real symmetric matrix containers used for block Hamiltonians.

#include <cstddef>
#include <span>
#include <vector>

namespace triwave {

struct TridiagonalSymmetric {
  std::vector<double> diag;
  std::vector<double> offdiag;  // offdiag[i] couples i and i+1

  std::size_t dimension() const { return diag.size(); }
  /// Throws std::invalid_argument on inconsistent lengths or non-finite entries.
  void validate() const;
  /// Maximum absolute row sum.
  double norm_inf() const;
};

/// Dense symmetric matrix; every write mirrors across the diagonal.
class SymmetricDense {
 public:
  SymmetricDense() = default;
  explicit SymmetricDense(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t dimension() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double value) {
    data_[i * n_ + j] = value;
    data_[j * n_ + i] = value;
  }
  void add(std::size_t i, std::size_t j, double value) { set(i, j, (*this)(i, j) + value); }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  double norm_inf() const;
  void validate() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

}  // namespace triwave
