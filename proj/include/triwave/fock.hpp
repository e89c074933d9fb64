#pragma once

// Fock-space bookkeeping for the three-mode models: conserved block labels,
// block bases, coherent-state amplitudes and truncation control.

#include <array>
#include <compare>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace triwave {

using Complex = std::complex<double>;

enum class ModelKind { trilinear, microscopic };

const char* to_string(ModelKind kind);

/// Photon occupations of modes a, b, c plus the atomic level (microscopic
/// model only).
struct FockOccupation {
  std::array<int, 3> n{0, 0, 0};
  std::optional<int> atom_level;

  int n_a() const { return n[0]; }
  int n_b() const { return n[1]; }
  int n_c() const { return n[2]; }

  bool operator==(const FockOccupation&) const = default;
};

/// Throws std::invalid_argument when occupations are negative or the atom
/// level does not match the model kind.
void validate(const FockOccupation& occ, ModelKind kind);

/// Conserved-quantity labels of a block: (M1, M2) for the trilinear model,
/// (Q1, Q2) for the microscopic one.
struct BlockIndex {
  int m1 = 0;
  int m2 = 0;

  auto operator<=>(const BlockIndex&) const = default;
};

/// Block label carried by a basis state. Trilinear: M1 = n_a + n_b,
/// M2 = n_a + n_c. Microscopic: Q1 = n_a + n_b + P1 + P2, Q2 = n_a + n_c + P2.
BlockIndex block_of(ModelKind kind, const FockOccupation& occ);

class BlockBasis {
 public:
  BlockBasis(ModelKind kind, BlockIndex index, std::vector<FockOccupation> states);

  ModelKind kind() const { return kind_; }
  const BlockIndex& index() const { return index_; }
  const std::vector<FockOccupation>& states() const { return states_; }
  std::size_t dimension() const { return states_.size(); }
  const FockOccupation& operator[](std::size_t i) const { return states_[i]; }

  /// Position of `occ` in the basis, if it belongs to this block.
  std::optional<std::size_t> find(const FockOccupation& occ) const;

 private:
  ModelKind kind_;
  BlockIndex index_;
  std::vector<FockOccupation> states_;
};

/// States (k, m1-k, m2-k) for k = 0..min(m1, m2), ordered by k.
BlockBasis block_basis_trilinear(int m1, int m2);

/// States grouped by atom level (0, 1, 2), then by n_a ascending.
BlockBasis block_basis_microscopic(int q1, int q2);

BlockBasis block_basis(ModelKind kind, BlockIndex index);

/// e^{-|alpha|^2/2} alpha^n / sqrt(n!)
Complex coherent_amplitude(Complex alpha, int n);

/// Poisson probability mass e^{-mean} mean^n / n!.
double poisson_pmf(double mean, int n);

/// Upper tail P(X > n) of a Poisson variable, summed directly.
double poisson_upper_tail(double mean, int n);

struct CoherentSpec {
  std::array<Complex, 3> amplitudes{};  // alpha, beta, gamma
};

struct BlockWeights {
  std::map<BlockIndex, double> weights;
  double tail_bound = 0.0;
  int m1_max = 0;
  int m2_max = 0;
};

/// Weight of every block of the retained rectangle m1 <= m1_max,
/// m2 <= m2_max for a product coherent state (atom in level 0 for the
/// microscopic model). `tail_bound` is the exact probability outside the
/// rectangle and never exceeds `tail_epsilon`. Throws std::invalid_argument
/// unless 0 < tail_epsilon < 1.
BlockWeights coherent_block_weights(const CoherentSpec& spec, ModelKind kind,
                                    double tail_epsilon);

/// Probability mass outside the rectangle m1 <= m1_max, m2 <= m2_max for
/// independent Poisson photon numbers with the given means.
double rectangle_tail(const std::array<double, 3>& means, int m1_max, int m2_max);

}  // namespace triwave
