#pragma once

// Exact time evolution of block-structured states by per-block spectral
// decomposition, and the observables built on top of it.

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "triwave/eigensolver.hpp"
#include "triwave/fock.hpp"
#include "triwave/models.hpp"

namespace triwave {

struct BlockState {
  BlockIndex block;
  std::vector<Complex> amplitudes;

  double norm2() const;
};

/// Direct sum of block amplitude vectors. `tail_bound` is the probability
/// discarded by truncation.
struct GlobalState {
  ModelKind kind = ModelKind::trilinear;
  std::map<BlockIndex, BlockState> blocks;
  double tail_bound = 0.0;

  double norm2() const;
};

GlobalState init_fock(ModelKind kind, const FockOccupation& occupation);

/// Product coherent state (atom in level 0 for the microscopic model),
/// truncated to the rectangle chosen by coherent_block_weights.
GlobalState init_coherent(ModelKind kind, const CoherentSpec& spec, double tail_epsilon);

using ModelParams = std::variant<TrilinearParams, MicroscopicParams>;

ModelKind kind_of(const ModelParams& params);

class MissingSpectrumError : public std::out_of_range {
 public:
  explicit MissingSpectrumError(BlockIndex block);
  BlockIndex block() const { return block_; }

 private:
  BlockIndex block_;
};

/// Model parameters plus a per-block cache of bases, matrices and spectra.
class EvolutionContext {
 public:
  struct CachedBlock {
    BlockBasis basis;
    std::variant<TridiagonalSymmetric, SymmetricDense> matrix;
    Spectrum spectrum;
  };

  explicit EvolutionContext(ModelParams params, double tol = kDefaultEigenTol);

  const ModelParams& params() const { return params_; }
  ModelKind kind() const { return kind_of(params_); }

  /// Diagonalizes every block of `state` not already cached.
  void prepare(const GlobalState& state);
  const CachedBlock& prepare(BlockIndex block);

  /// Throws MissingSpectrumError when the block has not been prepared.
  const CachedBlock& at(BlockIndex block) const;
  bool contains(BlockIndex block) const { return cache_.count(block) != 0; }

 private:
  ModelParams params_;
  double tol_;
  std::map<BlockIndex, CachedBlock> cache_;
};

/// psi <- V exp(-i Lambda t) V^T psi in every block.
GlobalState evolve(const GlobalState& state, const EvolutionContext& ctx, double t);

struct NumberExpectations {
  std::array<double, 3> modes{};        // <n_a>, <n_b>, <n_c>
  std::array<double, 3> atom_levels{};  // populations; zero for the trilinear model
  double uncertainty = 0.0;             // tail_bound times the largest retained photon number
};

NumberExpectations expect_numbers(const GlobalState& state);

struct InvariantExpectations {
  double m1 = 0, m2 = 0, m3 = 0;  // m3 == m2 - m1 exactly
};

/// Block labels weighted by block probability.
InvariantExpectations expect_invariants(const GlobalState& state);

struct PairExpectations {
  Complex a, b, c, bc;
};

/// <a>, <b>, <c> and <b c> from coherences between neighbouring blocks.
PairExpectations expect_pair(const GlobalState& state);

/// Sum over blocks of psi^dagger H psi. Requires prepared blocks.
double expect_energy(const GlobalState& state, const EvolutionContext& ctx);

struct TrajectoryRecord {
  double t = 0;
  double n_a = 0, n_b = 0, n_c = 0;
  double m1 = 0, m2 = 0;
  double re_bc = 0, im_bc = 0;
  double abs_b = 0, abs_c = 0;
  double energy = 0;
  double tail_bound = 0;
};

/// Observables of `initial` evolved to time t. Requires prepared blocks.
TrajectoryRecord observe(const GlobalState& initial, const EvolutionContext& ctx, double t);

/// Evolves `initial` to each time in `times` and records observables.
std::vector<TrajectoryRecord> trajectory(const GlobalState& initial, EvolutionContext& ctx,
                                         const std::vector<double>& times);

}  // namespace triwave
