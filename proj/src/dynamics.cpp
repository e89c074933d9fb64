#include "triwave/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace triwave {

double BlockState::norm2() const {
  double sum = 0.0;
  for (const Complex& z : amplitudes) sum += std::norm(z);
  return sum;
}

double GlobalState::norm2() const {
  double sum = 0.0;
  for (const auto& [idx, block] : blocks) sum += block.norm2();
  return sum;
}

GlobalState init_fock(ModelKind kind, const FockOccupation& occupation) {
  validate(occupation, kind);
  const BlockIndex idx = block_of(kind, occupation);
  const BlockBasis basis = block_basis(kind, idx);
  BlockState bs{idx, std::vector<Complex>(basis.dimension())};
  bs.amplitudes[*basis.find(occupation)] = 1.0;
  GlobalState state;
  state.kind = kind;
  state.blocks.emplace(idx, std::move(bs));
  return state;
}

GlobalState init_coherent(ModelKind kind, const CoherentSpec& spec, double tail_epsilon) {
  const BlockWeights weights = coherent_block_weights(spec, kind, tail_epsilon);
  GlobalState state;
  state.kind = kind;
  state.tail_bound = weights.tail_bound;
  for (const auto& [idx, w] : weights.weights) {
    if (w == 0.0) continue;
    const BlockBasis basis = block_basis(kind, idx);
    BlockState bs{idx, std::vector<Complex>(basis.dimension())};
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
      const FockOccupation& s = basis[i];
      if (s.atom_level.value_or(0) != 0) continue;
      bs.amplitudes[i] = coherent_amplitude(spec.amplitudes[0], s.n_a()) *
                         coherent_amplitude(spec.amplitudes[1], s.n_b()) *
                         coherent_amplitude(spec.amplitudes[2], s.n_c());
    }
    state.blocks.emplace(idx, std::move(bs));
  }
  return state;
}

ModelKind kind_of(const ModelParams& params) {
  return std::holds_alternative<TrilinearParams>(params) ? ModelKind::trilinear
                                                         : ModelKind::microscopic;
}

MissingSpectrumError::MissingSpectrumError(BlockIndex block)
    : std::out_of_range("no cached spectrum for block (" + std::to_string(block.m1) + "," +
                        std::to_string(block.m2) + ")"),
      block_(block) {}

EvolutionContext::EvolutionContext(ModelParams params, double tol)
    : params_(std::move(params)), tol_(tol) {
  if (auto* micro = std::get_if<MicroscopicParams>(&params_)) micro->validate();
}

const EvolutionContext::CachedBlock& EvolutionContext::prepare(BlockIndex idx) {
  if (auto it = cache_.find(idx); it != cache_.end()) return it->second;
  BlockBasis basis = block_basis(kind(), idx);
  if (const auto* tri = std::get_if<TrilinearParams>(&params_)) {
    TridiagonalSymmetric m = build_trilinear_block(*tri, basis);
    Spectrum s = eig_tridiagonal(m, tol_);
    return cache_.emplace(idx, CachedBlock{std::move(basis), std::move(m), std::move(s)})
        .first->second;
  }
  SymmetricDense m = build_microscopic_block(std::get<MicroscopicParams>(params_), basis);
  Spectrum s = eig_symmetric(m, tol_);
  return cache_.emplace(idx, CachedBlock{std::move(basis), std::move(m), std::move(s)})
      .first->second;
}

void EvolutionContext::prepare(const GlobalState& state) {
  if (state.kind != kind()) throw std::invalid_argument("state and context model kinds differ");
  for (const auto& [idx, block] : state.blocks) prepare(idx);
}

const EvolutionContext::CachedBlock& EvolutionContext::at(BlockIndex idx) const {
  auto it = cache_.find(idx);
  if (it == cache_.end()) throw MissingSpectrumError(idx);
  return it->second;
}

GlobalState evolve(const GlobalState& state, const EvolutionContext& ctx, double t) {
  if (state.kind != ctx.kind()) throw std::invalid_argument("state and context model kinds differ");
  GlobalState out;
  out.kind = state.kind;
  out.tail_bound = state.tail_bound;
  for (const auto& [idx, block] : state.blocks) {
    const Spectrum& spec = ctx.at(idx).spectrum;
    const std::size_t n = block.amplitudes.size();
    if (spec.source_dimension() != n) throw std::logic_error("cached spectrum dimension mismatch");
    std::vector<Complex> coeff(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = spec.eigenvector(i);
      Complex c = 0.0;
      for (std::size_t k = 0; k < n; ++k) c += v[k] * block.amplitudes[k];
      coeff[i] = c * std::polar(1.0, -spec.eigenvalue(i) * t);
    }
    BlockState evolved{idx, std::vector<Complex>(n)};
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = spec.eigenvector(i);
      for (std::size_t k = 0; k < n; ++k) evolved.amplitudes[k] += v[k] * coeff[i];
    }
    out.blocks.emplace(idx, std::move(evolved));
  }
  return out;
}

NumberExpectations expect_numbers(const GlobalState& state) {
  NumberExpectations out;
  int largest = 0;
  for (const auto& [idx, block] : state.blocks) {
    const BlockBasis basis = block_basis(state.kind, idx);
    largest = std::max({largest, idx.m1, idx.m2});
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
      const double p = std::norm(block.amplitudes[i]);
      for (int m = 0; m < 3; ++m) out.modes[m] += p * basis[i].n[m];
      if (state.kind == ModelKind::microscopic) out.atom_levels[*basis[i].atom_level] += p;
    }
  }
  out.uncertainty = state.tail_bound * largest;
  return out;
}

InvariantExpectations expect_invariants(const GlobalState& state) {
  InvariantExpectations out;
  for (const auto& [idx, block] : state.blocks) {
    const double p = block.norm2();
    out.m1 += p * idx.m1;
    out.m2 += p * idx.m2;
  }
  out.m3 = out.m2 - out.m1;
  return out;
}

namespace {

// <psi| O |psi> for an operator that lowers the photon numbers by `lower`
// (per mode) and leaves the atom alone. Each source block couples to a
// single target block; absent targets contribute nothing.
Complex lowering_expectation(const GlobalState& state, const std::array<int, 3>& lower) {
  Complex total = 0.0;
  for (const auto& [idx, block] : state.blocks) {
    const BlockBasis source = block_basis(state.kind, idx);
    std::optional<BlockBasis> target;
    const BlockState* target_state = nullptr;
    for (std::size_t j = 0; j < source.dimension(); ++j) {
      FockOccupation s = source[j];
      double amp2 = 1.0;
      bool vanishes = false;
      for (int m = 0; m < 3; ++m) {
        for (int r = 0; r < lower[m]; ++r) {
          if (s.n[m] == 0) {
            vanishes = true;
            break;
          }
          amp2 *= s.n[m];
          --s.n[m];
        }
      }
      if (vanishes) continue;
      if (!target) {
        const BlockIndex t_idx = block_of(state.kind, s);
        auto it = state.blocks.find(t_idx);
        if (it == state.blocks.end()) break;
        target.emplace(block_basis(state.kind, t_idx));
        target_state = &it->second;
      }
      const std::size_t i = *target->find(s);
      total += std::conj(target_state->amplitudes[i]) * std::sqrt(amp2) * block.amplitudes[j];
    }
  }
  return total;
}

}  // namespace

PairExpectations expect_pair(const GlobalState& state) {
  return {lowering_expectation(state, {1, 0, 0}), lowering_expectation(state, {0, 1, 0}),
          lowering_expectation(state, {0, 0, 1}), lowering_expectation(state, {0, 1, 1})};
}

double expect_energy(const GlobalState& state, const EvolutionContext& ctx) {
  double energy = 0.0;
  for (const auto& [idx, block] : state.blocks) {
    const auto& cached = ctx.at(idx);
    const auto& psi = block.amplitudes;
    if (const auto* t = std::get_if<TridiagonalSymmetric>(&cached.matrix)) {
      for (std::size_t k = 0; k < psi.size(); ++k) {
        energy += t->diag[k] * std::norm(psi[k]);
        if (k + 1 < psi.size()) {
          energy += 2.0 * t->offdiag[k] * std::real(std::conj(psi[k]) * psi[k + 1]);
        }
      }
    } else {
      const auto& a = std::get<SymmetricDense>(cached.matrix);
      for (std::size_t i = 0; i < psi.size(); ++i) {
        Complex row = 0.0;
        for (std::size_t j = 0; j < psi.size(); ++j) row += a(i, j) * psi[j];
        energy += std::real(std::conj(psi[i]) * row);
      }
    }
  }
  return energy;
}

TrajectoryRecord observe(const GlobalState& initial, const EvolutionContext& ctx, double t) {
  const GlobalState s = evolve(initial, ctx, t);
  const auto numbers = expect_numbers(s);
  const auto inv = expect_invariants(s);
  const auto pair = expect_pair(s);
  TrajectoryRecord r;
  r.t = t;
  r.n_a = numbers.modes[0];
  r.n_b = numbers.modes[1];
  r.n_c = numbers.modes[2];
  r.m1 = inv.m1;
  r.m2 = inv.m2;
  r.re_bc = pair.bc.real();
  r.im_bc = pair.bc.imag();
  r.abs_b = std::abs(pair.b);
  r.abs_c = std::abs(pair.c);
  r.energy = expect_energy(s, ctx);
  r.tail_bound = s.tail_bound;
  return r;
}

std::vector<TrajectoryRecord> trajectory(const GlobalState& initial, EvolutionContext& ctx,
                                         const std::vector<double>& times) {
  ctx.prepare(initial);
  std::vector<TrajectoryRecord> records;
  records.reserve(times.size());
  for (double t : times) records.push_back(observe(initial, ctx, t));
  return records;
}

}  // namespace triwave
