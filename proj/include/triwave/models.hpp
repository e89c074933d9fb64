#pragma once

// Block Hamiltonians for the trilinear three-wave mixing model and for the
// three-level atom it is derived from, plus the perturbative reduction
// between the two.

#include <complex>

#include "triwave/fock.hpp"
#include "triwave/matrix.hpp"

namespace triwave {

/// H = wa a'a + wb b'b + wc c'c + kappa (a' b c + b' c' a).
///
/// A complex coupling is stored as |kappa| with its phase recorded; the phase
/// is removed by rotating mode a, which keeps every block real symmetric.
class TrilinearParams {
 public:
  TrilinearParams(double omega_a, double omega_b, double omega_c, Complex kappa);
  TrilinearParams(double omega_a, double omega_b, double omega_c, double kappa)
      : TrilinearParams(omega_a, omega_b, omega_c, Complex(kappa, 0.0)) {}

  double omega_a() const { return omega_a_; }
  double omega_b() const { return omega_b_; }
  double omega_c() const { return omega_c_; }
  double kappa() const { return kappa_; }
  double kappa_phase() const { return kappa_phase_; }

  /// omega_a - omega_b - omega_c
  double detuning() const { return omega_a_ - omega_b_ - omega_c_; }
  bool resonant(double tol = 1e-12) const;

 private:
  double omega_a_, omega_b_, omega_c_;
  double kappa_;
  double kappa_phase_;
};

struct MicroscopicParams {
  double omega_a = 0, omega_b = 0, omega_c = 0;
  double e0 = 0, e1 = 0, e2 = 0;
  double g_a = 0, g_b = 0, g_c = 0;

  /// E2 - E0 - omega_a
  double delta() const { return e2 - e0 - omega_a; }
  /// E1 - E0 - omega_b
  double Delta() const { return e1 - e0 - omega_b; }

  /// Throws std::invalid_argument for non-positive frequencies or
  /// non-finite entries.
  void validate() const;
};

TridiagonalSymmetric build_trilinear_block(const TrilinearParams& params, const BlockBasis& block);
SymmetricDense build_microscopic_block(const MicroscopicParams& params, const BlockBasis& block);

/// Diagonal (free) energy of a basis state.
double free_energy(const TrilinearParams& params, const FockOccupation& occ);
double free_energy(const MicroscopicParams& params, const FockOccupation& occ);

struct EffectiveModel {
  TrilinearParams params;
  double stark_a;  // g_a^2 / delta
  double stark_b;  // g_b^2 / Delta
  double kappa_signed;  // g_a g_b g_c / (delta Delta) before canonicalization
};

/// Third-order elimination of the atom: kappa = g_a g_b g_c / (delta Delta),
/// mode frequencies shifted to omega_a - g_a^2/delta and omega_b - g_b^2/Delta.
/// Throws std::domain_error when either detuning vanishes.
EffectiveModel effective_from_microscopic(const MicroscopicParams& params);

struct DispersiveRatios {
  double ratio_a;  // g_a sqrt(n_a) / |delta|
  double ratio_b;  // g_b sqrt(n_b) / |Delta|
};

/// Values well below 1 mean the perturbative reduction is trustworthy.
/// Throws std::domain_error when either detuning vanishes.
DispersiveRatios dispersive_ratios(const MicroscopicParams& params, const FockOccupation& occ);

}  // namespace triwave
