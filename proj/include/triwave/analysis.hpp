#pragma once

// Closed-form coherent-state energies and ground-energy scans contrasting the
// unbounded trilinear model with the bounded three-level model.

#include <optional>
#include <vector>

#include "triwave/fock.hpp"
#include "triwave/models.hpp"

namespace triwave {

/// wa|alpha|^2 + wb|beta|^2 + wc|gamma|^2 + kappa (alpha* beta gamma + c.c.)
/// with kappa the canonical (non-negative) coupling.
double coherent_energy_trilinear(const TrilinearParams& p, Complex alpha, Complex beta,
                                 Complex gamma);

/// Phase-minimized energy at |alpha| = |beta| = |gamma| = r:
/// (wa + wb + wc) r^2 - 2|kappa| r^3.
double worst_phase_energy(const TrilinearParams& p, double r);

struct AtomAmplitudes {
  Complex c0{1.0, 0.0}, c1{0.0, 0.0}, c2{0.0, 0.0};

  /// Throws std::invalid_argument unless |c0|^2 + |c1|^2 + |c2|^2 = 1 within 1e-12.
  void validate() const;
};

/// Expectation of the three-level Hamiltonian in a product of field coherent
/// states and a pure atomic state. Each coupling pairs with its own mode
/// amplitude (alpha with g_a, beta with g_b, gamma with g_c).
double coherent_energy_microscopic(const MicroscopicParams& p, Complex alpha, Complex beta,
                                   Complex gamma, const AtomAmplitudes& atom);

/// Minimum of coherent_energy_microscopic over all atomic states for the
/// given field amplitudes: field energy plus the lowest eigenvalue of the
/// 3 x 3 atomic matrix. Amplitudes must be real.
double min_atom_energy_microscopic(const MicroscopicParams& p, double alpha, double beta,
                                   double gamma);

/// min(w) r^2 - (g_a + g_b + g_c) r - max|E_i|, a lower bound for the
/// microscopic energy at |alpha| = |beta| = |gamma| = r.
double microscopic_energy_lower_bound(const MicroscopicParams& p, double r);

/// 2 N wa - 2 |kappa| N^{3/2}
double eq7_estimate(const TrilinearParams& p, int n);

struct GroundScanEntry {
  int n = 0;
  BlockIndex block;
  double ground_energy = 0.0;
  double estimate = 0.0;                // large-N estimate (trilinear scan)
  std::optional<double> lower_bound;    // analytic bound (microscopic scan)
};

struct GroundScanResult {
  std::vector<GroundScanEntry> entries;
  std::optional<int> crossing;          // first N with negative ground energy
  std::optional<double> estimate_crossing;  // (wa/|kappa|)^2, trilinear only
  bool bound_respected = true;
};

/// Lowest eigenvalue of block (2N, 2N) for N = 1..n_max.
GroundScanResult ground_scan_trilinear(const TrilinearParams& p, int n_max);

/// Lowest eigenvalue of block (Q, Q) for Q = 1..q_max, checked against
/// min diagonal - (g_a + g_b + g_c) sqrt(Q + 1).
GroundScanResult ground_scan_microscopic(const MicroscopicParams& p, int q_max);

}  // namespace triwave
