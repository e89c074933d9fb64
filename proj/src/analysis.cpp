#include "triwave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "triwave/eigensolver.hpp"

namespace triwave {

double coherent_energy_trilinear(const TrilinearParams& p, Complex alpha, Complex beta,
                                 Complex gamma) {
  const Complex kappa = std::polar(p.kappa(), p.kappa_phase());
  return p.omega_a() * std::norm(alpha) + p.omega_b() * std::norm(beta) +
         p.omega_c() * std::norm(gamma) + 2.0 * std::real(kappa * std::conj(alpha) * beta * gamma);
}

double worst_phase_energy(const TrilinearParams& p, double r) {
  return (p.omega_a() + p.omega_b() + p.omega_c()) * r * r - 2.0 * p.kappa() * r * r * r;
}

void AtomAmplitudes::validate() const {
  const double total = std::norm(c0) + std::norm(c1) + std::norm(c2);
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("atomic amplitudes must be normalized");
  }
}

double coherent_energy_microscopic(const MicroscopicParams& p, Complex alpha, Complex beta,
                                   Complex gamma, const AtomAmplitudes& atom) {
  atom.validate();
  const auto& [c0, c1, c2] = atom;
  const double field =
      p.omega_a * std::norm(alpha) + p.omega_b * std::norm(beta) + p.omega_c * std::norm(gamma);
  const double levels = p.e0 * std::norm(c0) + p.e1 * std::norm(c1) + p.e2 * std::norm(c2);
  const Complex coupling = p.g_a * alpha * c0 * std::conj(c2) +
                           p.g_c * gamma * c1 * std::conj(c2) +
                           p.g_b * beta * c0 * std::conj(c1);
  return field + levels + 2.0 * std::real(coupling);
}

double min_atom_energy_microscopic(const MicroscopicParams& p, double alpha, double beta,
                                   double gamma) {
  SymmetricDense atom(3);
  atom.set(0, 0, p.e0);
  atom.set(1, 1, p.e1);
  atom.set(2, 2, p.e2);
  atom.set(1, 0, p.g_b * beta);
  atom.set(2, 0, p.g_a * alpha);
  atom.set(2, 1, p.g_c * gamma);
  const double field =
      p.omega_a * alpha * alpha + p.omega_b * beta * beta + p.omega_c * gamma * gamma;
  return field + eigenvalues_symmetric(atom).front();
}

double microscopic_energy_lower_bound(const MicroscopicParams& p, double r) {
  const double w_min = std::min({p.omega_a, p.omega_b, p.omega_c});
  const double g_sum = std::abs(p.g_a) + std::abs(p.g_b) + std::abs(p.g_c);
  const double e_max = std::max({std::abs(p.e0), std::abs(p.e1), std::abs(p.e2)});
  return w_min * r * r - g_sum * r - e_max;
}

double eq7_estimate(const TrilinearParams& p, int n) {
  return 2.0 * n * p.omega_a() - 2.0 * p.kappa() * std::pow(double(n), 1.5);
}

GroundScanResult ground_scan_trilinear(const TrilinearParams& p, int n_max) {
  if (n_max < 1) throw std::invalid_argument("scan needs n_max >= 1");
  GroundScanResult out;
  if (p.kappa() > 0.0) out.estimate_crossing = std::pow(p.omega_a() / p.kappa(), 2);
  for (int n = 1; n <= n_max; ++n) {
    const BlockIndex idx{2 * n, 2 * n};
    const auto values = eigenvalues_tridiagonal(build_trilinear_block(p, block_basis_trilinear(idx.m1, idx.m2)));
    GroundScanEntry e;
    e.n = n;
    e.block = idx;
    e.ground_energy = values.front();
    e.estimate = eq7_estimate(p, n);
    if (!out.crossing && e.ground_energy < 0.0) out.crossing = n;
    out.entries.push_back(e);
  }
  return out;
}

GroundScanResult ground_scan_microscopic(const MicroscopicParams& p, int q_max) {
  if (q_max < 1) throw std::invalid_argument("scan needs q_max >= 1");
  p.validate();
  GroundScanResult out;
  const double g_sum = std::abs(p.g_a) + std::abs(p.g_b) + std::abs(p.g_c);
  for (int q = 1; q <= q_max; ++q) {
    const BlockBasis basis = block_basis_microscopic(q, q);
    const SymmetricDense h = build_microscopic_block(p, basis);
    double min_diag = h(0, 0);
    for (std::size_t i = 1; i < h.dimension(); ++i) min_diag = std::min(min_diag, h(i, i));
    GroundScanEntry e;
    e.n = q;
    e.block = {q, q};
    e.ground_energy = eigenvalues_symmetric(h).front();
    e.lower_bound = min_diag - g_sum * std::sqrt(q + 1.0);
    if (e.ground_energy < *e.lower_bound) out.bound_respected = false;
    if (!out.crossing && e.ground_energy < 0.0) out.crossing = q;
    out.entries.push_back(e);
  }
  return out;
}

}  // namespace triwave
