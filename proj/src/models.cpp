#include "triwave/models.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace triwave {

TrilinearParams::TrilinearParams(double omega_a, double omega_b, double omega_c, Complex kappa)
    : omega_a_(omega_a),
      omega_b_(omega_b),
      omega_c_(omega_c),
      kappa_(std::abs(kappa)),
      kappa_phase_(kappa == Complex(0.0, 0.0) ? 0.0 : std::arg(kappa)) {
  for (double w : {omega_a, omega_b, omega_c}) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("mode frequencies must be positive and finite");
    }
  }
  if (!std::isfinite(kappa_)) throw std::invalid_argument("coupling must be finite");
}

bool TrilinearParams::resonant(double tol) const {
  return std::abs(detuning()) <= tol * (omega_a_ + omega_b_ + omega_c_);
}

void MicroscopicParams::validate() const {
  for (double w : {omega_a, omega_b, omega_c}) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("mode frequencies must be positive and finite");
    }
  }
  for (double x : {e0, e1, e2, g_a, g_b, g_c}) {
    if (!std::isfinite(x)) throw std::invalid_argument("level energies and couplings must be finite");
  }
}

double free_energy(const TrilinearParams& p, const FockOccupation& occ) {
  return 0.0 + p.omega_a() * occ.n_a() + p.omega_b() * occ.n_b() + p.omega_c() * occ.n_c();
}

double free_energy(const MicroscopicParams& p, const FockOccupation& occ) {
  const double levels[3] = {p.e0, p.e1, p.e2};
  return p.omega_a * occ.n_a() + p.omega_b * occ.n_b() + p.omega_c * occ.n_c() +
         levels[occ.atom_level.value_or(0)];
}

TridiagonalSymmetric build_trilinear_block(const TrilinearParams& params, const BlockBasis& block) {
  if (block.kind() != ModelKind::trilinear) {
    throw std::invalid_argument("trilinear builder needs a trilinear block");
  }
  const std::size_t d = block.dimension();
  TridiagonalSymmetric t;
  t.diag.resize(d);
  t.offdiag.resize(d - 1);
  for (std::size_t k = 0; k < d; ++k) t.diag[k] = free_energy(params, block[k]);
  // <k+1| a' b c |k> = sqrt((k+1) n_b n_c), one square root of the exact integer product
  for (std::size_t k = 0; k + 1 < d; ++k) {
    const auto& s = block[k];
    const std::int64_t product = std::int64_t(s.n_a() + 1) * s.n_b() * s.n_c();
    t.offdiag[k] = params.kappa() * std::sqrt(static_cast<double>(product));
  }
  return t;
}

SymmetricDense build_microscopic_block(const MicroscopicParams& params, const BlockBasis& block) {
  if (block.kind() != ModelKind::microscopic) {
    throw std::invalid_argument("microscopic builder needs a microscopic block");
  }
  SymmetricDense h(block.dimension());
  for (std::size_t i = 0; i < block.dimension(); ++i) {
    const FockOccupation& s = block[i];
    h.set(i, i, free_energy(params, s));
    const int level = *s.atom_level;
    auto couple = [&](FockOccupation target, double amplitude) {
      if (auto j = block.find(target)) h.set(i, *j, amplitude);
    };
    if (level == 0 && s.n_a() > 0) {
      // g_a |2><0| a
      couple({{s.n_a() - 1, s.n_b(), s.n_c()}, 2}, params.g_a * std::sqrt(double(s.n_a())));
    }
    if (level == 0 && s.n_b() > 0) {
      // g_b |1><0| b
      couple({{s.n_a(), s.n_b() - 1, s.n_c()}, 1}, params.g_b * std::sqrt(double(s.n_b())));
    }
    if (level == 1 && s.n_c() > 0) {
      // g_c |2><1| c
      couple({{s.n_a(), s.n_b(), s.n_c() - 1}, 2}, params.g_c * std::sqrt(double(s.n_c())));
    }
  }
  return h;
}

namespace {

void require_detuned(const MicroscopicParams& p) {
  if (p.delta() == 0.0 || p.Delta() == 0.0) {
    throw std::domain_error("atom elimination needs nonzero detunings delta and Delta");
  }
}

}  // namespace

EffectiveModel effective_from_microscopic(const MicroscopicParams& params) {
  params.validate();
  require_detuned(params);
  const double delta = params.delta();
  const double Delta = params.Delta();
  const double kappa = params.g_a * params.g_b * params.g_c / (delta * Delta);
  const double stark_a = params.g_a * params.g_a / delta;
  const double stark_b = params.g_b * params.g_b / Delta;
  return EffectiveModel{
      TrilinearParams(params.omega_a - stark_a, params.omega_b - stark_b, params.omega_c, kappa),
      stark_a, stark_b, kappa};
}

DispersiveRatios dispersive_ratios(const MicroscopicParams& params, const FockOccupation& occ) {
  require_detuned(params);
  return {params.g_a * std::sqrt(double(occ.n_a())) / std::abs(params.delta()),
          params.g_b * std::sqrt(double(occ.n_b())) / std::abs(params.Delta())};
}

}  // namespace triwave
