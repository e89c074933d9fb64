#include "triwave/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace triwave {

const char* to_string(ModelKind kind) {
  return kind == ModelKind::trilinear ? "trilinear" : "microscopic";
}

void validate(const FockOccupation& occ, ModelKind kind) {
  for (int n : occ.n) {
    if (n < 0) throw std::invalid_argument("photon occupations must be non-negative");
  }
  if (kind == ModelKind::trilinear && occ.atom_level) {
    throw std::invalid_argument("trilinear states carry no atom level");
  }
  if (kind == ModelKind::microscopic) {
    if (!occ.atom_level) throw std::invalid_argument("microscopic states need an atom level");
    if (*occ.atom_level < 0 || *occ.atom_level > 2) {
      throw std::invalid_argument("atom level must be 0, 1 or 2");
    }
  }
}

BlockIndex block_of(ModelKind kind, const FockOccupation& occ) {
  BlockIndex idx{occ.n_a() + occ.n_b(), occ.n_a() + occ.n_c()};
  if (kind == ModelKind::microscopic) {
    const int level = occ.atom_level.value_or(0);
    if (level >= 1) ++idx.m1;
    if (level == 2) ++idx.m2;
  }
  return idx;
}

namespace {

// Number of states of atom level `level` inside microscopic block (q1, q2).
int level_count(int level, int q1, int q2) {
  const int r1 = q1 - (level >= 1 ? 1 : 0);
  const int r2 = q2 - (level == 2 ? 1 : 0);
  if (r1 < 0 || r2 < 0) return 0;
  return std::min(r1, r2) + 1;
}

}  // namespace

BlockBasis::BlockBasis(ModelKind kind, BlockIndex index, std::vector<FockOccupation> states)
    : kind_(kind), index_(index), states_(std::move(states)) {}

std::optional<std::size_t> BlockBasis::find(const FockOccupation& occ) const {
  for (int n : occ.n) {
    if (n < 0) return std::nullopt;
  }
  if ((kind_ == ModelKind::microscopic) != occ.atom_level.has_value()) return std::nullopt;
  if (block_of(kind_, occ) != index_) return std::nullopt;
  std::size_t offset = 0;
  if (kind_ == ModelKind::microscopic) {
    const int level = *occ.atom_level;
    if (level < 0 || level > 2) return std::nullopt;
    for (int l = 0; l < level; ++l) offset += level_count(l, index_.m1, index_.m2);
  }
  return offset + static_cast<std::size_t>(occ.n_a());
}

BlockBasis block_basis_trilinear(int m1, int m2) {
  if (m1 < 0 || m2 < 0) throw std::invalid_argument("block labels must be non-negative");
  std::vector<FockOccupation> states;
  const int kmax = std::min(m1, m2);
  states.reserve(kmax + 1);
  for (int k = 0; k <= kmax; ++k) states.push_back({{k, m1 - k, m2 - k}, std::nullopt});
  return BlockBasis(ModelKind::trilinear, {m1, m2}, std::move(states));
}

BlockBasis block_basis_microscopic(int q1, int q2) {
  if (q1 < 0 || q2 < 0) throw std::invalid_argument("block labels must be non-negative");
  std::vector<FockOccupation> states;
  for (int level = 0; level < 3; ++level) {
    const int r1 = q1 - (level >= 1 ? 1 : 0);
    const int r2 = q2 - (level == 2 ? 1 : 0);
    for (int k = 0; k < level_count(level, q1, q2); ++k) {
      states.push_back({{k, r1 - k, r2 - k}, level});
    }
  }
  return BlockBasis(ModelKind::microscopic, {q1, q2}, std::move(states));
}

BlockBasis block_basis(ModelKind kind, BlockIndex index) {
  return kind == ModelKind::trilinear ? block_basis_trilinear(index.m1, index.m2)
                                      : block_basis_microscopic(index.m1, index.m2);
}

Complex coherent_amplitude(Complex alpha, int n) {
  if (n < 0) throw std::invalid_argument("photon number must be non-negative");
  const double mag2 = std::norm(alpha);
  if (n == 0) return Complex(std::exp(-0.5 * mag2), 0.0);
  if (mag2 == 0.0) return Complex(0.0, 0.0);
  if (n <= 20) {
    Complex power(1.0, 0.0);
    double factorial = 1.0;
    for (int j = 1; j <= n; ++j) {
      power *= alpha;
      factorial *= j;
    }
    return std::exp(-0.5 * mag2) * power / std::sqrt(factorial);
  }
  // log space: factorials overflow long before the amplitude underflows
  const double log_mag = -0.5 * mag2 + n * std::log(std::abs(alpha)) - 0.5 * std::lgamma(n + 1.0);
  return std::polar(std::exp(log_mag), n * std::arg(alpha));
}

double poisson_pmf(double mean, int n) {
  if (n < 0) return 0.0;
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
}

double poisson_upper_tail(double mean, int n) {
  if (n < 0) return 1.0;
  if (mean == 0.0) return 0.0;
  if (n + 1 < mean) {
    double head = 0.0;
    for (int j = 0; j <= n; ++j) head += poisson_pmf(mean, j);
    return std::max(0.0, 1.0 - head);
  }
  double sum = 0.0;
  double term = poisson_pmf(mean, n + 1);
  for (int j = n + 1; term > 0.0; ++j) {
    sum += term;
    if (term < 1e-18 * sum) break;
    term *= mean / (j + 1);
  }
  return sum;
}

double rectangle_tail(const std::array<double, 3>& means, int m1_max, int m2_max) {
  const int kmax = std::min(m1_max, m2_max);
  double tail = poisson_upper_tail(means[0], kmax);
  for (int k = 0; k <= kmax; ++k) {
    const double qb = poisson_upper_tail(means[1], m1_max - k);
    const double qc = poisson_upper_tail(means[2], m2_max - k);
    tail += poisson_pmf(means[0], k) * (qb + qc - qb * qc);
  }
  return tail;
}

BlockWeights coherent_block_weights(const CoherentSpec& spec, ModelKind kind,
                                    double tail_epsilon) {
  (void)kind;  // the atom starts in level 0, so both models share the photon statistics
  if (!(tail_epsilon > 0.0 && tail_epsilon < 1.0)) {
    throw std::invalid_argument("tail_epsilon must lie in (0, 1)");
  }
  const std::array<double, 3> means{std::norm(spec.amplitudes[0]), std::norm(spec.amplitudes[1]),
                                    std::norm(spec.amplitudes[2])};

  // Start from the union-bound rectangle, then shrink while the exact tail allows.
  int m1_max = 0;
  while (poisson_upper_tail(means[0] + means[1], m1_max) > 0.5 * tail_epsilon) ++m1_max;
  int m2_max = 0;
  while (poisson_upper_tail(means[0] + means[2], m2_max) > 0.5 * tail_epsilon) ++m2_max;
  for (bool shrunk = true; shrunk;) {
    shrunk = false;
    if (m1_max > 0 && rectangle_tail(means, m1_max - 1, m2_max) <= tail_epsilon) {
      --m1_max;
      shrunk = true;
    }
    if (m2_max > 0 && rectangle_tail(means, m1_max, m2_max - 1) <= tail_epsilon) {
      --m2_max;
      shrunk = true;
    }
  }

  BlockWeights out;
  out.m1_max = m1_max;
  out.m2_max = m2_max;
  out.tail_bound = rectangle_tail(means, m1_max, m2_max);
  for (int m1 = 0; m1 <= m1_max; ++m1) {
    for (int m2 = 0; m2 <= m2_max; ++m2) {
      double w = 0.0;
      for (int k = 0; k <= std::min(m1, m2); ++k) {
        w += poisson_pmf(means[0], k) * poisson_pmf(means[1], m1 - k) *
             poisson_pmf(means[2], m2 - k);
      }
      out.weights[{m1, m2}] = w;
    }
  }
  return out;
}

}  // namespace triwave
