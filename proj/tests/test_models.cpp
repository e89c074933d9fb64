#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "triwave/eigensolver.hpp"
#include "triwave/models.hpp"

using namespace triwave;

namespace {

MicroscopicParams desk(double g = 0.01) { return {2, 1, 1, 0, 1.1, 2.2, g, g, g}; }

}  // namespace

TEST_CASE("trilinear parameters") {
  const TrilinearParams p(2, 1, 1, 0.1);
  CHECK(p.detuning() == 0.0);
  CHECK(p.resonant());
  CHECK_FALSE(TrilinearParams(2, 1, 0.9, 0.1).resonant());

  const TrilinearParams negative(2, 1, 1, -0.1);
  CHECK(negative.kappa() == 0.1);
  CHECK(std::abs(negative.kappa_phase() - std::numbers::pi) < 1e-15);

  const TrilinearParams complex_kappa(2, 1, 1, std::polar(0.3, 0.4));
  CHECK(std::abs(complex_kappa.kappa() - 0.3) < 1e-16);
  CHECK(std::abs(complex_kappa.kappa_phase() - 0.4) < 1e-15);

  CHECK_THROWS_AS(TrilinearParams(0, 1, 1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(TrilinearParams(1, -1, 1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(TrilinearParams(1, 1, 1, NAN), std::invalid_argument);
}

TEST_CASE("trilinear block examples") {
  const TrilinearParams p(2, 1, 1, 0.1);
  const auto vacuum = build_trilinear_block(p, block_basis_trilinear(0, 0));
  CHECK(vacuum.diag == std::vector{0.0});
  CHECK(vacuum.offdiag.empty());

  const auto b11 = build_trilinear_block(p, block_basis_trilinear(1, 1));
  CHECK(b11.diag == std::vector{2.0, 2.0});
  CHECK(b11.offdiag == std::vector{0.1});

  const auto b22 = build_trilinear_block(p, block_basis_trilinear(2, 2));
  CHECK(b22.diag == std::vector{4.0, 4.0, 4.0});
  CHECK(std::abs(b22.offdiag[0] - 0.2) < 1e-16);
  CHECK(std::abs(b22.offdiag[1] - std::sqrt(2.0) * 0.1) < 1e-16);

  const auto b25 = build_trilinear_block(p, block_basis_trilinear(2, 5));
  CHECK(b25.diag == std::vector{7.0, 7.0, 7.0});
  CHECK(std::abs(b25.offdiag[0] - 0.1 * std::sqrt(10.0)) < 1e-15);
  CHECK(std::abs(b25.offdiag[1] - 0.1 * std::sqrt(8.0)) < 1e-15);

  CHECK_THROWS_AS(build_trilinear_block(p, block_basis_microscopic(1, 1)), std::invalid_argument);
}

TEST_CASE("trilinear blocks are Jacobi matrices") {
  const TrilinearParams p(1.3, 0.4, 0.7, std::polar(0.25, -2.0));
  for (int m1 = 0; m1 <= 30; ++m1) {
    for (int m2 = 0; m2 <= 30; ++m2) {
      const auto basis = block_basis_trilinear(m1, m2);
      const auto t = build_trilinear_block(p, basis);
      REQUIRE(t.dimension() == basis.dimension());
      for (std::size_t k = 0; k < basis.dimension(); ++k) {
        REQUIRE(t.diag[k] == free_energy(p, basis[k]));
      }
      for (double e : t.offdiag) REQUIRE(e > 0.0);
    }
  }
}

TEST_CASE("microscopic block examples") {
  auto p = desk();
  const auto vacuum = build_microscopic_block(p, block_basis_microscopic(0, 0));
  CHECK(vacuum.dimension() == 1);
  CHECK(vacuum(0, 0) == 0.0);

  p.g_a = 0.03;
  p.g_b = 0.05;
  p.g_c = 0.07;
  const auto a = build_microscopic_block(p, block_basis_microscopic(1, 1));
  REQUIRE(a.dimension() == 4);
  CHECK(a(0, 0) == 2.0);
  CHECK(a(1, 1) == 2.0);
  CHECK(std::abs(a(2, 2) - 2.1) < 1e-15);
  CHECK(a(3, 3) == 2.2);
  CHECK(a(0, 2) == 0.05);
  CHECK(a(1, 3) == 0.03);
  CHECK(a(2, 3) == 0.07);
  CHECK(a(0, 1) == 0.0);
  CHECK(a(0, 3) == 0.0);
  CHECK(a(1, 2) == 0.0);
  CHECK_NOTHROW(a.validate());

  CHECK_THROWS_AS(build_microscopic_block(p, block_basis_trilinear(1, 1)), std::invalid_argument);
}

TEST_CASE("decoupled microscopic blocks are diagonal") {
  const auto p = desk(0.0);
  for (int q = 0; q <= 8; ++q) {
    const auto basis = block_basis_microscopic(q, q + 1);
    const auto a = build_microscopic_block(p, basis);
    std::vector<double> diag;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
      diag.push_back(a(i, i));
      for (std::size_t j = 0; j < a.dimension(); ++j) {
        if (i != j) REQUIRE(a(i, j) == 0.0);
      }
    }
    std::sort(diag.begin(), diag.end());
    CHECK(eig_symmetric(a).eigenvalues() == diag);
  }
}

TEST_CASE("microscopic blocks match the brute-force Hamiltonian after permutation") {
  MicroscopicParams p{2.0, 1.0, 1.3, -0.2, 1.1, 2.2, 0.07, 0.11, 0.05};
  for (int cutoff = 1; cutoff <= 4; ++cutoff) {
    const auto dense = oracle::microscopic_dense(p.omega_a, p.omega_b, p.omega_c, p.e0, p.e1, p.e2,
                                                 p.g_a, p.g_b, p.g_c, cutoff);
    const Eigen::Index dim = dense.h.rows();
    std::vector<bool> covered(dim, false);
    std::size_t matched = 0;
    // Every dense state inside the cutoff box belongs to exactly one block;
    // blocks fully inside the box reproduce the dense submatrix entrywise.
    for (int q1 = 0; q1 <= 2 * cutoff + 1; ++q1) {
      for (int q2 = 0; q2 <= 2 * cutoff + 1; ++q2) {
        const auto basis = block_basis_microscopic(q1, q2);
        std::vector<std::size_t> rows;
        bool inside = true;
        for (const auto& s : basis.states()) {
          if (std::max({s.n_a(), s.n_b(), s.n_c()}) > cutoff) {
            inside = false;
            continue;
          }
          rows.push_back(dense.index(*s.atom_level, s.n_a(), s.n_b(), s.n_c()));
        }
        for (auto r : rows) {
          REQUIRE_FALSE(covered[r]);
          covered[r] = true;
        }
        if (!inside) continue;
        const auto a = build_microscopic_block(p, basis);
        for (std::size_t i = 0; i < rows.size(); ++i) {
          for (std::size_t j = 0; j < rows.size(); ++j) {
            REQUIRE(a(i, j) == dense.h(rows[i], rows[j]));
          }
          // no coupling leaves the block
          double outside = 0.0;
          for (Eigen::Index k = 0; k < dim; ++k) {
            if (std::find(rows.begin(), rows.end(), std::size_t(k)) == rows.end()) {
              outside += std::abs(dense.h(rows[i], k));
            }
          }
          REQUIRE(outside == 0.0);
        }
        ++matched;
      }
    }
    CHECK(std::all_of(covered.begin(), covered.end(), [](bool c) { return c; }));
    CHECK(matched > 0);
  }
}

TEST_CASE("effective reduction") {
  const auto p = desk();
  CHECK(std::abs(p.delta() - 0.2) < 1e-15);
  CHECK(std::abs(p.Delta() - 0.1) < 1e-15);
  const auto eff = effective_from_microscopic(p);
  CHECK(std::abs(eff.params.kappa() - 5e-5) < 1e-17);
  CHECK(std::abs(eff.kappa_signed - 5e-5) < 1e-17);
  CHECK(std::abs(eff.stark_a - 5e-4) < 1e-17);
  CHECK(std::abs(eff.stark_b - 1e-3) < 1e-17);
  CHECK(std::abs(eff.params.omega_a() - (2.0 - 5e-4)) < 1e-15);
  CHECK(std::abs(eff.params.omega_b() - (1.0 - 1e-3)) < 1e-15);
  CHECK(eff.params.omega_c() == 1.0);

  auto broken = p;
  broken.g_b = 0.0;
  const auto eff_broken = effective_from_microscopic(broken);
  CHECK(eff_broken.params.kappa() == 0.0);
  CHECK(eff_broken.stark_b == 0.0);

  auto negative = p;
  negative.g_c = -0.01;
  CHECK(effective_from_microscopic(negative).kappa_signed < 0.0);
  CHECK(effective_from_microscopic(negative).params.kappa() > 0.0);

  auto resonant = p;
  resonant.e2 = 2.0;
  CHECK_THROWS_AS(effective_from_microscopic(resonant), std::domain_error);
  resonant = p;
  resonant.e1 = 1.0;
  CHECK_THROWS_AS(effective_from_microscopic(resonant), std::domain_error);
}

TEST_CASE("dispersive ratios") {
  const auto p = desk();
  CHECK(dispersive_ratios(p, {{0, 0, 0}, 0}).ratio_a == 0.0);
  CHECK(std::abs(dispersive_ratios(p, {{4, 0, 0}, 0}).ratio_a - 0.1) < 1e-15);
  CHECK(std::abs(dispersive_ratios(p, {{400, 0, 0}, 0}).ratio_a - 1.0) < 1e-14);
  CHECK(std::abs(dispersive_ratios(p, {{0, 9, 0}, 0}).ratio_b - 0.3) < 1e-14);
  auto resonant = p;
  resonant.e2 = 2.0;
  CHECK_THROWS_AS(dispersive_ratios(resonant, {{1, 0, 0}, 0}), std::domain_error);
}

TEST_CASE("microscopic parameter validation") {
  auto p = desk();
  CHECK_NOTHROW(p.validate());
  p.omega_c = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = desk();
  p.g_a = INFINITY;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
