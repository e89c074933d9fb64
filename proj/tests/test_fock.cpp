#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "triwave/fock.hpp"

using namespace triwave;

namespace {

FockOccupation tri(int a, int b, int c) { return {{a, b, c}, std::nullopt}; }
FockOccupation mic(int level, int a, int b, int c) { return {{a, b, c}, level}; }

}  // namespace

TEST_CASE("trilinear block bases match hand enumeration") {
  CHECK(block_basis_trilinear(0, 0).states() == std::vector{tri(0, 0, 0)});
  CHECK(block_basis_trilinear(1, 1).states() == std::vector{tri(0, 1, 1), tri(1, 0, 0)});
  const auto b = block_basis_trilinear(2, 5);
  CHECK(b.states() == std::vector{tri(0, 2, 5), tri(1, 1, 4), tri(2, 0, 3)});
  CHECK(b.dimension() == 3);
  CHECK_THROWS_AS(block_basis_trilinear(-1, 0), std::invalid_argument);
}

TEST_CASE("microscopic block bases match hand enumeration") {
  CHECK(block_basis_microscopic(0, 0).states() == std::vector{mic(0, 0, 0, 0)});
  CHECK(block_basis_microscopic(1, 1).states() ==
        std::vector{mic(0, 0, 1, 1), mic(0, 1, 0, 0), mic(1, 0, 0, 1), mic(2, 0, 0, 0)});
  CHECK(block_basis_microscopic(1, 0).states() == std::vector{mic(0, 0, 1, 0), mic(1, 0, 0, 0)});
  // q2 = 0 leaves level 2 empty; q1 = 0 leaves levels 1 and 2 empty
  CHECK(block_basis_microscopic(0, 3).states() == std::vector{mic(0, 0, 0, 3)});
}

TEST_CASE("every basis state carries its block label, exhaustively") {
  for (int m1 = 0; m1 <= 50; ++m1) {
    for (int m2 = 0; m2 <= 50; ++m2) {
      const auto b = block_basis_trilinear(m1, m2);
      REQUIRE(b.dimension() == static_cast<std::size_t>(std::min(m1, m2) + 1));
      for (std::size_t i = 0; i < b.dimension(); ++i) {
        const auto& s = b[i];
        REQUIRE(s.n_a() + s.n_b() == m1);
        REQUIRE(s.n_a() + s.n_c() == m2);
        REQUIRE(b.find(s) == i);
      }
    }
  }
  for (int q1 = 0; q1 <= 20; ++q1) {
    for (int q2 = 0; q2 <= 20; ++q2) {
      const auto b = block_basis_microscopic(q1, q2);
      REQUIRE(b.dimension() <= static_cast<std::size_t>(3 * std::min(q1, q2) + 2));
      for (std::size_t i = 0; i < b.dimension(); ++i) {
        const auto& s = b[i];
        const int p1 = *s.atom_level == 1 ? 1 : 0;
        const int p2 = *s.atom_level == 2 ? 1 : 0;
        REQUIRE(s.n_a() + s.n_b() + p1 + p2 == q1);
        REQUIRE(s.n_a() + s.n_c() + p2 == q2);
        REQUIRE(b.find(s) == i);
      }
    }
  }
}

TEST_CASE("find rejects states of other blocks or models") {
  const auto b = block_basis_trilinear(2, 2);
  CHECK_FALSE(b.find(tri(0, 1, 1)).has_value());
  CHECK_FALSE(b.find(mic(0, 0, 2, 2)).has_value());
  const auto m = block_basis_microscopic(1, 1);
  CHECK_FALSE(m.find(tri(1, 0, 0)).has_value());
  CHECK_FALSE(m.find(mic(1, 1, 0, 0)).has_value());
}

TEST_CASE("occupation validation") {
  CHECK_NOTHROW(validate(tri(1, 2, 3), ModelKind::trilinear));
  CHECK_THROWS_AS(validate(tri(-1, 0, 0), ModelKind::trilinear), std::invalid_argument);
  CHECK_THROWS_AS(validate(mic(0, 0, 0, 0), ModelKind::trilinear), std::invalid_argument);
  CHECK_THROWS_AS(validate(tri(0, 0, 0), ModelKind::microscopic), std::invalid_argument);
  CHECK_THROWS_AS(validate(mic(3, 0, 0, 0), ModelKind::microscopic), std::invalid_argument);
}

TEST_CASE("coherent amplitudes") {
  CHECK(coherent_amplitude(0.0, 0) == Complex(1.0, 0.0));
  CHECK(coherent_amplitude(0.0, 3) == Complex(0.0, 0.0));
  CHECK(std::abs(coherent_amplitude(1.0, 2) - std::exp(-0.5) / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(coherent_amplitude(1.0, 2) - 0.42888) < 1e-5);

  // phase: alpha^n carries n * arg(alpha) on both sides of the log-space switch
  const Complex alpha = std::polar(2.5, 0.7);
  for (int n : {5, 20, 21, 40}) {
    const Complex z = coherent_amplitude(alpha, n);
    long double log_mag = -0.5L * 6.25L + n * std::log(2.5L) - 0.5L * std::lgamma(n + 1.0L);
    CHECK(std::abs(std::abs(z) - double(std::exp(log_mag))) < 1e-14);
    CHECK(std::abs(std::remainder(std::arg(z) - n * 0.7, 2 * std::numbers::pi)) < 1e-12);
  }
  // large amplitudes and photon numbers stay finite
  const Complex big = coherent_amplitude(10.0, 200);
  CHECK(std::isfinite(big.real()));
  const long double log_big = -50.0L + 200 * std::log(10.0L) - 0.5L * std::lgamma(201.0L);
  CHECK(std::abs(std::abs(big) - double(std::exp(log_big))) < 1e-22);
  CHECK(std::abs(coherent_amplitude(10.0, 100)) > 0.03);
}

TEST_CASE("truncated photon distribution deficit equals the Poisson tail") {
  for (double r : {0.0, 0.3, 1.0, 2.0, 3.0, 4.0}) {
    double sum = 0.0;
    double previous = -1.0;
    for (int n = 0; n <= 80; ++n) {
      sum += std::norm(coherent_amplitude(r, n));
      CHECK(sum >= previous);
      previous = sum;
      const double tail = poisson_upper_tail(r * r, n);
      CHECK(std::abs((1.0 - sum) - tail) <= 1e-12);
      CHECK(std::abs(tail - double(oracle::poisson_tail_brute(r * r, n))) <= 1e-14);
    }
  }
}

TEST_CASE("rectangle tail matches brute-force enumeration") {
  const std::array<double, 3> means{0.7, 1.3, 0.4};
  for (int m1 : {0, 2, 5}) {
    for (int m2 : {0, 3, 6}) {
      long double inside = 0.0L;
      for (int a = 0; a <= 60; ++a) {
        for (int b = 0; b <= 60; ++b) {
          for (int c = 0; c <= 60; ++c) {
            if (a + b <= m1 && a + c <= m2) {
              inside += poisson_pmf(means[0], a) * poisson_pmf(means[1], b) *
                        poisson_pmf(means[2], c);
            }
          }
        }
      }
      CHECK(std::abs(rectangle_tail(means, m1, m2) - double(1.0L - inside)) < 1e-13);
    }
  }
}

TEST_CASE("coherent block weights") {
  SUBCASE("vacuum") {
    const auto w = coherent_block_weights({}, ModelKind::trilinear, 1e-8);
    CHECK(w.weights.size() == 1);
    CHECK(w.weights.at({0, 0}) == 1.0);
    CHECK(w.tail_bound == 0.0);
  }
  SUBCASE("mode a only populates diagonal blocks") {
    CoherentSpec spec{{Complex(1.0, 0.0), 0.0, 0.0}};
    const auto w = coherent_block_weights(spec, ModelKind::trilinear, 1e-10);
    double factorial = 1.0;
    for (int n = 0; n <= w.m1_max; ++n) {
      if (n > 0) factorial *= n;
      CHECK(std::abs(w.weights.at({n, n}) - std::exp(-1.0) / factorial) < 1e-15);
    }
    for (const auto& [idx, weight] : w.weights) {
      if (idx.m1 != idx.m2) CHECK(weight == 0.0);
    }
  }
  SUBCASE("retained mass meets the tail bound") {
    CoherentSpec spec{{Complex(0.5, 0.0), Complex(0.5, 0.0), Complex(0.5, 0.0)}};
    for (auto kind : {ModelKind::trilinear, ModelKind::microscopic}) {
      const auto w = coherent_block_weights(spec, kind, 1e-8);
      double retained = 0.0;
      for (const auto& [idx, weight] : w.weights) retained += weight;
      CHECK(retained >= 1.0 - 1e-8);
      CHECK(w.tail_bound <= 1e-8);
      CHECK(w.weights.size() <= 200);
      CHECK(retained + w.tail_bound >= 1.0 - 1e-12);
      CHECK(std::abs(retained + w.tail_bound - 1.0) <= 1e-12);
    }
  }
  SUBCASE("rectangle is minimal along each axis") {
    CoherentSpec spec{{Complex(0.8, 0.1), Complex(-0.3, 0.8), Complex(0.0, 0.8)}};
    const auto w = coherent_block_weights(spec, ModelKind::trilinear, 1e-8);
    const std::array<double, 3> means{std::norm(spec.amplitudes[0]), std::norm(spec.amplitudes[1]),
                                      std::norm(spec.amplitudes[2])};
    CHECK(rectangle_tail(means, w.m1_max - 1, w.m2_max) > 1e-8);
    CHECK(rectangle_tail(means, w.m1_max, w.m2_max - 1) > 1e-8);
  }
  SUBCASE("epsilon must lie strictly inside (0, 1)") {
    for (double eps : {0.0, -1e-3, 1.0, 2.0}) {
      CHECK_THROWS_AS(coherent_block_weights({}, ModelKind::trilinear, eps), std::invalid_argument);
    }
  }
}
