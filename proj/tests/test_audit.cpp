#include <doctest.h>

#include <cmath>

#include "triwave/audit.hpp"
#include "triwave/models.hpp"

using namespace triwave;

TEST_CASE("interaction text reproduces the parameters exactly") {
  const TrilinearParams p(2.0000000000000004, 0.1 + 0.2, 1.0 / 3.0, 0.07);
  const auto e = parse_operator(trilinear_interaction_text(p));
  REQUIRE(e.modes == std::vector<char>{'a', 'b', 'c'});
  double wa = 0, wb = 0, wc = 0, kappa = 0;
  for (const auto& m : e.monomials) {
    if (m.factors == std::vector<Factor>{{0, true, 1}, {0, false, 1}}) wa = m.coefficient;
    if (m.factors == std::vector<Factor>{{1, true, 1}, {1, false, 1}}) wb = m.coefficient;
    if (m.factors == std::vector<Factor>{{2, true, 1}, {2, false, 1}}) wc = m.coefficient;
    if (m.factors.size() == 3) kappa = m.coefficient;
  }
  CHECK(wa == p.omega_a());
  CHECK(wb == p.omega_b());
  CHECK(wc == p.omega_c());
  CHECK(kappa == p.kappa());
  for (double d : resonance_defects(e)) CHECK(std::abs(std::abs(d) - std::abs(p.detuning())) < 1e-15);
}

TEST_CASE("sparse assembly equals the direct sum of block matrices") {
  SUBCASE("paper parameters at cutoffs (2,2,2)") {
    const auto r = audit_trilinear_blocks(TrilinearParams(2.0, 1.0, 1.0, 0.1), {2, 2, 2});
    CHECK(r.dimension == 27);
    CHECK(r.blocks == 19);  // (M1, M2) in [0,4]^2 with |M1 - M2| <= 2
    CHECK(r.cross_block_entries == 0);
    CHECK(r.max_abs_deviation == 0.0);
  }
  SUBCASE("every cutoff box up to 6, detuned and complex coupling") {
    const TrilinearParams detuned(1.7, 0.45, 0.9, std::polar(0.13, 2.2));
    for (int ca = 0; ca <= 6; ca += 2) {
      for (int cb = 1; cb <= 6; cb += 2) {
        for (int cc = 0; cc <= 6; cc += 3) {
          const auto r = audit_trilinear_blocks(detuned, {ca, cb, cc});
          CHECK(r.dimension == std::size_t((ca + 1) * (cb + 1) * (cc + 1)));
          CHECK(r.cross_block_entries == 0);
          CHECK(r.max_abs_deviation == 0.0);
        }
      }
    }
  }
  CHECK_THROWS_AS(audit_trilinear_blocks(TrilinearParams(2, 1, 1, 0.1), {50, 50, 50}, 1000),
                  DimensionLimitError);
  CHECK_THROWS_AS(audit_trilinear_blocks(TrilinearParams(2, 1, 1, 0.1), {2, 2}), std::invalid_argument);
}
