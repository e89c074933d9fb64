#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "triwave/eigensolver.hpp"
#include "triwave/models.hpp"

using namespace triwave;

namespace {

// For every gap between computed eigenvalues the Sturm count at the midpoint
// must equal the number of eigenvalues below it.
void check_sturm_midpoints(const TridiagonalSymmetric& t, const std::vector<double>& values) {
  REQUIRE(sturm_count(t, values.front() - 1.0 - t.norm_inf()) == 0);
  REQUIRE(sturm_count(t, values.back() + 1.0 + t.norm_inf()) == values.size());
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (values[i + 1] - values[i] <= 1e-13) continue;
    const double mid = 0.5 * (values[i] + values[i + 1]);
    REQUIRE(sturm_count(t, mid) == i + 1);
  }
}

TridiagonalSymmetric random_jacobi(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TridiagonalSymmetric t;
  for (std::size_t i = 0; i < n; ++i) t.diag.push_back(u(rng));
  for (std::size_t i = 0; i + 1 < n; ++i) t.offdiag.push_back(0.05 + std::abs(u(rng)));
  return t;
}

}  // namespace

TEST_CASE("tridiagonal hand spectra") {
  SUBCASE("1x1") {
    const auto s = eig_tridiagonal({{5.0}, {}});
    CHECK(s.eigenvalues() == std::vector{5.0});
    CHECK(s.eigenvector(0)[0] == 1.0);
  }
  SUBCASE("2x2") {
    const auto s = eig_tridiagonal({{2.0, 2.0}, {0.1}});
    CHECK(std::abs(s.eigenvalue(0) - 1.9) < 1e-14);
    CHECK(std::abs(s.eigenvalue(1) - 2.1) < 1e-14);
    const double h = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s.eigenvector(0)[0] - h) < 1e-14);
    CHECK(std::abs(s.eigenvector(0)[1] + h) < 1e-14);
    CHECK(std::abs(s.eigenvector(1)[0] - h) < 1e-14);
    CHECK(std::abs(s.eigenvector(1)[1] - h) < 1e-14);
    const TridiagonalSymmetric t{{2.0, 2.0}, {0.1}};
    CHECK(residual_report(t, s) <= 1e-15);
  }
  SUBCASE("3x3") {
    const double k = 0.1;
    const auto s = eig_tridiagonal({{4.0, 4.0, 4.0}, {2 * k, std::sqrt(2.0) * k}});
    CHECK(std::abs(s.eigenvalue(0) - (4.0 - std::sqrt(6.0) * k)) < 1e-14);
    CHECK(std::abs(s.eigenvalue(1) - 4.0) < 1e-14);
    CHECK(std::abs(s.eigenvalue(2) - (4.0 + std::sqrt(6.0) * k)) < 1e-14);
  }
  SUBCASE("empty") { CHECK(eig_tridiagonal({}).size() == 0); }
}

TEST_CASE("dense hand spectra") {
  SymmetricDense id(3);
  for (std::size_t i = 0; i < 3; ++i) id.set(i, i, 1.0);
  CHECK(eig_symmetric(id).eigenvalues() == std::vector{1.0, 1.0, 1.0});
  CHECK(orthogonality_defect(eig_symmetric(id)) == 0.0);

  SymmetricDense d(3);
  d.set(0, 0, 3.0);
  d.set(1, 1, 1.0);
  d.set(2, 2, 2.0);
  const auto s = eig_symmetric(d);
  CHECK(s.eigenvalues() == std::vector{1.0, 2.0, 3.0});
  CHECK(s.eigenvector(0)[1] == 1.0);

  SUBCASE("microscopic (1,1) block against inertia bisection") {
    MicroscopicParams p{2, 1, 1, 0, 1.1, 2.2, 0.01, 0.01, 0.01};
    const auto a = build_microscopic_block(p, block_basis_microscopic(1, 1));
    const auto values = eig_symmetric(a).eigenvalues();
    const auto reference = oracle::bisect_eigenvalues(a);
    for (std::size_t i = 0; i < values.size(); ++i) CHECK(std::abs(values[i] - reference[i]) < 1e-10);
  }
}

TEST_CASE("sturm count examples") {
  const TridiagonalSymmetric t{{2.0, 2.0}, {0.1}};
  CHECK(sturm_count(t, 2.0) == 1);
  CHECK(sturm_count(t, 1.0) == 0);
  CHECK(sturm_count(t, 3.0) == 2);
  // strictly below: an exact eigenvalue is not counted
  CHECK(sturm_count({{1.0, 3.0}, {0.0}}, 1.0) == 0);
  CHECK(sturm_count({{1.0, 3.0}, {0.0}}, 3.0) == 1);
}

TEST_CASE("residual report") {
  SymmetricDense id(4);
  for (std::size_t i = 0; i < 4; ++i) id.set(i, i, 1.0);
  const auto s = eig_symmetric(id);
  std::vector<double> values = s.eigenvalues();
  values[2] += 1e-3;
  std::vector<double> vectors;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto v = s.eigenvector(i);
    vectors.insert(vectors.end(), v.begin(), v.end());
  }
  const Spectrum perturbed(values, vectors, 4);
  CHECK(std::abs(residual_report(id, perturbed) - 1e-3) < 1e-15);

  SymmetricDense other(3);
  CHECK_THROWS_AS(residual_report(other, s), std::invalid_argument);
  CHECK_THROWS_AS(residual_report(TridiagonalSymmetric{{1.0}, {}}, s), std::invalid_argument);
}

TEST_CASE("random dense matrices") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 5 + 9 * seed;
    const auto a = oracle::random_symmetric(n, seed);
    const auto s = eig_symmetric(a);
    CHECK(residual_report(a, s) <= 1e-11 * (1.0 + a.norm_inf()));
    CHECK(orthogonality_defect(s) <= 1e-10);
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += a(i, i);
    const double sum = std::accumulate(s.eigenvalues().begin(), s.eigenvalues().end(), 0.0);
    CHECK(std::abs(sum - trace) <= 1e-10 * (1.0 + std::abs(trace)));
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = s.eigenvector(i);
      double norm = 0.0;
      for (double x : v) norm += x * x;
      CHECK(std::abs(norm - 1.0) <= 1e-12);
      const auto lead = std::find_if(v.begin(), v.end(), [](double x) { return std::abs(x) > 1e-12; });
      CHECK(*lead > 0.0);
    }
    const auto values_only = eigenvalues_symmetric(a);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(values_only[i] - s.eigenvalue(i)) <= 1e-12 * (1.0 + a.norm_inf()));
    }
    if (n <= 40) {
      const auto reference = oracle::bisect_eigenvalues(a);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(reference[i] - s.eigenvalue(i)) <= 1e-10);
    }
  }
  const auto a = oracle::random_symmetric(50, 50);
  CHECK(residual_report(a, eig_symmetric(a)) <= 1e-11);
}

TEST_CASE("householder reduction is an orthogonal similarity") {
  const std::size_t n = 12;
  const auto a = oracle::random_symmetric(n, 77);
  std::vector<double> q;
  const auto t = householder_tridiagonalize(a, &q);
  REQUIRE(q.size() == n * n);
  Eigen::MatrixXd qm(n, n), am(n, n), tm = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      qm(i, j) = q[i * n + j];
      am(i, j) = a(i, j);
    }
    tm(i, i) = t.diag[i];
    if (i + 1 < n) tm(i, i + 1) = tm(i + 1, i) = t.offdiag[i];
  }
  CHECK((qm.transpose() * qm - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((qm * tm * qm.transpose() - am).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("jacobi matrices: simple spectra and sturm agreement") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto t = random_jacobi(seed * 20, seed);
    const auto s = eig_tridiagonal(t);
    CHECK(residual_report(t, s) <= 1e-11 * (1.0 + t.norm_inf()));
    CHECK(orthogonality_defect(s) <= 1e-10);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) CHECK(s.eigenvalue(i + 1) - s.eigenvalue(i) > 1e-13);
    check_sturm_midpoints(t, s.eigenvalues());
    CHECK(eigenvalues_tridiagonal(t) == s.eigenvalues());
  }
}

TEST_CASE("trilinear blocks up to dimension 400") {
  const TrilinearParams p(1.0, 0.5, 0.5, 0.2);
  for (int m : {1, 10, 50, 120, 200, 399}) {
    const auto t = build_trilinear_block(p, block_basis_trilinear(m, m));
    const auto s = eig_tridiagonal(t);
    CHECK(residual_report(t, s) <= 1e-11 * (1.0 + t.norm_inf()));
    CHECK(orthogonality_defect(s) <= 1e-10);
    check_sturm_midpoints(t, s.eigenvalues());
  }
}

TEST_CASE("graded and degenerate inputs converge") {
  TridiagonalSymmetric graded;
  for (int i = 0; i < 30; ++i) graded.diag.push_back(std::pow(10.0, -i / 3.0));
  for (int i = 0; i < 29; ++i) graded.offdiag.push_back(std::pow(10.0, -i / 3.0 - 0.5));
  const auto s = eig_tridiagonal(graded);
  CHECK(residual_report(graded, s) <= 1e-11 * (1.0 + graded.norm_inf()));

  TridiagonalSymmetric zero{std::vector<double>(8, 0.0), std::vector<double>(7, 0.0)};
  CHECK(eig_tridiagonal(zero).eigenvalues() == std::vector<double>(8, 0.0));
}

TEST_CASE("non-finite input is rejected") {
  CHECK_THROWS_AS(eig_tridiagonal({{1.0, NAN}, {0.1}}), std::invalid_argument);
  CHECK_THROWS_AS(eig_tridiagonal({{1.0, 1.0}, {}}), std::invalid_argument);
}
