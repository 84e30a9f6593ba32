#include <cmath>
#include <random>

#include "doctest.h"
#include "twistlab/error.hpp"
#include "twistlab/linalg.hpp"

using namespace twistlab;

namespace {

ComplexMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix m(r, c);
  for (auto& x : m.entries()) {
    const double re = n(rng), im = n(rng);
    x = Complex(re, im);
  }
  return m;
}

ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  ComplexMatrix m = random_matrix(n, n, rng);
  ComplexMatrix h = m + m.adjoint();
  h *= 0.5;
  return h;
}

ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng) { return hermitian_eigen(random_hermitian(n, rng)).vectors; }

double gram_top(const ComplexMatrix& m) {
  const auto eig = hermitian_eigen(m.adjoint() * m);
  return std::sqrt(std::max(0.0, eig.values.back()));
}

}  // namespace

TEST_CASE("hermitian_eigen on small examples") {
  const Complex i(0, 1);
  auto e = hermitian_eigen(ComplexMatrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(e.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
  e = hermitian_eigen(ComplexMatrix::from_rows({{2, 0}, {0, 2}}));
  CHECK(e.values[0] == doctest::Approx(2.0));
  CHECK(e.values[1] == doctest::Approx(2.0));
  // lambda^2 - 2 lambda = 0
  e = hermitian_eigen(ComplexMatrix::from_rows({{1, i}, {-i, 1}}));
  CHECK(std::abs(e.values[0]) < 1e-14);
  CHECK(e.values[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("hermitian_eigen rejects bad input") {
  CHECK_THROWS_AS(hermitian_eigen(ComplexMatrix::from_rows({{0, 1}, {2, 0}})), Error);
  CHECK_THROWS_AS(hermitian_eigen(ComplexMatrix(2, 3)), Error);
  try {
    hermitian_eigen(ComplexMatrix::from_rows({{0, 1}, {2, 0}}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_hermitian);
  }
}

TEST_CASE("hermitian_eigen residuals, orthonormality and reconstruction") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {1u, 2u, 5u, 17u, 40u}) {
    const ComplexMatrix m = random_hermitian(n, rng);
    const auto e = hermitian_eigen(m);
    const double scale = m.frobenius_norm();
    for (std::size_t j = 1; j < n; ++j) CHECK(e.values[j - 1] <= e.values[j]);
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = e.vectors.column(j);
      auto mv = m.apply(v);
      for (std::size_t r = 0; r < n; ++r) mv[r] -= e.values[j] * v[r];
      CHECK(l2_norm(mv) <= 1e-10 * scale);
    }
    const ComplexMatrix gram = e.vectors.adjoint() * e.vectors;
    CHECK((gram - ComplexMatrix::identity(n)).max_abs() <= 1e-10);
    std::vector<Complex> d(e.values.begin(), e.values.end());
    const ComplexMatrix back = e.vectors * ComplexMatrix::diagonal(d) * e.vectors.adjoint();
    CHECK((back - m).frobenius_norm() <= 1e-9 * scale);
  }
}

TEST_CASE("operator_norm examples") {
  CHECK(operator_norm(ComplexMatrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(operator_norm(ComplexMatrix::from_rows({{1, -1}, {1, 1}})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(operator_norm(ComplexMatrix::from_rows({{3, 0}, {0, 1}})) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(operator_norm(ComplexMatrix(3, 3)) == 0.0);
}

TEST_CASE("operator_norm agrees with the Gram eigenvalue on 200 random matrices") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> dim(1, 64);
  for (int t = 0; t < 200; ++t) {
    const ComplexMatrix m = random_matrix(dim(rng), dim(rng), rng);
    const double expected = gram_top(m);
    CHECK(std::abs(operator_norm(m) - expected) <= 1e-9 * expected);
  }
}

TEST_CASE("operator_norm is unitarily invariant") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {3u, 8u, 20u}) {
    const ComplexMatrix m = random_matrix(n, n, rng);
    const ComplexMatrix u = random_unitary(n, rng), w = random_unitary(n, rng);
    const double a = operator_norm(m), b = operator_norm(u * m * w);
    CHECK(std::abs(a - b) <= 1e-9 * a);
  }
}

TEST_CASE("operator_norm is deterministic") {
  std::mt19937_64 rng(8);
  const ComplexMatrix m = random_matrix(30, 30, rng);
  CHECK(operator_norm(m) == operator_norm(m));
}

TEST_CASE("rank_eps and singular values") {
  CHECK(rank_eps(ComplexMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 0}}), 1e-8) == 2);
  CHECK(rank_eps(ComplexMatrix(4, 4), 1e-8) == 0);
  std::vector<Complex> u{0.2, Complex(0, 0.4), 0.4, Complex(0.3, -0.3), 0.0};
  const double nu = l2_norm(u);
  for (auto& x : u) x /= nu;
  ComplexMatrix outer(5, 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) outer(i, j) = u[i] * std::conj(u[j]);
  CHECK(rank_eps(outer, 1e-8) == 1);
  const auto sv = singular_values(ComplexMatrix::from_rows({{3, 0}, {0, 1}, {0, 0}}));
  REQUIRE(sv.size() == 2);
  CHECK(sv[0] == doctest::Approx(3.0));
  CHECK(sv[1] == doctest::Approx(1.0));
}

TEST_CASE("general_eigenvalues of non-normal matrices") {
  // Upper triangular: eigenvalues on the diagonal.
  const ComplexMatrix t = ComplexMatrix::from_rows({{1, 5, 2}, {0, Complex(0, 2), 7}, {0, 0, -3}});
  auto ev = general_eigenvalues(t);
  REQUIRE(ev.size() == 3);
  for (Complex expected : {Complex(1), Complex(0, 2), Complex(-3)}) {
    double best = 1e9;
    for (auto z : ev) best = std::min(best, std::abs(z - expected));
    CHECK(best < 1e-10);
  }
  // Companion matrix of (z - 1)(z - 2)(z + 0.5i).
  const Complex r1 = 1, r2 = 2, r3 = Complex(0, -0.5);
  const Complex c2 = -(r1 + r2 + r3), c1 = r1 * r2 + r1 * r3 + r2 * r3, c0 = -r1 * r2 * r3;
  const ComplexMatrix comp = ComplexMatrix::from_rows({{0, 0, -c0}, {1, 0, -c1}, {0, 1, -c2}});
  ev = general_eigenvalues(comp);
  for (Complex expected : {r1, r2, r3}) {
    double best = 1e9;
    for (auto z : ev) best = std::min(best, std::abs(z - expected));
    CHECK(best < 1e-9);
  }
}

TEST_CASE("null_space spans the kernel") {
  const ComplexMatrix m = ComplexMatrix::from_rows({{1, 1, 0}, {0, 0, 1}, {2, 2, 0}, {0, 0, 0}});
  const ComplexMatrix n = null_space(m, 1e-10);
  REQUIRE(n.cols() == 1);
  const auto v = n.column(0);
  CHECK(l2_norm(m.apply(v)) < 1e-12);
  CHECK(l2_norm(v) == doctest::Approx(1.0));
}
