#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eigenfeat/error.hpp"
#include "eigenfeat/rng.hpp"
#include "eigenfeat/svd.hpp"

using namespace eigenfeat;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an eigenfeat::Error");
  return ErrorCode::io;
}

Matrix random_matrix(Rng& rng, std::size_t n, std::size_t m) {
  Matrix x(n, m);
  for (auto& v : x.values()) v = rng.normal();
  return x;
}

Matrix random_symmetric(Rng& rng, std::size_t n) {
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) s(i, j) = s(j, i) = rng.normal();
  return s;
}

/// Orthogonal matrix from modified Gram-Schmidt on a random square matrix.
Matrix random_orthogonal(Rng& rng, std::size_t n) {
  Matrix q = random_matrix(rng, n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d += q(i, j) * q(i, k);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= d * q(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += q(i, j) * q(i, j);
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
  }
  return q;
}

double max_abs(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
  return worst;
}

double orthonormality_error(const Matrix& q, std::size_t cols) {
  double worst = 0.0;
  for (std::size_t a = 0; a < cols; ++a)
    for (std::size_t b = 0; b < cols; ++b) {
      double d = 0.0;
      for (std::size_t i = 0; i < q.rows(); ++i) d += q(i, a) * q(i, b);
      worst = std::max(worst, std::abs(d - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

Matrix reconstruct(const SvdResult& s, std::size_t r) {
  Matrix x(s.u.rows(), s.v.rows());
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t j = 0; j < x.cols(); ++j)
      for (std::size_t i = 0; i < x.rows(); ++i) x(i, j) += s.sigma[k] * s.u(i, k) * s.v(j, k);
  return x;
}

double frob_diff(const Matrix& a, const Matrix& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

void check_invariants(const Matrix& x, const SvdResult& s) {
  const std::size_t r = std::min(x.rows(), x.cols());
  REQUIRE(s.sigma.size() == r);
  for (std::size_t i = 0; i + 1 < r; ++i) CHECK(s.sigma[i] >= s.sigma[i + 1]);
  CHECK(s.sigma.back() >= 0.0);
  CHECK(orthonormality_error(s.u, r) < 1e-10);
  CHECK(orthonormality_error(s.v, r) < 1e-10);
  CHECK(frob_diff(reconstruct(s, r), x) / x.frobenius_norm() < 1e-10);
}

}  // namespace

TEST_CASE("gram of orthonormal columns is the identity") {
  Rng rng(1);
  const Matrix q = random_orthogonal(rng, 5);
  CHECK(max_abs(gram(q), Matrix::identity(5)) < 1e-12);
}

TEST_CASE("gram matches the naive inner-product loop") {
  Rng rng(2);
  const Matrix x = random_matrix(rng, 10, 4);
  const Matrix g = gram(x);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      double d = 0.0;
      for (std::size_t k = 0; k < 10; ++k) d += x(k, i) * x(k, j);
      CHECK(std::abs(g(i, j) - d) < 1e-12);
      CHECK(g(i, j) == g(j, i));
    }
}

TEST_CASE("duplicated column gives equal gram rows") {
  Rng rng(3);
  Matrix x = random_matrix(rng, 6, 3);
  std::copy(x.column(0).begin(), x.column(0).end(), x.column(2).begin());
  const Matrix g = gram(x);
  for (std::size_t j = 0; j < 3; ++j) CHECK(g(0, j) == g(2, j));
  CHECK(svd_via_gram(x).rank == 2);
}

TEST_CASE("jacobi on a diagonal matrix") {
  Matrix d(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 5.0;
  d(2, 2) = 3.0;
  const auto e = jacobi_eigh(d);
  CHECK(e.values == std::vector<double>{5.0, 3.0, 1.0});
  CHECK(std::abs(e.vectors(1, 0)) == 1.0);
  CHECK(std::abs(e.vectors(2, 1)) == 1.0);
  CHECK(std::abs(e.vectors(0, 2)) == 1.0);
}

TEST_CASE("jacobi on the 2x2 closed form") {
  const Matrix s(2, 2, {2.0, 1.0, 1.0, 2.0});
  const auto e = jacobi_eigh(s);
  // roots of (2 - l)^2 - 1
  CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
  const double r = 1.0 / std::numbers::sqrt2;
  CHECK(std::abs(std::abs(e.vectors(0, 0)) - r) < 1e-14);
  CHECK(e.vectors(0, 0) * e.vectors(1, 0) > 0.0);
  CHECK(e.vectors(0, 1) * e.vectors(1, 1) < 0.0);
}

TEST_CASE("jacobi reconstruction, residuals and orthonormality") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const std::size_t n = 2 + seed % 7;
    const Matrix s = random_symmetric(rng, n);
    const auto e = jacobi_eigh(s);
    CHECK(orthonormality_error(e.vectors, n) < 1e-10);
    Matrix rec(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rec(i, j) += e.values[k] * e.vectors(i, k) * e.vectors(j, k);
    CHECK(max_abs(rec, s) < 1e-10);
    for (std::size_t k = 0; k < n; ++k) {
      double res = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double sq = 0.0;
        for (std::size_t j = 0; j < n; ++j) sq += s(i, j) * e.vectors(j, k);
        res += std::pow(sq - e.values[k] * e.vectors(i, k), 2);
      }
      CHECK(std::sqrt(res) < 1e-12 * s.frobenius_norm() * 10.0);
    }
  }
}

TEST_CASE("jacobi eigenvalues are invariant under orthogonal similarity") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed + 100);
    const Matrix s = random_symmetric(rng, 6);
    const Matrix q = random_orthogonal(rng, 6);
    Matrix t = multiply(multiply(q.transposed(), s), q);
    // restore exact symmetry lost to rounding
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < i; ++j) t(i, j) = t(j, i) = 0.5 * (t(i, j) + t(j, i));
    const auto a = jacobi_eigh(s).values;
    const auto b = jacobi_eigh(t).values;
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
  }
}

TEST_CASE("jacobi error paths") {
  Matrix s(2, 2, {1.0, 2.0, 2.5, 1.0});
  CHECK(code_of([&] { jacobi_eigh(s); }) == ErrorCode::invalid_argument);
  Rng rng(9);
  const Matrix big = random_symmetric(rng, 12);
  CHECK(code_of([&] { jacobi_eigh(big, 1e-12, 1); }) == ErrorCode::non_convergence);
}

TEST_CASE("svd of an exact rank-1 matrix") {
  const std::vector<double> u = {1.0, 2.0, -1.0, 0.5};
  const std::vector<double> v = {0.6, -0.8, 0.0};
  Matrix x(4, 3);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = 2.5 * u[i] * v[j];
  const SvdResult s = svd_via_gram(x);
  const double unorm = std::sqrt(1.0 + 4.0 + 1.0 + 0.25);
  CHECK(s.sigma[0] == doctest::Approx(2.5 * unorm).epsilon(1e-12));
  CHECK(s.sigma[1] < 1e-10 * s.sigma[0]);
  CHECK(s.rank == 1);
  const auto u1 = canonical_sign(s.u.column(0));
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(u1[i] - u[i] / unorm) < 1e-12);
  check_invariants(x, s);
  CHECK(max_abs(truncate(s, 1), x) < 1e-12);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto col = rank1_column(s, k);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(col[i] - x(i, k)) < 1e-12);
  }
}

TEST_CASE("svd of orthogonal columns") {
  Matrix x(3, 2);
  x(0, 0) = 3.0;
  x(1, 1) = 2.0;
  const SvdResult s = svd_via_gram(x);
  CHECK(s.sigma[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(s.sigma[1] == doctest::Approx(2.0).epsilon(1e-15));
  check_invariants(x, s);
}

TEST_CASE("svd agrees with the dual-gram oracle") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const Matrix x = random_matrix(rng, 12, 5);
    const SvdResult s = svd_via_gram(x);
    check_invariants(x, s);
    // eigenvalues of the n x n matrix X X^T
    const auto dual = jacobi_eigh(gram(x.transposed()));
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(s.sigma[i] - std::sqrt(std::max(dual.values[i], 0.0))) < 1e-9);
    for (std::size_t i = 5; i < 12; ++i) CHECK(std::abs(dual.values[i]) < 1e-9);
    // singular values of the transpose
    const SvdResult t = svd_via_gram(x.transposed());
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(s.sigma[i] - t.sigma[i]) < 1e-9);
    check_invariants(x.transposed(), t);
  }
}

TEST_CASE("singular values survive column sign flips") {
  Rng rng(4);
  Matrix x = random_matrix(rng, 9, 4);
  const SvdResult a = svd_via_gram(x);
  for (auto& v : x.column(2)) v = -v;
  const SvdResult b = svd_via_gram(x);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(a.sigma[i] - b.sigma[i]) < 1e-12 * a.sigma[0]);
}

TEST_CASE("small singular values keep full precision") {
  Rng rng(5);
  const Matrix u = random_orthogonal(rng, 8);
  const Matrix v = random_orthogonal(rng, 4);
  const std::vector<double> sig = {1.0, 1e-3, 1e-6, 1e-9};
  Matrix x(8, 4);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 4; ++j) x(i, j) += sig[k] * u(i, k) * v(j, k);
  const SvdResult s = svd_via_gram(x);
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(s.sigma[k] - sig[k]) < 1e-14);
  check_invariants(x, s);
  CHECK(s.rank == 4);
}

TEST_CASE("truncation residual identity across 100 seeds") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed);
    const std::size_t n = 6 + seed % 7;
    const std::size_t m = 2 + seed % 5;
    const Matrix x = random_matrix(rng, n, m);
    const SvdResult s = svd_via_gram(x);
    REQUIRE(s.rank == m);
    for (std::size_t r = 1; r <= s.rank; ++r) {
      double tail = 0.0;
      for (std::size_t i = r; i < s.sigma.size(); ++i) tail += s.sigma[i] * s.sigma[i];
      const double resid = frob_diff(x, truncate(s, r));
      if (r == s.rank) {
        CHECK(resid / x.frobenius_norm() < 1e-10);
      } else {
        CHECK(std::abs(resid * resid - tail) <= 1e-9 * tail);
      }
    }
  }
}

TEST_CASE("truncate and rank1_column") {
  Rng rng(6);
  const Matrix x = random_matrix(rng, 10, 6);
  const SvdResult s = svd_via_gram(x);
  double tail = 0.0;
  for (std::size_t i = 2; i < 6; ++i) tail += s.sigma[i] * s.sigma[i];
  CHECK(std::abs(frob_diff(x, truncate(s, 2)) - std::sqrt(tail)) < 1e-9 * std::sqrt(tail));
  CHECK(code_of([&] { truncate(s, 0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { truncate(s, 7); }) == ErrorCode::invalid_argument);

  const Matrix t1 = truncate(s, 1);
  for (std::size_t k = 0; k < 6; ++k) {
    const auto col = rank1_column(s, k);
    for (std::size_t i = 0; i < 10; ++i) CHECK(col[i] == doctest::Approx(t1(i, k)).epsilon(1e-13));
  }
  CHECK(code_of([&] { rank1_column(s, 6); }) == ErrorCode::invalid_argument);

  const Matrix small = random_matrix(rng, 8, 3);
  const SvdResult ss = svd_via_gram(small);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto col = rank1_column(ss, k);
    for (std::size_t i = 0; i < 8; ++i) {
      const double expect = ss.sigma[0] * ss.v(k, 0) * ss.u(i, 0);
      CHECK(col[i] == expect);
    }
  }
}

TEST_CASE("zero matrix has rank zero") {
  const SvdResult s = svd_via_gram(Matrix(5, 3));
  CHECK(s.rank == 0);
  for (double v : s.sigma) CHECK(v == 0.0);
  CHECK(orthonormality_error(s.u, 3) < 1e-12);
  CHECK(orthonormality_error(s.v, 3) < 1e-12);
}

TEST_CASE("canonical sign") {
  CHECK(canonical_sign(std::vector<double>{-1.0, -2.0}) == std::vector<double>{1.0, 2.0});
  CHECK(canonical_sign(std::vector<double>{1.0, 2.0}) == std::vector<double>{1.0, 2.0});
  CHECK(canonical_sign(std::vector<double>{1.0, -1.0}) == std::vector<double>{1.0, -1.0});
  CHECK(canonical_sign(std::vector<double>{-1.0, 1.0}) == std::vector<double>{1.0, -1.0});
  CHECK(canonical_sign(std::vector<double>{0.0, -1.0, 1.0}) == std::vector<double>{0.0, 1.0, -1.0});
  CHECK(code_of([] { canonical_sign(std::vector<double>{0.0, 0.0}); }) == ErrorCode::degenerate_input);

  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> u(9), neg(9);
    for (std::size_t i = 0; i < 9; ++i) {
      u[i] = rng.normal();
      neg[i] = -u[i];
    }
    CHECK(pearson(canonical_sign(u), canonical_sign(neg)) == 1.0);
    CHECK(canonical_sign(u) == canonical_sign(neg));
  }
}

TEST_CASE("pearson") {
  const std::vector<double> a = {1.0, 3.0, 2.0, 7.0, -1.0};
  std::vector<double> neg, affine;
  for (double v : a) {
    neg.push_back(-v);
    affine.push_back(3.0 * v + 7.0);
  }
  CHECK(pearson(a, a) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pearson(a, neg) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(pearson(a, affine) == doctest::Approx(1.0).epsilon(1e-15));

  // textbook value from the definition
  const std::vector<double> x = {1, 2, 3, 4, 5}, y = {2, 4, 5, 4, 5};
  CHECK(pearson(x, y) == doctest::Approx(6.0 / std::sqrt(10.0 * 6.0)).epsilon(1e-14));

  const std::vector<double> flat = {2.0, 2.0, 2.0, 2.0, 2.0};
  CHECK(code_of([&] { pearson(a, flat); }) == ErrorCode::degenerate_input);
  CHECK(code_of([&] { pearson(std::vector<double>{1.0}, std::vector<double>{2.0}); }) == ErrorCode::invalid_argument);
}
