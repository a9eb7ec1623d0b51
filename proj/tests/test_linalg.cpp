#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>

#include "rpca/error.hpp"
#include "rpca/linalg.hpp"
#include "support.hpp"

using namespace rpca;
using rpca::test::gaussian_matrix;
using rpca::test::random_symmetric;

namespace {

Matrix reconstruct_from(const SpectralDecomposition& d) {
  return d.eigenvectors * Matrix::diagonal(d.eigenvalues) * d.eigenvectors.transpose();
}

// 2×2 inverse by cofactors, used for the normal-equations projector.
Matrix inverse2(const Matrix& a) {
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return Matrix{{a(1, 1) / det, -a(0, 1) / det}, {-a(1, 0) / det, a(0, 0) / det}};
}

}  // namespace

TEST_CASE("eig_symmetric on a diagonal matrix returns the diagonal and e1") {
  const auto d = eig_symmetric(ScatterMatrix(Matrix::diagonal(Vector{5, 1, 1, 1, 1, 1})));
  CHECK(d.eigenvalues == Vector{5, 1, 1, 1, 1, 1});
  for (std::size_t r = 0; r < 6; ++r) CHECK(d.eigenvectors(r, 0) == doctest::Approx(r == 0 ? 1.0 : 0.0));
}

TEST_CASE("eig_symmetric on the identity keeps unit eigenvalues and an orthonormal basis") {
  const auto d = eig_symmetric(Matrix::identity(3));
  for (double v : d.eigenvalues) CHECK(v == doctest::Approx(1.0));
  CHECK(orthonormality_error(d.eigenvectors) <= 1e-10);
}

TEST_CASE("2x2 eigenpairs agree with the characteristic polynomial") {
  const auto d = eig_symmetric(Matrix{{2, 1}, {1, 2}});
  CHECK(d.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(d.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(std::abs(d.eigenvectors(0, 0)) - h) < 1e-14);
  CHECK(d.eigenvectors(0, 0) * d.eigenvectors(1, 0) > 0.0);
  CHECK(d.eigenvectors(0, 1) * d.eigenvectors(1, 1) < 0.0);

  // General 2×2: λ = (a+c)/2 ± sqrt(((a−c)/2)² + b²).
  NormalStream rng(11);
  for (int t = 0; t < 200; ++t) {
    const double a = rng.next(), b = rng.next(), c = rng.next();
    const double mid = 0.5 * (a + c), rad = std::hypot(0.5 * (a - c), b);
    const auto e = eig_symmetric(Matrix{{a, b}, {b, c}});
    CHECK(std::abs(e.eigenvalues[0] - (mid + rad)) <= 1e-13 * (1 + std::abs(mid) + rad));
    CHECK(std::abs(e.eigenvalues[1] - (mid - rad)) <= 1e-13 * (1 + std::abs(mid) + rad));
  }
}

TEST_CASE("random symmetric matrices: reconstruction, orthonormality, residuals, trace") {
  NormalStream rng(2024);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t p = 1 + static_cast<std::size_t>(rng.next_uniform() * 20);
    const Matrix a = random_symmetric(p, rng);
    const auto d = eig_symmetric(a);
    const double fro = frobenius_norm(a);
    REQUIRE(frobenius_norm(a - reconstruct_from(d)) <= 1e-10 * std::max(1.0, fro));
    REQUIRE(orthonormality_error(d.eigenvectors) <= 1e-10);
    for (std::size_t k = 0; k + 1 < p; ++k) REQUIRE(d.eigenvalues[k] >= d.eigenvalues[k + 1]);
    for (std::size_t k = 0; k < p; ++k) {
      const Vector q = d.eigenvectors.col(k);
      Vector r = a * q;
      for (std::size_t i = 0; i < p; ++i) r[i] -= d.eigenvalues[k] * q[i];
      REQUIRE(norm2(r) <= 1e-9 * std::max(fro, 1e-300));
    }
    double sum = 0.0;
    for (double v : d.eigenvalues) sum += v;
    REQUIRE(std::abs(sum - trace(a)) <= 1e-9 * std::max(1.0, std::abs(trace(a))));
  }
}

TEST_CASE("eigenvectors put their largest-magnitude entry positive") {
  NormalStream rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto d = eig_symmetric(random_symmetric(7, rng));
    for (std::size_t k = 0; k < 7; ++k) {
      std::size_t best = 0;
      for (std::size_t r = 1; r < 7; ++r)
        if (std::abs(d.eigenvectors(r, k)) > std::abs(d.eigenvectors(best, k))) best = r;
      CHECK(d.eigenvectors(best, k) > 0.0);
    }
  }
}

TEST_CASE("eig_symmetric is bitwise deterministic") {
  NormalStream rng(99);
  const Matrix a = random_symmetric(12, rng);
  const auto d1 = eig_symmetric(a);
  const auto d2 = eig_symmetric(a);
  CHECK(rpca::test::same_bits(d1.eigenvectors, d2.eigenvectors));
  CHECK(rpca::test::same_bits(d1.eigenvalues, d2.eigenvalues));
}

TEST_CASE("eig_symmetric rejects non-finite input") {
  Matrix a = Matrix::identity(3);
  a(1, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    eig_symmetric(a);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
  }
}

TEST_CASE("svd_orthonormalize leaves an orthonormal basis alone") {
  NormalStream rng(3);
  const Matrix q = rpca::test::random_orthogonal(5, rng).left_cols(3);
  CHECK(max_abs_diff(svd_orthonormalize(q), q) <= 1e-12);
}

TEST_CASE("svd_orthonormalize removes scaling") {
  const Matrix u{{2, 0}, {0, 2}, {0, 0}};
  const Matrix r = svd_orthonormalize(u);
  CHECK(max_abs_diff(r, Matrix{{1, 0}, {0, 1}, {0, 0}}) <= 1e-15);
}

TEST_CASE("svd_orthonormalize spans the same subspace as the input") {
  NormalStream rng(17);
  for (int t = 0; t < 100; ++t) {
    const Matrix u = gaussian_matrix(5, 2, rng);
    const Matrix r = svd_orthonormalize(u);
    CHECK(orthonormality_error(r) <= 1e-10);
    const Matrix oracle = u * inverse2(u.transpose() * u) * u.transpose();
    CHECK(max_abs_diff(r * r.transpose(), oracle) <= 1e-8);
  }
}

TEST_CASE("svd_orthonormalize rejects rank-deficient input") {
  const Matrix u{{1, 2}, {1, 2}, {1, 2}};
  try {
    svd_orthonormalize(u);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
  }
}

TEST_CASE("singular values are the square roots of the eigenvalues of AᵀA") {
  NormalStream rng(8);
  for (int t = 0; t < 50; ++t) {
    const Matrix a = gaussian_matrix(6, 4, rng);
    const Vector s = singular_values(a);
    const auto d = eig_symmetric(a.transpose() * a);
    REQUIRE(s.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) CHECK(s[k] == doctest::Approx(std::sqrt(d.eigenvalues[k])).epsilon(1e-10));
  }
}

TEST_CASE("Cholesky solves and evaluates quadratic forms") {
  const Matrix a{{4, 2, 0}, {2, 5, 1}, {0, 1, 3}};
  const Cholesky c(a);
  const Vector b{1, -2, 0.5};
  const Vector x = c.solve(b);
  const Vector back = a * x;
  for (std::size_t i = 0; i < 3; ++i) CHECK(back[i] == doctest::Approx(b[i]).epsilon(1e-13));
  CHECK(c.inverse_quadratic(b) == doctest::Approx(dot(b, x)).epsilon(1e-13));

  try {
    Cholesky bad(Matrix{{1, 1}, {1, 1}});
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularScatter);
  }
}
