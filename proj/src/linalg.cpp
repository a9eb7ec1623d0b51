#include "rpca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rpca/error.hpp"

namespace rpca {

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

// Zeroes a(p,q) with a two-sided rotation and accumulates it into v.
void jacobi_rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

// One-sided Jacobi: rotates columns of `a` in place until mutually orthogonal.
void orthogonalize_columns(Matrix& a) {
  const std::size_t m = a.cols();
  const std::size_t d = a.rows();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          alpha += a(k, i) * a(k, i);
          beta += a(k, j) * a(k, j);
          gamma += a(k, i) * a(k, j);
        }
        if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < d; ++k) {
          const double aki = a(k, i);
          const double akj = a(k, j);
          a(k, i) = c * aki - s * akj;
          a(k, j) = s * aki + c * akj;
        }
      }
    }
    if (!rotated) return;
  }
  throw Error(ErrorCode::NoConvergence, "one-sided Jacobi exceeded sweep cap");
}

}  // namespace

void canonicalize_signs(Matrix& columns) {
  for (std::size_t j = 0; j < columns.cols(); ++j) {
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < columns.rows(); ++i) {
      if (std::abs(columns(i, j)) > best_abs) {
        best_abs = std::abs(columns(i, j));
        best = i;
      }
    }
    if (columns.rows() > 0 && columns(best, j) < 0.0)
      for (std::size_t i = 0; i < columns.rows(); ++i) columns(i, j) = -columns(i, j);
  }
}

SpectralDecomposition eig_symmetric(const ScatterMatrix& a) { return eig_symmetric(a.matrix()); }

SpectralDecomposition eig_symmetric(const Matrix& input) {
  require(input.rows() == input.cols(), ErrorCode::DimMismatch, "eig_symmetric: matrix not square");
  require(input.all_finite(), ErrorCode::InvalidInput, "eig_symmetric: non-finite entries");
  const std::size_t n = input.rows();
  Matrix a = input;
  Matrix v = Matrix::identity(n);
  const double scale = frobenius_norm(a);

  bool converged = false;
  for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
    const double off = off_diagonal_norm(a);
    if (off == 0.0 || off <= 1e-15 * scale) {
      converged = true;
      break;
    }
    if (sweep == kMaxSweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
  }
  if (!converged) throw Error(ErrorCode::NoConvergence, "Jacobi eigensolver exceeded 100 sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  canonicalize_signs(out.eigenvectors);
  return out;
}

Matrix svd_orthonormalize(const Matrix& u) {
  require(u.cols() <= u.rows(), ErrorCode::InvalidInput, "svd_orthonormalize: more columns than rows");
  require(u.all_finite(), ErrorCode::InvalidInput, "svd_orthonormalize: non-finite entries");
  Matrix r = u;
  orthogonalize_columns(r);
  Vector norms(r.cols());
  for (std::size_t j = 0; j < r.cols(); ++j) norms[j] = norm2(r.col(j));
  const double largest = norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());
  for (std::size_t j = 0; j < r.cols(); ++j) {
    if (!(norms[j] > 1e-12 * largest) || largest == 0.0)
      throw Error(ErrorCode::RankDeficient, "svd_orthonormalize: input is rank deficient");
    for (std::size_t i = 0; i < r.rows(); ++i) r(i, j) /= norms[j];
  }
  return r;
}

Vector singular_values(const Matrix& a) {
  Matrix r = a.rows() >= a.cols() ? a : a.transpose();
  orthogonalize_columns(r);
  Vector s(r.cols());
  for (std::size_t j = 0; j < r.cols(); ++j) s[j] = norm2(r.col(j));
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

Cholesky::Cholesky(const Matrix& a) : lower_(a.rows(), a.cols()) {
  require(a.rows() == a.cols(), ErrorCode::DimMismatch, "Cholesky: matrix not square");
  const std::size_t n = a.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= lower_(j, k) * lower_(j, k);
    if (!(d > 1e-14 * max_diag) || !std::isfinite(d))
      throw Error(ErrorCode::SingularScatter, "scatter matrix is not positive definite");
    const double ljj = std::sqrt(d);
    lower_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower_(i, k) * lower_(j, k);
      lower_(i, j) = s / ljj;
    }
  }
}

Vector Cholesky::solve(std::span<const double> b) const {
  const std::size_t n = lower_.rows();
  require(b.size() == n, ErrorCode::DimMismatch, "Cholesky::solve: length mismatch");
  Vector y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= lower_(i, k) * y[k];
    y[i] /= lower_(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) y[i] -= lower_(k, i) * y[k];
    y[i] /= lower_(i, i);
  }
  return y;
}

double Cholesky::inverse_quadratic(std::span<const double> b) const {
  const std::size_t n = lower_.rows();
  require(b.size() == n, ErrorCode::DimMismatch, "Cholesky: length mismatch");
  Vector y(b.begin(), b.end());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= lower_(i, k) * y[k];
    y[i] /= lower_(i, i);
    s += y[i] * y[i];
  }
  return s;
}

}  // namespace rpca
