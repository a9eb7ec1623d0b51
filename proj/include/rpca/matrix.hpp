#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rpca {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  /// Builds a matrix whose columns are the given vectors.
  static Matrix from_columns(const std::vector<Vector>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return values_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }
  Vector col(std::size_t j) const;
  void set_col(std::size_t j, std::span<const double> v);

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  Matrix transpose() const;
  /// Leading `k` columns.
  Matrix left_cols(std::size_t k) const;

  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Vector operator*(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double frobenius_norm(const Matrix& a);
/// Largest absolute entry of `a - b`.
double max_abs_diff(const Matrix& a, const Matrix& b);
/// Largest absolute entry of `aᵀa - I`.
double orthonormality_error(const Matrix& a);
double trace(const Matrix& a);

/// Sample X: n observations (rows) by p variables (columns), all finite.
class DataMatrix {
 public:
  DataMatrix() = default;
  explicit DataMatrix(Matrix values);
  DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
      : DataMatrix(Matrix(rows, cols, std::move(values))) {}
  DataMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : DataMatrix(Matrix(rows)) {}

  std::size_t rows() const noexcept { return m_.rows(); }
  std::size_t cols() const noexcept { return m_.cols(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
  std::span<const double> row(std::size_t i) const noexcept { return m_.row(i); }
  Vector col(std::size_t j) const { return m_.col(j); }
  const Matrix& matrix() const noexcept { return m_; }

  friend bool operator==(const DataMatrix&, const DataMatrix&) = default;

 private:
  Matrix m_;
};

/// Symmetric p×p covariance or correlation matrix. Symmetrized on construction.
class ScatterMatrix {
 public:
  ScatterMatrix() = default;
  explicit ScatterMatrix(Matrix values);

  std::size_t dim() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

}  // namespace rpca
