#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace cwvsmix {

using Vector = std::vector<double>;

// Dense column-major matrix.  Columns are contiguous, so the kernels layer
// can run over them directly.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[j * rows_ + i];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[j * rows_ + i];
  }

  double* col(std::size_t j) { return data_.data() + j * rows_; }
  const double* col(std::size_t j) const { return data_.data() + j * rows_; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

namespace linalg {

// y = A x
Vector matvec(const Matrix& a, std::span<const double> x);

// y = A^T x
Vector matvec_t(const Matrix& a, std::span<const double> x);

Matrix matmul(const Matrix& a, const Matrix& b);

// Lower Cholesky factor of a symmetric positive-definite matrix; nullopt if
// a non-positive pivot is hit.
std::optional<Matrix> chol_lower(const Matrix& a);

// Solve L y = b (L lower triangular).
Vector forward_solve(const Matrix& l, std::span<const double> b);

// Solve L^T x = b.
Vector backward_solve_t(const Matrix& l, std::span<const double> b);

// A^{-1} b given the Cholesky factor L of A.
Vector chol_solve(const Matrix& l, std::span<const double> b);

// log |A| = 2 sum log L_ii.
double chol_log_det(const Matrix& l);

// A^{-1} given L.
Matrix chol_inverse(const Matrix& l);

double dot(std::span<const double> x, std::span<const double> y);

}  // namespace linalg
}  // namespace cwvsmix
