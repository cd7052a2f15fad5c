#pragma once

// Small dense containers used throughout capcone. Dimensions are tiny
// (n <= 16), so everything is stored contiguously and copied by value.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace capcone {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when inputs violate an operation's preconditions.
class DomainError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kMaxDimension = 16;

/// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("matrix product: shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Real symmetric n x n matrix stored as its upper triangle, so
/// a(i, j) == a(j, i) holds structurally.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), packed_(n * (n + 1) / 2, 0.0) {
    if (n < 2 || n > kMaxDimension)
      throw DomainError("SymMatrix: dimension " + std::to_string(n) + " outside [2, 16]");
  }

  static SymMatrix diagonal(std::span<const double> d) {
    SymMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
    return m;
  }

  /// Takes the upper triangle of a square matrix.
  static SymMatrix from_upper(const Matrix& a) {
    if (a.rows() != a.cols()) throw DomainError("SymMatrix: matrix is not square");
    SymMatrix m(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = i; j < a.cols(); ++j) m.set(i, j, a(i, j));
    return m;
  }

  std::size_t size() const { return n_; }
  std::size_t packed_size() const { return packed_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return packed_[index(i, j)]; }

  void set(std::size_t i, std::size_t j, double v) {
    if (!std::isfinite(v)) throw DomainError("SymMatrix: non-finite entry");
    packed_[index(i, j)] = v;
  }
  void add(std::size_t i, std::size_t j, double v) { set(i, j, (*this)(i, j) + v); }

  /// Coordinates a_ij with i <= j in row-major order of the upper triangle.
  std::span<const double> packed() const { return packed_; }

  Matrix dense() const {
    Matrix d(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) d(i, j) = (*this)(i, j);
    return d;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * (*this)(i, j);
    return std::sqrt(s);
  }

  /// Frobenius norm of the strictly off-diagonal part.
  double off_diagonal_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) s += 2.0 * (*this)(i, j) * (*this)(i, j);
    return std::sqrt(s);
  }

  bool operator==(const SymMatrix&) const = default;

  /// Position of a_ij (any order of i, j) in the packed upper triangle.
  static std::size_t packed_index(std::size_t n, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
  }

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw DomainError("SymMatrix: index out of range");
    return packed_index(n_, i, j);
  }

  std::size_t n_ = 0;
  std::vector<double> packed_;
};

/// Fully symmetric rank-3 tensor, e.g. third derivatives u_ijk.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(std::size_t n) : n_(n), data_(n * n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * n_ + j) * n_ + k];
  }

  /// Assigns all six permutations of (i, j, k).
  void set(std::size_t i, std::size_t j, std::size_t k, double v) {
    const std::size_t p[6][3] = {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}};
    for (const auto& q : p) data_[(q[0] * n_ + q[1]) * n_ + q[2]] = v;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

inline double sum_of_powers(std::span<const double> v, int p) {
  double s = 0.0;
  for (double x : v) s += std::pow(x, p);
  return s;
}

}  // namespace capcone
