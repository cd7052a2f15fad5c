#pragma once

// Seeded random inputs shared by the verification suites.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "capcone/spectral.hpp"

namespace capcone {

/// Eigenvalues in [-R, R], R = max(2, (n + 1) min_sep), with pairwise gaps
/// and magnitudes at least `min_sep`, so that every built-in family is C^2
/// with well-conditioned divided differences. The sign split is binomial and
/// each half-line is filled by the sorted-uniform spacing construction.
inline std::vector<double> random_separated_spectrum(std::size_t n, std::mt19937_64& rng, double min_sep = 0.25) {
  const double R = std::max(2.0, static_cast<double>(n + 1) * min_sep);
  const std::size_t positives = std::binomial_distribution<std::size_t>(n, 0.5)(rng);
  auto fill = [&](std::size_t count, double sign, std::vector<double>& out) {
    if (count == 0) return;
    const double free = (R - min_sep) - static_cast<double>(count - 1) * min_sep;
    std::uniform_real_distribution<double> u(0.0, free);
    std::vector<double> v(count);
    for (auto& x : v) x = u(rng);
    std::sort(v.begin(), v.end());
    for (std::size_t i = 0; i < count; ++i) out.push_back(sign * (min_sep + v[i] + static_cast<double>(i) * min_sep));
  };
  std::vector<double> l;
  fill(positives, 1.0, l);
  fill(n - positives, -1.0, l);
  std::shuffle(l.begin(), l.end(), rng);
  return l;
}

/// Haar-like orthogonal matrix from Gram-Schmidt on a Gaussian matrix.
inline Matrix random_orthogonal(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix q(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (;;) {
      std::vector<double> v(n);
      for (auto& x : v) x = g(rng);
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t p = 0; p < c; ++p) {
          double d = 0.0;
          for (std::size_t r = 0; r < n; ++r) d += q(r, p) * v[r];
          for (std::size_t r = 0; r < n; ++r) v[r] -= d * q(r, p);
        }
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm < 1e-8) continue;
      for (std::size_t r = 0; r < n; ++r) q(r, c) = v[r] / norm;
      break;
    }
  }
  return q;
}

/// Q diag(lambda) Q^T.
inline SymMatrix conjugate_diagonal(const Matrix& q, std::span<const double> lambda) {
  const std::size_t n = lambda.size();
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += q(i, k) * lambda[k] * q(j, k);
      a.set(i, j, s);
    }
  return a;
}

inline SymMatrix random_symmetric(std::size_t n, std::mt19937_64& rng, double range = 2.0) {
  std::uniform_real_distribution<double> u(-range, range);
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, u(rng));
  return a;
}

/// The built-in families used by randomized checks; `a` is the split weight.
inline std::vector<SymmetricFn> builtin_families(std::size_t n, double a) {
  return {trace_fn(n), frobenius_fn(n), sum_squares_fn(n), power_sum3_fn(n), split_quadratic_fn(n, a)};
}

}  // namespace capcone
