#pragma once

// Reference computations that share no code with the library: eigenvalues by
// Householder tridiagonalization and Sturm bisection, and Richardson
// extrapolated finite differences built on top of them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

/// Householder reduction to a symmetric tridiagonal (diag, sub).
inline std::pair<std::vector<double>, std::vector<double>> tridiagonalize(Dense a) {
  const std::size_t n = a.size();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha += a[i][k] * a[i][k];
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    if (a[k + 1][k] > 0) alpha = -alpha;
    std::vector<double> v(n, 0.0);
    v[k + 1] = a[k + 1][k] - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a[i][k];
    double vv = 0.0;
    for (double x : v) vv += x * x;
    if (vv == 0.0) continue;
    // a <- P a P with P = I - 2 v v^T / vv
    std::vector<double> p(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p[i] += a[i][j] * v[j];
    double vp = 0.0;
    for (std::size_t i = 0; i < n; ++i) vp += v[i] * p[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        a[i][j] += -2.0 * (v[i] * p[j] + p[i] * v[j]) / vv + 4.0 * vp * v[i] * v[j] / (vv * vv);
  }
  std::vector<double> d(n), e(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i][i];
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = a[i + 1][i];
  return {d, e};
}

/// Number of eigenvalues strictly below x, from the Sturm sequence of the
/// tridiagonal form.
inline int count_below(const std::vector<double>& d, const std::vector<double>& e, double x) {
  int neg = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    q = d[i] - x - (i ? e[i - 1] * e[i - 1] / q : 0.0);
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++neg;
  }
  return neg;
}

/// Eigenvalues in descending order.
inline std::vector<double> eigenvalues(const Dense& a) {
  const std::size_t n = a.size();
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) r += std::abs(a[i][j]);
    lo = std::min(lo, a[i][i] - r);
    hi = std::max(hi, a[i][i] + r);
  }
  lo -= 1.0;
  hi += 1.0;
  const auto [td, te] = tridiagonalize(a);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k-th smallest: the smallest x with count_below(x) > k
    double a0 = lo, b0 = hi;
    for (int it = 0; it < 200 && b0 - a0 > 0.0; ++it) {
      const double mid = 0.5 * (a0 + b0);
      if (mid == a0 || mid == b0) break;
      if (count_below(td, te, mid) > static_cast<int>(k)) b0 = mid;
      else a0 = mid;
    }
    out[n - 1 - k] = 0.5 * (a0 + b0);
  }
  return out;
}

using SpectralFn = std::function<double(const std::vector<double>&)>;

inline double value(const SpectralFn& f, const Dense& a) { return f(eigenvalues(a)); }

/// Packed coordinates (i <= j); moving an off-diagonal coordinate moves both
/// symmetric entries.
struct Packed {
  std::vector<double> gradient;
  Dense hessian;
};

inline Packed derivatives(const SpectralFn& f, const Dense& a, double h = 2e-3) {
  const std::size_t n = a.size();
  std::vector<std::pair<std::size_t, std::size_t>> c;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) c.emplace_back(i, j);
  const std::size_t m = c.size();
  auto at = [&](std::size_t p, double dp, std::size_t q, double dq) {
    Dense b = a;
    auto bump = [&](std::size_t r, double d) {
      b[c[r].first][c[r].second] += d;
      if (c[r].first != c[r].second) b[c[r].second][c[r].first] += d;
    };
    bump(p, dp);
    bump(q, dq);
    return value(f, b);
  };
  const double f0 = value(f, a);
  auto grad = [&](std::size_t p, double s) { return (at(p, s, p, 0) - at(p, -s, p, 0)) / (2 * s); };
  auto diag = [&](std::size_t p, double s) { return (at(p, s, p, 0) - 2 * f0 + at(p, -s, p, 0)) / (s * s); };
  auto mixed = [&](std::size_t p, std::size_t q, double s) {
    return (at(p, s, q, s) - at(p, s, q, -s) - at(p, -s, q, s) + at(p, -s, q, -s)) / (4 * s * s);
  };
  auto rich = [](double coarse, double fine) { return (4 * fine - coarse) / 3; };
  Packed out{std::vector<double>(m), Dense(m, std::vector<double>(m))};
  for (std::size_t p = 0; p < m; ++p) {
    out.gradient[p] = rich(grad(p, h), grad(p, h / 2));
    out.hessian[p][p] = rich(diag(p, h), diag(p, h / 2));
    for (std::size_t q = 0; q < p; ++q) out.hessian[p][q] = out.hessian[q][p] = rich(mixed(p, q, h), mixed(p, q, h / 2));
  }
  return out;
}

inline double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0, s = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
    s = std::max(s, std::abs(b[i]));
  }
  return m / s;
}

}  // namespace oracle
