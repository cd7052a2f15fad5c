#pragma once

// Central finite differences of A -> f(spectrum(A)), used to cross-check the
// closed-form derivative tables. Not used by any production computation.

#include <cmath>
#include <vector>

#include "capcone/spectral.hpp"

namespace capcone {

struct FdResult {
  std::vector<double> gradient;  // packed upper-triangle coordinates
  Matrix hessian;                // packed x packed
  std::vector<std::size_t> kinks;  // packed coordinates with one-sided disagreement
  bool degenerate() const { return !kinks.empty(); }
};

inline double spectral_value(const SymmetricFn& f, const SymMatrix& a) {
  return f.value(jacobi_eigh(a).values);
}

/// Perturbing coordinate a_ij (i < j) moves both symmetric entries.
inline FdResult fd_oracle(const SymmetricFn& f, const SymMatrix& a, double h) {
  if (!(h >= 1e-7 && h <= 1e-3)) throw DomainError("fd_oracle: step outside [1e-7, 1e-3]");
  const std::size_t n = a.size();
  const std::size_t m = a.packed_size();
  std::vector<std::pair<std::size_t, std::size_t>> coord;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) coord.emplace_back(i, j);

  auto at = [&](std::size_t p, double dp, std::size_t q, double dq) {
    SymMatrix b = a;
    b.add(coord[p].first, coord[p].second, dp);
    b.add(coord[q].first, coord[q].second, dq);
    return spectral_value(f, b);
  };

  const double f0 = spectral_value(f, a);
  FdResult out{std::vector<double>(m), Matrix(m, m), {}};
  for (std::size_t p = 0; p < m; ++p) {
    const double fp = at(p, h, p, 0.0);
    const double fm = at(p, -h, p, 0.0);
    out.gradient[p] = (fp - fm) / (2.0 * h);
    out.hessian(p, p) = (fp - 2.0 * f0 + fm) / (h * h);

    // A kink shows as a forward/backward slope mismatch that does not shrink
    // with the step.
    const double d_h = (fp - f0) / h - (f0 - fm) / h;
    const double d_half =
        (at(p, h / 2, p, 0.0) - f0) / (h / 2) - (f0 - at(p, -h / 2, p, 0.0)) / (h / 2);
    const double floor = 1e-6 * (1.0 + std::abs(f0));
    if (std::abs(d_h) > floor && std::abs(d_half) > 0.75 * std::abs(d_h)) out.kinks.push_back(p);

    for (std::size_t q = 0; q < p; ++q) {
      const double v = (at(p, h, q, h) - at(p, h, q, -h) - at(p, -h, q, h) + at(p, -h, q, -h)) /
                       (4.0 * h * h);
      out.hessian(p, q) = v;
      out.hessian(q, p) = v;
    }
  }
  return out;
}

}  // namespace capcone
