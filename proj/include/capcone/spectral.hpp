#pragma once

// Spectral calculus for F(A) = f(lambda_1(A), ..., lambda_n(A)) where f is a
// symmetric function of the eigenvalues of a real symmetric matrix.
//
// Derivatives are evaluated at diagonal base points A0 = diag(Lambda). Callers
// holding a non-diagonal matrix rotate into its eigenbasis first.
//
// In the coordinates a_ij (i <= j) of the upper triangle:
//
//   dF/da_ii = f_i,    dF/da_ij = 0 (i < j)
//   d2F/da_ii da_jj = f_ij
//   d2F/da_ij^2 = 2 (f_j - f_i) / (lambda_j - lambda_i)   (lambda_i != lambda_j)
//               = 2 f_ii - 2 f_ij                          (lambda_i == lambda_j)
//
// and every other mixed second derivative vanishes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "capcone/linalg.hpp"

namespace capcone {

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Full spectral decomposition A = R diag(values) R^T with values descending.
struct Spectrum {
  std::vector<double> values;
  Matrix rotation;  // eigenvectors as columns

  std::size_t size() const { return values.size(); }
};

struct JacobiOptions {
  double relative_tolerance = 1e-13;
  int max_sweeps = 50;
};

/// Cyclic Jacobi eigensolver with row-major sweep order.
inline Spectrum jacobi_eigh(const SymMatrix& a, JacobiOptions opts = {}) {
  const std::size_t n = a.size();
  Matrix m = a.dense();
  Matrix v = Matrix::identity(n);
  const double norm = a.frobenius_norm();

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * m(i, j) * m(i, j);
    return std::sqrt(s);
  };

  double off = off_norm();
  int sweep = 0;
  while (off >= opts.relative_tolerance * norm && off > 0.0) {
    if (sweep == opts.max_sweeps)
      throw ConvergenceError("jacobi_eigh: no convergence after " + std::to_string(sweep) +
                                 " sweeps, off-diagonal norm " + std::to_string(off),
                             off);
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double tau = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    ++sweep;
    off = off_norm();
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return m(i, i) > m(j, j); });
  Spectrum out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = m(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.rotation(r, c) = v(r, order[c]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Symmetric functions of eigenvalues

using Eigenvalues = std::span<const double>;

/// A symmetric function f of n eigenvalues with analytic gradient and Hessian.
class SymmetricFn {
 public:
  using ValueFn = std::function<double(Eigenvalues)>;
  using GradFn = std::function<std::vector<double>(Eigenvalues)>;
  using HessFn = std::function<Matrix(Eigenvalues)>;
  /// Indices at which f fails to be C^2 (empty where f is smooth).
  using KinkFn = std::function<std::vector<std::size_t>(Eigenvalues)>;

  SymmetricFn(std::string name, std::size_t n, ValueFn value, GradFn grad, HessFn hess,
              std::optional<double> homogeneity_degree, bool convex, KinkFn kinks = {})
      : name_(std::move(name)),
        n_(n),
        value_(std::move(value)),
        grad_(std::move(grad)),
        hess_(std::move(hess)),
        kinks_(std::move(kinks)),
        degree_(homogeneity_degree),
        convex_(convex) {
    if (n_ < 1 || n_ > kMaxDimension) throw DomainError("SymmetricFn: arity outside [1, 16]");
  }

  const std::string& name() const { return name_; }
  std::size_t arity() const { return n_; }
  std::optional<double> homogeneity_degree() const { return degree_; }
  bool convex() const { return convex_; }

  double value(Eigenvalues l) const { return value_(check(l)); }
  std::vector<double> grad(Eigenvalues l) const { return grad_(check(l)); }
  Matrix hess(Eigenvalues l) const { return hess_(check(l)); }
  std::vector<std::size_t> kinks(Eigenvalues l) const {
    return kinks_ ? kinks_(check(l)) : std::vector<std::size_t>{};
  }
  bool smooth_at(Eigenvalues l) const { return kinks(l).empty(); }

 private:
  Eigenvalues check(Eigenvalues l) const {
    if (l.size() != n_)
      throw DomainError("SymmetricFn '" + name_ + "': arity " + std::to_string(n_) +
                        " does not match " + std::to_string(l.size()) + " eigenvalues");
    return l;
  }

  std::string name_;
  std::size_t n_;
  ValueFn value_;
  GradFn grad_;
  HessFn hess_;
  KinkFn kinks_;
  std::optional<double> degree_;
  bool convex_;
};

/// f = sum lambda_i.
inline SymmetricFn trace_fn(std::size_t n) {
  return SymmetricFn(
      "trace", n, [](Eigenvalues l) { return sum(l); },
      [](Eigenvalues l) { return std::vector<double>(l.size(), 1.0); },
      [](Eigenvalues l) { return Matrix(l.size(), l.size()); }, 1.0, true);
}

/// f = sum lambda_i^2.
inline SymmetricFn sum_squares_fn(std::size_t n) {
  return SymmetricFn(
      "sum_squares", n, [](Eigenvalues l) { return sum_of_powers(l, 2); },
      [](Eigenvalues l) {
        std::vector<double> g(l.size());
        for (std::size_t i = 0; i < l.size(); ++i) g[i] = 2.0 * l[i];
        return g;
      },
      [](Eigenvalues l) {
        Matrix h(l.size(), l.size());
        for (std::size_t i = 0; i < l.size(); ++i) h(i, i) = 2.0;
        return h;
      },
      2.0, true);
}

/// f = sum lambda_i^3 (not convex).
inline SymmetricFn power_sum3_fn(std::size_t n) {
  return SymmetricFn(
      "power_sum3", n, [](Eigenvalues l) { return sum_of_powers(l, 3); },
      [](Eigenvalues l) {
        std::vector<double> g(l.size());
        for (std::size_t i = 0; i < l.size(); ++i) g[i] = 3.0 * l[i] * l[i];
        return g;
      },
      [](Eigenvalues l) {
        Matrix h(l.size(), l.size());
        for (std::size_t i = 0; i < l.size(); ++i) h(i, i) = 6.0 * l[i];
        return h;
      },
      3.0, false);
}

/// Split-quadratic competitor
///   f = ( sum_{lambda_i >= 0} lambda_i^2 + a sum_{lambda_s < 0} lambda_s^2 )^{1/2}.
/// A zero eigenvalue belongs to the non-negative group. With a != 1, f is only
/// C^{1,1} across lambda = 0; those indices are reported as kinks. f is also
/// not differentiable at Lambda = 0.
inline SymmetricFn split_quadratic_fn(std::size_t n, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("split_quadratic_fn: weight a must be > 0");
  auto weight = [a](double x) { return x >= 0.0 ? 1.0 : a; };
  auto value = [weight](Eigenvalues l) {
    double s = 0.0;
    for (double x : l) s += weight(x) * x * x;
    return std::sqrt(s);
  };
  auto grad = [weight, value](Eigenvalues l) {
    const double f = value(l);
    std::vector<double> g(l.size(), 0.0);
    if (f == 0.0) return g;
    for (std::size_t i = 0; i < l.size(); ++i) g[i] = weight(l[i]) * l[i] / f;
    return g;
  };
  auto hess = [weight, value](Eigenvalues l) {
    const std::size_t n = l.size();
    const double f = value(l);
    Matrix h(n, n);
    if (f == 0.0) return h;
    for (std::size_t i = 0; i < n; ++i) {
      const double gi = weight(l[i]) * l[i];
      for (std::size_t j = 0; j < n; ++j) {
        const double gj = weight(l[j]) * l[j];
        h(i, j) = (i == j ? weight(l[i]) / f : 0.0) - gi * gj / (f * f * f);
      }
    }
    return h;
  };
  auto kinks = [a, value](Eigenvalues l) {
    std::vector<std::size_t> k;
    if (value(l) == 0.0) {
      k.resize(l.size());
      std::iota(k.begin(), k.end(), 0);
      return k;
    }
    if (a != 1.0)
      for (std::size_t i = 0; i < l.size(); ++i)
        if (l[i] == 0.0) k.push_back(i);
    return k;
  };
  std::string name = a == 1.0 ? "frobenius" : "split_quadratic(a=" + std::to_string(a) + ")";
  return SymmetricFn(std::move(name), n, value, grad, hess, 1.0, true, kinks);
}

/// f = |Lambda|_2, the Frobenius norm of A. Equals split_quadratic_fn(n, 1).
inline SymmetricFn frobenius_fn(std::size_t n) { return split_quadratic_fn(n, 1.0); }

/// f = max lambda_i. Not differentiable where the maximum is tied.
inline SymmetricFn max_eigenvalue_fn(std::size_t n) {
  auto argmax = [](Eigenvalues l) {
    return static_cast<std::size_t>(std::max_element(l.begin(), l.end()) - l.begin());
  };
  return SymmetricFn(
      "max_eigenvalue", n, [](Eigenvalues l) { return *std::max_element(l.begin(), l.end()); },
      [argmax](Eigenvalues l) {
        std::vector<double> g(l.size(), 0.0);
        g[argmax(l)] = 1.0;
        return g;
      },
      [](Eigenvalues l) { return Matrix(l.size(), l.size()); }, 1.0, true,
      [](Eigenvalues l) {
        const double top = *std::max_element(l.begin(), l.end());
        std::vector<std::size_t> k;
        for (std::size_t i = 0; i < l.size(); ++i)
          if (l[i] == top) k.push_back(i);
        if (k.size() == 1) k.clear();
        return k;
      });
}

struct CustomFnValidation {
  std::size_t points = 8;
  std::uint64_t seed = 0;
  double step = 1e-4;
  double tolerance = 1e-6;
};

/// Registers a user-supplied f. Gradient and Hessian callables are checked
/// against central differences of the value (and permutation symmetry) at
/// random points in [-2, 2]^n; a mismatch throws DomainError.
inline SymmetricFn make_custom_fn(std::string name, std::size_t n, SymmetricFn::ValueFn value,
                                  SymmetricFn::GradFn grad, SymmetricFn::HessFn hess,
                                  std::optional<double> homogeneity_degree, bool convex,
                                  CustomFnValidation check = {}) {
  SymmetricFn fn(name, n, value, grad, hess, homogeneity_degree, convex);
  std::mt19937_64 rng(check.seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double h = check.step;
  for (std::size_t p = 0; p < check.points; ++p) {
    std::vector<double> l(n);
    for (auto& x : l) x = u(rng);
    const double f0 = fn.value(l);
    const auto g = fn.grad(l);
    const Matrix hs = fn.hess(l);
    const double scale = std::max({1.0, std::abs(f0), max_abs(g), hs.max_abs()});

    std::vector<double> rev(l.rbegin(), l.rend());
    std::vector<double> rot(l.begin() + 1, l.end());
    rot.push_back(l.front());
    for (const auto& perm : {rev, rot})
      if (std::abs(fn.value(perm) - f0) > check.tolerance * scale)
        throw DomainError("make_custom_fn '" + name + "': not permutation symmetric");

    auto shifted = [&](std::size_t i, double di, std::size_t j, double dj) {
      std::vector<double> x = l;
      x[i] += di;
      x[j] += dj;
      return fn.value(x);
    };
    for (std::size_t i = 0; i < n; ++i) {
      const double gi = (shifted(i, h, i, 0.0) - shifted(i, -h, i, 0.0)) / (2.0 * h);
      if (std::abs(gi - g[i]) > check.tolerance * scale)
        throw DomainError("make_custom_fn '" + name + "': gradient mismatch at index " +
                          std::to_string(i));
      for (std::size_t j = 0; j < n; ++j) {
        double hij;
        if (i == j) {
          hij = (shifted(i, h, i, 0.0) - 2.0 * f0 + shifted(i, -h, i, 0.0)) / (h * h);
        } else {
          hij = (shifted(i, h, j, h) - shifted(i, h, j, -h) - shifted(i, -h, j, h) +
                 shifted(i, -h, j, -h)) /
                (4.0 * h * h);
        }
        if (std::abs(hij - hs(i, j)) > 100.0 * check.tolerance * scale)
          throw DomainError("make_custom_fn '" + name + "': Hessian mismatch at (" +
                            std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
  return fn;
}

// ---------------------------------------------------------------------------
// Derivatives of F at diagonal points

inline constexpr double kDefaultTieTolerance = 1e-8;

/// Gradient of F at diag(Lambda): diagonal f_i, zero off the diagonal.
inline SymMatrix grad_F_at_diagonal(const SymmetricFn& f, Eigenvalues lambda) {
  const auto g = f.grad(lambda);
  return SymMatrix::diagonal(g);
}

struct SpectralHessian {
  Matrix diag_block;  // d2F / da_ii da_jj
  SymMatrix offdiag;  // entry (i, j), i < j, holds d2F / da_ij^2; diagonal unused
  std::vector<std::pair<std::size_t, std::size_t>> degenerate_pairs;  // tied branch taken
  std::vector<std::size_t> nonsmooth_indices;                         // f not C^2 there

  /// Second derivative in the packed coordinates (p, q index a_ij with i <= j).
  Matrix packed(std::size_t n) const {
    const std::size_t m = n * (n + 1) / 2;
    Matrix h(m, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        h(SymMatrix::packed_index(n, i, i), SymMatrix::packed_index(n, j, j)) = diag_block(i, j);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::size_t p = SymMatrix::packed_index(n, i, j);
        h(p, p) = offdiag(i, j);
      }
    return h;
  }
};

inline bool eigenvalues_tied(double li, double lj, double max_abs_lambda, double tie_tol) {
  return std::abs(li - lj) <= tie_tol * (1.0 + max_abs_lambda);
}

/// d2F/da_ij^2 for i != j at diag(Lambda), choosing between the divided
/// difference and the tied branch.
inline double offdiag_second_derivative(std::span<const double> grad, const Matrix& hess,
                                        Eigenvalues lambda, std::size_t i, std::size_t j,
                                        double tie_tol, bool* tied = nullptr) {
  const bool t = eigenvalues_tied(lambda[i], lambda[j], max_abs(lambda), tie_tol);
  if (tied) *tied = t;
  if (t) return 2.0 * hess(i, i) - 2.0 * hess(i, j);
  return 2.0 * (grad[j] - grad[i]) / (lambda[j] - lambda[i]);
}

inline SpectralHessian hess_F_at_diagonal(const SymmetricFn& f, Eigenvalues lambda,
                                          double tie_tol = kDefaultTieTolerance) {
  if (!(tie_tol >= 0.0)) throw DomainError("hess_F_at_diagonal: tie_tol must be >= 0");
  const std::size_t n = lambda.size();
  const auto g = f.grad(lambda);
  SpectralHessian out{f.hess(lambda), SymMatrix(n), {}, f.kinks(lambda)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      bool tied = false;
      out.offdiag.set(i, j, offdiag_second_derivative(g, out.diag_block, lambda, i, j, tie_tol, &tied));
      if (tied) out.degenerate_pairs.emplace_back(i, j);
    }
  return out;
}

/// Overloads taking the spectrum of a diagonal base point.
inline void require_diagonal_point(const Spectrum& s) {
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (s.rotation(i, j) != (i == j ? 1.0 : 0.0))
        throw DomainError("spectrum does not belong to a diagonal base point (rotation != identity)");
}

inline SymMatrix grad_F_at_diagonal(const SymmetricFn& f, const Spectrum& s) {
  require_diagonal_point(s);
  return grad_F_at_diagonal(f, Eigenvalues(s.values));
}

inline SpectralHessian hess_F_at_diagonal(const SymmetricFn& f, const Spectrum& s,
                                          double tie_tol = kDefaultTieTolerance) {
  require_diagonal_point(s);
  return hess_F_at_diagonal(f, Eigenvalues(s.values), tie_tol);
}

/// Spectrum of diag(values) kept in coordinate order (rotation = identity).
inline Spectrum diagonal_spectrum(std::vector<double> values) {
  const std::size_t n = values.size();
  return Spectrum{std::move(values), Matrix::identity(n)};
}

/// Second-order jet of a matrix field x -> A(x) at x0 (spatial dimension `dim`).
struct MatrixFieldJet {
  SymMatrix value;                 // A(x0), diagonal
  std::vector<SymMatrix> first;    // d_k A, k < dim
  std::vector<SymMatrix> second;   // d_kh A at index k * dim + h

  std::size_t dim() const { return first.size(); }
};

struct CompositeDerivatives {
  std::vector<double> gradient;
  Matrix hessian;
  std::vector<std::pair<std::size_t, std::size_t>> degenerate_pairs;
};

/// First and second derivatives of x -> F(A(x)) at a point where A is diagonal.
inline CompositeDerivatives composite_derivatives(const SymmetricFn& f, const MatrixFieldJet& jet,
                                                  double tie_tol = kDefaultTieTolerance) {
  const std::size_t n = jet.value.size();
  const std::size_t dim = jet.dim();
  if (jet.second.size() != dim * dim)
    throw DomainError("composite_derivatives: second-derivative block has wrong size");
  const double scale = 1.0 + jet.value.frobenius_norm();
  if (jet.value.off_diagonal_norm() > 1e-12 * scale)
    throw DomainError("composite_derivatives: A(x0) is not diagonal");

  std::vector<double> lambda(n);
  for (std::size_t i = 0; i < n; ++i) lambda[i] = jet.value(i, i);
  const auto fg = f.grad(lambda);
  const SpectralHessian sh = hess_F_at_diagonal(f, lambda, tie_tol);

  CompositeDerivatives out{std::vector<double>(dim, 0.0), Matrix(dim, dim), sh.degenerate_pairs};
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t i = 0; i < n; ++i) out.gradient[k] += fg[i] * jet.first[k](i, i);

  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t h = 0; h < dim; ++h) {
      const SymMatrix& akh = jet.second[k * dim + h];
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += fg[i] * akh(i, i);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          s += sh.offdiag(i, j) * jet.first[k](i, j) * jet.first[h](i, j);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          s += sh.diag_block(i, j) * jet.first[h](i, i) * jet.first[k](j, j);
      out.hessian(k, h) = s;
    }
  return out;
}

}  // namespace capcone
