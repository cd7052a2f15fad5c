#include <catch_amalgamated.hpp>

#include <random>

#include "capcone/fd_oracle.hpp"
#include "capcone/sampling.hpp"
#include "capcone/spectral.hpp"
#include "oracles.hpp"

using namespace capcone;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

oracle::Dense to_dense(const SymMatrix& a) {
  oracle::Dense d(a.size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) d[i][j] = a(i, j);
  return d;
}

oracle::SpectralFn wrap(const SymmetricFn& f) {
  return [f](const std::vector<double>& l) { return f.value(l); };
}

}  // namespace

TEST_CASE("jacobi matches bisection eigenvalues and reconstructs") {
  std::mt19937_64 rng(11);
  for (std::size_t n = 2; n <= 9; ++n)
    for (int s = 0; s < 20; ++s) {
      const SymMatrix a = random_symmetric(n, rng);
      const Spectrum sp = jacobi_eigh(a);
      const auto ref = oracle::eigenvalues(to_dense(a));
      for (std::size_t i = 0; i < n; ++i) CHECK_THAT(sp.values[i], WithinAbs(ref[i], 1e-12));
      REQUIRE(std::is_sorted(sp.values.rbegin(), sp.values.rend()));
      const Matrix back = sp.rotation * SymMatrix::diagonal(sp.values).dense() * sp.rotation.transposed();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) CHECK_THAT(back(i, j), WithinAbs(a(i, j), 1e-12));
    }
}

TEST_CASE("jacobi reports non-convergence with its residual") {
  SymMatrix a(3);
  a.set(0, 1, 1.0);
  a.set(1, 2, 1.0);
  try {
    jacobi_eigh(a, {1e-13, 0});
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("symmetric matrices need dimension two to sixteen") {
  CHECK_THROWS_AS(SymMatrix(1), DomainError);
  CHECK_THROWS_AS(SymMatrix(17), DomainError);
  CHECK_NOTHROW(SymMatrix(16));
}

TEST_CASE("closed-form gradient and Hessian agree with the bisection oracle") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {2u, 3u, 4u, 5u}) {
    for (const auto& f : builtin_families(n, 4.0)) {
      for (int s = 0; s < 4; ++s) {
        const auto l = random_separated_spectrum(n, rng);
        const SymMatrix a = SymMatrix::diagonal(l);
        const auto ref = oracle::derivatives(wrap(f), to_dense(a));
        const auto g = grad_F_at_diagonal(f, l);
        const std::vector<double> gp(g.packed().begin(), g.packed().end());
        CHECK(oracle::max_rel(gp, ref.gradient) < 1e-7);
        const Matrix h = hess_F_at_diagonal(f, l).packed(n);
        for (std::size_t p = 0; p < h.rows(); ++p) {
          std::vector<double> row(h.cols());
          for (std::size_t q = 0; q < h.cols(); ++q) row[q] = h(p, q);
          INFO(f.name() << " n=" << n << " row " << p);
          CHECK(oracle::max_rel(row, ref.hessian[p]) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("library finite differences agree with the oracle off the diagonal") {
  std::mt19937_64 rng(8);
  const auto f = split_quadratic_fn(4, 4.0);
  const auto l = random_separated_spectrum(4, rng);
  const SymMatrix a = conjugate_diagonal(random_orthogonal(4, rng), l);
  const auto fd = fd_oracle(f, a, 1e-4);
  const auto ref = oracle::derivatives(wrap(f), to_dense(a));
  CHECK(oracle::max_rel(fd.gradient, ref.gradient) < 1e-7);
  CHECK_FALSE(fd.degenerate());
}

TEST_CASE("frozen second derivatives") {
  // |lambda| at (3, 4): f_i = lambda_i / 5, divided difference 2 (f_j - f_i)/(lambda_j - lambda_i) = 2/5.
  const auto frob = frobenius_fn(2);
  const std::vector<double> l{3.0, 4.0};
  CHECK_THAT(frob.value(l), WithinRel(5.0, 1e-15));
  const auto h = hess_F_at_diagonal(frob, l);
  CHECK_THAT(h.offdiag(0, 1), WithinRel(0.4, 1e-14));
  CHECK_THAT(h.diag_block(0, 0), WithinRel(16.0 / 125.0, 1e-14));
  CHECK_THAT(h.diag_block(0, 1), WithinRel(-12.0 / 125.0, 1e-14));

  // tr A^2 has d2/da_ij^2 = 4 off the diagonal whether or not eigenvalues tie.
  const auto sq = sum_squares_fn(3);
  const std::vector<double> tied{1.0, 1.0, -2.0};
  const auto ht = hess_F_at_diagonal(sq, tied);
  CHECK(ht.offdiag(0, 1) == 4.0);
  CHECK(ht.offdiag(0, 2) == 4.0);
  REQUIRE(ht.degenerate_pairs.size() == 1);
  CHECK(ht.degenerate_pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});

  // Split weight 4 at (1, -1): sqrt(1 + 4) with f = (1/sqrt5, -4/sqrt5).
  const auto split = split_quadratic_fn(2, 4.0);
  const std::vector<double> s{1.0, -1.0};
  CHECK_THAT(split.value(s), WithinRel(std::sqrt(5.0), 1e-15));
  CHECK_THAT(hess_F_at_diagonal(split, s).offdiag(0, 1), WithinRel(5.0 / std::sqrt(5.0), 1e-14));
}

TEST_CASE("tied branch is the limit of the divided difference") {
  for (const auto& f : builtin_families(3, 4.0)) {
    const std::vector<double> base{0.7, 0.7, -1.3};
    const double tied = hess_F_at_diagonal(f, base).offdiag(0, 1);
    const std::vector<double> near{0.7 + 1e-6, 0.7, -1.3};
    const double dd = hess_F_at_diagonal(f, near, 0.0).offdiag(0, 1);
    INFO(f.name());
    CHECK_THAT(dd, WithinAbs(tied, 1e-5));
  }
}

TEST_CASE("kinks are reported, not differentiated through") {
  const auto split = split_quadratic_fn(3, 4.0);
  const std::vector<double> l{1.0, 0.0, -1.0};
  CHECK(hess_F_at_diagonal(split, l).nonsmooth_indices == std::vector<std::size_t>{1});
  // The split form is C^1 there, so only the curvature jumps: the two
  // one-sided second differences straddle the symmetric one.
  const std::vector<double> up{1.0, 1e-3, -1.0}, down{1.0, -1e-3, -1.0};
  CHECK(hess_F_at_diagonal(split, up).diag_block(1, 1) < hess_F_at_diagonal(split, down).diag_block(1, 1));

  const auto mx = max_eigenvalue_fn(3);
  CHECK_FALSE(mx.smooth_at(std::vector<double>{2.0, 2.0, 0.0}));
  CHECK(mx.smooth_at(std::vector<double>{2.0, 1.0, 0.0}));
  CHECK(fd_oracle(mx, SymMatrix::diagonal(std::vector<double>{2.0, 2.0, 0.0}), 1e-4).degenerate());
}

TEST_CASE("Euler identity for homogeneous families") {
  std::mt19937_64 rng(3);
  for (const auto& f : builtin_families(5, 2.5)) {
    const auto l = random_separated_spectrum(5, rng);
    const auto g = f.grad(l);
    double e = 0.0;
    for (std::size_t i = 0; i < 5; ++i) e += l[i] * g[i];
    REQUIRE(f.homogeneity_degree());
    CHECK_THAT(e, WithinAbs(*f.homogeneity_degree() * f.value(l), 1e-12 * (1 + std::abs(f.value(l)))));
  }
}

TEST_CASE("custom functions are validated on registration") {
  auto value = [](Eigenvalues l) {
    double s = 0;
    for (double x : l) s += std::exp(x);
    return s;
  };
  auto grad = [](Eigenvalues l) {
    std::vector<double> g;
    for (double x : l) g.push_back(std::exp(x));
    return g;
  };
  auto hess = [](Eigenvalues l) {
    Matrix h(l.size(), l.size());
    for (std::size_t i = 0; i < l.size(); ++i) h(i, i) = std::exp(l[i]);
    return h;
  };
  const auto f = make_custom_fn("sum_exp", 3, value, grad, hess, std::nullopt, true);
  CHECK(f.smooth_at(std::vector<double>{0.0, 1.0, 2.0}));

  auto bad_grad = [&](Eigenvalues l) {
    auto g = grad(l);
    g[0] *= 1.5;
    return g;
  };
  CHECK_THROWS_AS(make_custom_fn("wrong", 3, value, bad_grad, hess, std::nullopt, true), DomainError);

  auto lopsided = [](Eigenvalues l) { return l[0] + 2 * l[1] + 3 * l[2]; };
  auto lg = [](Eigenvalues) { return std::vector<double>{1, 2, 3}; };
  auto lh = [](Eigenvalues l) { return Matrix(l.size(), l.size()); };
  CHECK_THROWS_AS(make_custom_fn("lopsided", 3, lopsided, lg, lh, 1.0, true), DomainError);
}

TEST_CASE("composite derivatives follow the chain through the spectrum") {
  std::mt19937_64 rng(21);
  for (const auto& f : builtin_families(3, 4.0)) {
    const auto l = random_separated_spectrum(3, rng);
    // A(x) = diag(l) + x0 B + x1 C + x0 x1 D, evaluated with the oracle.
    const SymMatrix B = random_symmetric(3, rng, 1.0), C = random_symmetric(3, rng, 1.0),
                    D = random_symmetric(3, rng, 1.0);
    MatrixFieldJet jet{SymMatrix::diagonal(l), {B, C}, {SymMatrix(3), D, D, SymMatrix(3)}};
    const auto cd = composite_derivatives(f, jet);
    auto phi = [&](double x0, double x1) {
      oracle::Dense m(3, std::vector<double>(3));
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          m[i][j] = (i == j ? l[i] : 0.0) + x0 * B(i, j) + x1 * C(i, j) + x0 * x1 * D(i, j);
      return f.value(oracle::eigenvalues(m));
    };
    const double h = 1e-3;
    const double g0 = (phi(h, 0) - phi(-h, 0)) / (2 * h);
    const double h01 = (phi(h, h) - phi(h, -h) - phi(-h, h) + phi(-h, -h)) / (4 * h * h);
    const double h00 = (phi(h, 0) - 2 * phi(0, 0) + phi(-h, 0)) / (h * h);
    INFO(f.name());
    CHECK_THAT(cd.gradient[0], WithinAbs(g0, 1e-5));
    CHECK_THAT(cd.hessian(0, 1), WithinAbs(h01, 1e-4));
    CHECK_THAT(cd.hessian(0, 0), WithinAbs(h00, 1e-4));
  }
}
