#pragma once

// Curvature competitors and the pointwise algebra behind Simons-type
// inequalities on minimal cones, in the interior and at a capillary free
// boundary.
//
// Competitors are c = (sum_{lambda_i >= 0} lambda_i^2 + a sum_{lambda_s < 0} lambda_s^2)^{1/2}
// and their regularized powers w = (c^2 + eps)^{alpha/2}; a = 1 gives c = |A|.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "capcone/jet.hpp"
#include "capcone/spectral.hpp"

namespace capcone {

enum class CompetitorFamily { PowerOfNormA, SplitQuadratic };

struct CompetitorSpec {
  CompetitorFamily family = CompetitorFamily::SplitQuadratic;
  double a = 4.0;
  double alpha = 1.0 / 3.0;
  double epsilon = 0.0;

  /// Weight on negative curvatures; 1 for the power-of-|A| family.
  double weight() const { return family == CompetitorFamily::PowerOfNormA ? 1.0 : a; }

  void validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("competitor: a must be > 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("competitor: alpha must lie in (0, 1)");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
      throw DomainError("competitor: epsilon must be >= 0");
  }
};

inline CompetitorSpec power_competitor(double alpha, double epsilon = 0.0) {
  return {CompetitorFamily::PowerOfNormA, 1.0, alpha, epsilon};
}
inline CompetitorSpec split_competitor(double a, double alpha, double epsilon = 0.0) {
  return {CompetitorFamily::SplitQuadratic, a, alpha, epsilon};
}

inline SymmetricFn competitor_fn(const CompetitorSpec& spec, std::size_t n) {
  spec.validate();
  return split_quadratic_fn(n, spec.weight());
}

struct CompetitorValue {
  double c;
  double w;  // (c^2 + eps)^{alpha / 2}
};

inline CompetitorValue competitor_value(const CompetitorSpec& spec, Eigenvalues lambda) {
  spec.validate();
  double c2 = 0.0;
  for (double x : lambda) c2 += (x >= 0.0 ? 1.0 : spec.weight()) * x * x;
  return {std::sqrt(c2), std::pow(c2 + spec.epsilon, spec.alpha / 2.0)};
}

inline CompetitorValue competitor_value(const CompetitorSpec& spec, const Spectrum& s) {
  return competitor_value(spec, Eigenvalues(s.values));
}

/// Signed cubic sum sum_{lambda_i >= 0} lambda_i^3 + a sum_{lambda_s < 0} lambda_s^3.
inline double weighted_cubic(Eigenvalues lambda, double a) {
  double s = 0.0;
  for (double x : lambda) s += (x >= 0.0 ? 1.0 : a) * x * x * x;
  return s;
}

// ---------------------------------------------------------------------------
// Ledger

enum class Relation { GreaterEqual, Equal };

/// One evaluated inequality or identity, lhs (>= or =) rhs.
struct InequalityLedger {
  std::string context;
  Relation relation = Relation::GreaterEqual;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;  // absolute
  std::string witness;

  bool holds() const {
    return relation == Relation::GreaterEqual ? gap >= -tolerance : std::abs(gap) <= tolerance;
  }
};

inline InequalityLedger ledger_entry(std::string context, Relation rel, double lhs, double rhs,
                                     double tolerance, std::string witness = {}) {
  return {std::move(context), rel, lhs, rhs, lhs - rhs, tolerance, std::move(witness)};
}

inline std::string format_vector(std::span<const double> v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// Interior chain at a point of a minimal cone

/// Pointwise data at x0 = r e_0 on a minimal cone, in coordinates where the
/// second fundamental form is diag(lambda) and e_0 is radial. `thirds` holds
/// the covariant derivatives u_ijk of the second fundamental form.
struct ConeConfig {
  std::vector<double> lambda;
  Tensor3 thirds;
  double radius = 1.0;

  std::size_t n() const { return lambda.size(); }
};

inline double cone_scale(const ConeConfig& cfg) {
  return std::pow(1.0 + max_abs(cfg.lambda) + cfg.thirds.max_abs() + 1.0 / cfg.radius, 3);
}

/// Largest violation of the cone constraints, relative to the data size.
inline double cone_constraint_violation(const ConeConfig& cfg) {
  const std::size_t n = cfg.n();
  const double r = cfg.radius;
  const double scale = 1.0 + max_abs(cfg.lambda) + cfg.thirds.max_abs();
  double v = std::abs(cfg.lambda[0]) + std::abs(sum(cfg.lambda));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      v = std::max(v, std::abs(r * cfg.thirds(i, j, 0) + (i == j ? cfg.lambda[i] : 0.0)));
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += cfg.thirds(i, i, k);
    v = std::max(v, std::abs(s));
  }
  return v / scale;
}

/// Random cone data: curvatures uniform in [-2, 2] shifted to trace zero,
/// tangential thirds uniform in [-2, 2] projected to be trace free in every
/// slot, radius uniform in [0.5, 2].
inline ConeConfig random_cone_configuration(std::size_t n, std::mt19937_64& rng) {
  if (n < 3 || n > kMaxDimension) throw DomainError("random_cone_configuration: n outside [3, 16]");
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> ur(0.5, 2.0);
  ConeConfig cfg{std::vector<double>(n, 0.0), Tensor3(n), ur(rng)};
  const std::size_t m = n - 1;
  double mean = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    cfg.lambda[i] = u(rng);
    mean += cfg.lambda[i] / static_cast<double>(m);
  }
  for (std::size_t i = 1; i < n; ++i) cfg.lambda[i] -= mean;

  Tensor3 t(n);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) t.set(i, j, k, u(rng));
  std::vector<double> v(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = 1; i < n; ++i) v[k] += t(i, i, k);
    v[k] /= static_cast<double>(m + 2);
  }
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        const double d = (i == j ? v[k] : 0.0) + (i == k ? v[j] : 0.0) + (j == k ? v[i] : 0.0);
        cfg.thirds.set(i, j, k, t(i, j, k) - d);
      }
  for (std::size_t i = 0; i < n; ++i) cfg.thirds.set(i, i, 0, -cfg.lambda[i] / cfg.radius);
  return cfg;
}

/// Matrix-field jet of the second fundamental form at x0. Second derivatives
/// carry only the Simons identity Delta a_ii = -lambda_i |A|^2, spread evenly
/// over the coordinate directions.
inline MatrixFieldJet cone_matrix_jet(const ConeConfig& cfg) {
  const std::size_t n = cfg.n();
  MatrixFieldJet jet{SymMatrix::diagonal(cfg.lambda), std::vector<SymMatrix>(n, SymMatrix(n)),
                     std::vector<SymMatrix>(n * n, SymMatrix(n))};
  const double a2 = sum_of_powers(cfg.lambda, 2);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) jet.first[k].set(i, j, cfg.thirds(i, j, k));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      jet.second[k * n + k].set(i, i, -cfg.lambda[i] * a2 / static_cast<double>(n));
  return jet;
}

struct InteriorChain {
  double c = 0.0;
  std::vector<double> grad_c;
  double laplacian_c = 0.0;
  double lhs = 0.0;  // (1/2) Delta c^2 - |grad c|^2 + |A|^2 c^2
  std::vector<InequalityLedger> ledger;
};

/// Evaluates the interior chain for a convex 1-homogeneous f on cone data.
/// Every ledger tolerance is `rel_tol` times cone_scale(cfg).
inline InteriorChain simons_interior_chain(const SymmetricFn& f, const ConeConfig& cfg,
                                           double rel_tol = 1e-12) {
  const std::size_t n = cfg.n();
  if (f.arity() != n) throw DomainError("simons_interior_chain: arity mismatch");
  if (f.homogeneity_degree() != 1.0)
    throw DomainError("simons_interior_chain: f must be flagged 1-homogeneous");
  if (!f.convex()) throw DomainError("simons_interior_chain: f must be convex");
  if (!(cfg.radius > 0.0)) throw DomainError("simons_interior_chain: radius must be positive");
  if (cone_constraint_violation(cfg) > 1e-12)
    throw DomainError("simons_interior_chain: cone constraints violated");

  const auto& l = cfg.lambda;
  const double r = cfg.radius;
  const double tol = rel_tol * cone_scale(cfg);
  const std::string witness = "lambda=" + format_vector(l) + " r=" + std::to_string(r);
  InteriorChain out;
  out.grad_c.assign(n, 0.0);
  out.c = f.value(l);
  if (out.c == 0.0) {
    // Flat point: c vanishes to first order and every term of the chain is zero.
    for (const char* ctx : {"remainder", "radial_identity", "pair_sum_identity", "simons_lower_bound"})
      out.ledger.push_back(ledger_entry(ctx, Relation::GreaterEqual, 0.0, 0.0, tol, witness));
    return out;
  }

  const auto g = f.grad(l);
  const SpectralHessian sh = hess_F_at_diagonal(f, l);
  const auto cd = composite_derivatives(f, cone_matrix_jet(cfg));
  out.grad_c = cd.gradient;
  for (std::size_t k = 0; k < n; ++k) out.laplacian_c += cd.hessian(k, k);
  double grad2 = 0.0;
  for (double x : out.grad_c) grad2 += x * x;
  const double a2 = sum_of_powers(l, 2);
  const double c = out.c;
  out.lhs = c * out.laplacian_c + a2 * c * c;

  double rem = 0.0, quad = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) rem += sh.offdiag(i, j) * std::pow(cfg.thirds(i, j, k), 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) quad += sh.diag_block(i, j) * cfg.thirds(i, i, k) * cfg.thirds(j, j, k);
  }
  out.ledger.push_back(ledger_entry("remainder_expansion", Relation::Equal, out.lhs, c * (rem + quad), tol, witness));
  out.ledger.push_back(ledger_entry("remainder", Relation::GreaterEqual, out.lhs, c * rem, tol, witness));

  for (std::size_t k = 0; k < n; ++k) {
    double weighted = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const double half_d2 = 0.5 * offdiag_second_derivative(g, sh.diag_block, l, std::min(i, k), std::max(i, k),
                                                              kDefaultTieTolerance);
      weighted += half_d2 * std::pow(cfg.thirds(i, i, k), 2);
      pairs += (l[i] - l[k]) * (g[i] - g[k]);
    }
    out.ledger.push_back(ledger_entry("cauchy_schwarz[" + std::to_string(k) + "]", Relation::GreaterEqual,
                                      weighted * pairs, out.grad_c[k] * out.grad_c[k], tol, witness));
  }

  out.ledger.push_back(ledger_entry("radial_identity", Relation::Equal, out.grad_c[0], -c / r, tol, witness));

  double pair_sum = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pair_sum += (l[i] - l[j]) * (g[i] - g[j]);
  out.ledger.push_back(ledger_entry("pair_sum_identity", Relation::Equal, pair_sum,
                                    static_cast<double>(n - 1) * c, 1e-10 * (1.0 + std::abs(c)), witness));

  const double nd = static_cast<double>(n);
  const double lower = 2.0 / (nd - 1.0) * grad2 + 2.0 * (nd - 2.0) / (nd - 1.0) * c * c / (r * r);
  out.ledger.push_back(ledger_entry("simons_lower_bound", Relation::GreaterEqual, out.lhs, lower, tol, witness));
  return out;
}

/// Regularized power w = (|A|^2 + eps)^{alpha/2}: the exact value of
/// ((1/2) Delta w^2 - |grad w|^2 + |A|^2 w^2) / w^2 against the lower bound
/// implied by the interior chain, for each eps.
inline std::vector<InequalityLedger> regularized_power_chain(const ConeConfig& cfg, double alpha,
                                                             std::span<const double> epsilons,
                                                             double rel_tol = 1e-12) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("regularized_power_chain: alpha must lie in (0, 1)");
  const std::size_t n = cfg.n();
  const auto chain = simons_interior_chain(frobenius_fn(n), cfg, rel_tol);
  const double c = chain.c;
  const double c2 = c * c;
  double g2 = 0.0;
  for (double x : chain.grad_c) g2 += x * x;
  const double a2 = sum_of_powers(cfg.lambda, 2);
  const double nd = static_cast<double>(n);
  const double r = cfg.radius;
  const double scale = cone_scale(cfg);

  std::vector<InequalityLedger> out;
  std::optional<double> limit;
  if (c > 0.0)
    limit = (1.0 - alpha) * a2 + 2.0 * alpha * (nd - 2.0) / (nd - 1.0) / (r * r) +
            alpha * (alpha - 1.0 + 2.0 / (nd - 1.0)) * g2 / c2;
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw DomainError("regularized_power_chain: eps must be positive");
    const double s = c2 + eps;
    const double exact = alpha * (c * chain.laplacian_c + g2) / s + alpha * (alpha - 2.0) * c2 * g2 / (s * s) + a2;
    const double bound = (1.0 - alpha * c2 / s) * a2 + 2.0 * alpha * (nd - 2.0) / (nd - 1.0) * (c2 / s) / (r * r) +
                         alpha * g2 / s * ((nd + 1.0) / (nd - 1.0) - (2.0 - alpha) * c2 / s);
    const std::string tag = "[eps=" + std::to_string(eps) + "]";
    out.push_back(ledger_entry("regularized_power" + tag, Relation::GreaterEqual, exact, bound,
                               rel_tol * scale / std::min(1.0, s)));
    if (limit)
      out.push_back(ledger_entry("regularized_power_limit" + tag, Relation::Equal, bound, *limit,
                                 10.0 * eps / c2 * (a2 + 1.0 / (r * r) + g2 / c2) + rel_tol * scale));
  }
  return out;
}

struct PowerBound {
  double constant;                   // interior constant for w = |A|^alpha
  std::optional<double> simplified;  // alpha (alpha + 1) / r^2 when alpha >= 1 - 2/(n-1)
  std::vector<InequalityLedger> ledger;
};

inline PowerBound power_interior_bound(double alpha, double normA, double gradNormA, double radius,
                                       std::size_t n) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("power_interior_bound: alpha must lie in (0, 1)");
  if (n < 3) throw DomainError("power_interior_bound: n must be >= 3");
  if (!(normA > 0.0) || !(radius > 0.0)) throw DomainError("power_interior_bound: |A| and radius must be positive");
  const double floor = normA / radius;
  if (gradNormA < floor * (1.0 - 1e-14))
    throw DomainError("power_interior_bound: |grad |A|| below the homogeneity floor |A|/r");
  const double nd = static_cast<double>(n);
  const double q = gradNormA / normA;
  PowerBound out{2.0 * alpha * (nd - 2.0) / ((nd - 1.0) * radius * radius) +
                     alpha * (alpha - 1.0 + 2.0 / (nd - 1.0)) * q * q,
                 std::nullopt,
                 {}};
  const double tol = 1e-12 * (1.0 + std::abs(out.constant));
  out.ledger.push_back(ledger_entry("power_constant", Relation::GreaterEqual, out.constant, 0.0, tol));
  if (alpha * (nd - 1.0) >= (nd - 3.0) * (1.0 - 1e-15)) {
    out.simplified = alpha * (alpha + 1.0) / (radius * radius);
    out.ledger.push_back(
        ledger_entry("power_simplified", Relation::GreaterEqual, out.constant, *out.simplified, tol));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boundary identities at a free-boundary jet

namespace detail {

/// d lambda_j / dx_k at x0 in coordinate order. The shape operator
/// S = g^{-1} D2u / W is g-self-adjoint and g is diagonal at x0, so the
/// eigenvalue derivative is the derivative of the diagonal entry S_jj.
inline std::vector<double> curvature_derivatives(const BoundaryJet& jet, std::size_t k) {
  const std::size_t n = jet.n();
  std::vector<Dual> p;
  std::vector<std::vector<Dual>> h;
  dual_along(jet, k, p, h);
  Dual p2 = 0.0;
  for (const Dual& x : p) p2 += x * x;
  const Dual w2 = Dual(1.0) + p2;
  const Dual w = sqrt(w2);
  // g^{-1} = (I - q q^T) + q q^T / W^2 with q = Du / |Du|, as in norm_A2.
  const Dual len = sqrt(p2);
  std::vector<Dual> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = p[i] / len;
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    Dual qh = 0.0;
    for (std::size_t l = 0; l < n; ++l) qh += q[l] * h[l][j];
    const Dual sjj = (h[j][j] - q[j] * qh) + q[j] * qh / w2;
    out[j] = (sjj / w).d;
  }
  return out;
}

}  // namespace detail

/// (1/2)(grad_M |A|^2, eta) by differentiating the coordinate expression of
/// |A|^2 along the jet, against 2 cos(theta) H |A|^2 + cot(theta) sum lambda^3.
inline InequalityLedger boundary_identity_A2(const BoundaryJet& jet) {
  const std::size_t N = jet.n() - 1;
  std::vector<Dual> p;
  std::vector<std::vector<Dual>> h;
  detail::dual_along(jet, N, p, h);
  const Dual a2 = detail::norm_A2(p, h);
  const double direct = eta_derivative(jet, 0.5 * a2.d);

  const double th = jet.spec().theta;
  const auto l = principal_curvatures_by_index(jet);
  const double normA2 = sum_of_powers(l, 2);
  const double closed = 2.0 * std::cos(th) * mean_curvature_fb(jet) * normA2 + sum_of_powers(l, 3) / std::tan(th);
  const double tol = 1e-10 * (1.0 + std::pow(normA2, 1.5));
  return ledger_entry("boundary_norm_A2", Relation::Equal, direct, closed, tol, format_vector(l));
}

/// Boundary derivative of the split competitor c^2 with weight a. Records
/// the two intermediate curvature derivatives and the final closed form
///   (1/2)(grad_M c^2, eta) = cos(theta) H (c^2 + a_n |A|^2) + cot(theta) C3
/// with a_n = a when H > 0 and 1 otherwise, C3 the weighted cubic sum.
inline std::vector<InequalityLedger> boundary_identity_split(const BoundaryJet& jet, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("boundary_identity_split: a must be > 0");
  const std::size_t N = jet.n() - 1;
  const double th = jet.spec().theta;
  const double sn = std::sin(th);
  const double H = mean_curvature_fb(jet);
  const auto l = principal_curvatures_by_index(jet);
  const auto dl = detail::curvature_derivatives(jet, N);
  const double normA2 = sum_of_powers(l, 2);
  const double scale = std::pow(1.0 + max_abs(l), 3) * (1.0 + 1.0 / sn);
  const double tol = 1e-10 * scale;
  const std::string witness = format_vector(l);
  std::vector<InequalityLedger> out;

  for (std::size_t j = 0; j < N; ++j)
    out.push_back(ledger_entry("boundary_tangential_curvature_derivative[" + std::to_string(j) + "]",
                               Relation::Equal, dl[j], l[j] * l[j] / sn + H * l[j], tol, witness));

  double normal_rate;
  if (l[N] != 0.0) {
    normal_rate = H / l[N] * normA2;
  } else {
    if (std::abs(H) > 1e-12 * (1.0 + max_abs(l)))
      throw Error("boundary_identity_split: lambda_n = 0 with H != 0 contradicts the free-boundary identity");
    normal_rate = -normA2 / sn;
  }
  out.push_back(ledger_entry("boundary_normal_curvature_derivative", Relation::Equal, dl[N], normal_rate, tol, witness));

  double half_dc2 = 0.0, c2 = 0.0;
  for (std::size_t j = 0; j <= N; ++j) {
    const double wj = l[j] >= 0.0 ? 1.0 : a;
    half_dc2 += wj * l[j] * dl[j];
    c2 += wj * l[j] * l[j];
  }
  const double an = H > 0.0 ? a : 1.0;
  const double closed = std::cos(th) * H * (c2 + an * normA2) + weighted_cubic(l, a) / std::tan(th);
  out.push_back(ledger_entry("boundary_split", Relation::Equal, eta_derivative(jet, half_dc2), closed, tol, witness));
  return out;
}

// ---------------------------------------------------------------------------
// Boundary L-function and admissible exponents

/// Boundary ratio L whose sign condition H (1 - alpha L) >= 0 selects the
/// admissible exponents. `lambda` are the principal curvatures at a boundary
/// point and H the mean curvature of the free boundary (H != 0).
inline double L_function(const CompetitorSpec& spec, Eigenvalues lambda, double theta, double H) {
  if (H == 0.0) throw DomainError("L_function: H = 0, use the zero-H condition instead");
  const double sh = std::sin(theta) * H;
  const double normA2 = sum_of_powers(lambda, 2);
  if (spec.family == CompetitorFamily::PowerOfNormA) {
    if (normA2 == 0.0) throw DomainError("L_function: |A| = 0");
    return 2.0 + sum_of_powers(lambda, 3) / (sh * normA2);
  }
  const double c2 = std::pow(competitor_value(spec, lambda).c, 2);
  if (c2 == 0.0) throw DomainError("L_function: c = 0");
  const double lead = H > 0.0 ? spec.a : 1.0;
  return 1.0 + lead * normA2 / c2 + weighted_cubic(lambda, spec.a) / (sh * c2);
}

inline double L_function(const CompetitorSpec& spec, const Spectrum& s, double theta, double H) {
  return L_function(spec, Eigenvalues(s.values), theta, H);
}

/// Condition value at H = 0: minus the cubic sum, required to be >= 0.
inline double zero_H_condition(const CompetitorSpec& spec, Eigenvalues lambda) {
  return -weighted_cubic(lambda, spec.weight());
}

struct BoundarySample {
  std::vector<double> lambda;
  double H;
};

struct AlphaInterval {
  bool feasible = true;
  double lo = 0.0, hi = 1.0;
  bool lo_closed = false, hi_closed = false;
  std::vector<std::string> notes;

  bool contains(double alpha) const {
    if (!feasible) return false;
    const bool above = lo_closed ? alpha >= lo : alpha > lo;
    const bool below = hi_closed ? alpha <= hi : alpha < hi;
    return above && below;
  }
};

/// Intersects H (1 - alpha L) >= 0 over the samples, together with the
/// zero-H cubic condition, inside (0, 1).
inline AlphaInterval admissible_alpha(const CompetitorSpec& spec, const std::vector<BoundarySample>& samples,
                                      double theta) {
  AlphaInterval out;
  auto tighten_hi = [&](double v) {
    if (v < out.hi || (v == out.hi && !out.hi_closed)) {
      out.hi = v;
      out.hi_closed = v < 1.0;
    }
  };
  auto tighten_lo = [&](double v) {
    if (v > out.lo || (v == out.lo && !out.lo_closed)) {
      out.lo = v;
      out.lo_closed = v > 0.0;
    }
  };
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& smp = samples[s];
    const std::string tag = "sample " + std::to_string(s) + ": ";
    if (smp.H == 0.0) {
      const double cond = zero_H_condition(spec, smp.lambda);
      out.notes.push_back(tag + "H = 0, condition value " + std::to_string(cond));
      if (cond < 0.0) out.feasible = false;
      continue;
    }
    const double L = L_function(spec, smp.lambda, theta, smp.H);
    if (smp.H > 0.0) {
      if (L > 0.0) tighten_hi(1.0 / L);
      out.notes.push_back(tag + "H > 0, L = " + std::to_string(L));
    } else {
      if (L > 0.0) {
        tighten_lo(1.0 / L);
      } else {
        out.feasible = false;
      }
      out.notes.push_back(tag + "H < 0, L = " + std::to_string(L));
    }
  }
  if (out.lo > out.hi || (out.lo == out.hi && !(out.lo_closed && out.hi_closed)) || out.lo >= 1.0 ||
      out.hi <= 0.0)
    out.feasible = false;
  return out;
}

}  // namespace capcone
