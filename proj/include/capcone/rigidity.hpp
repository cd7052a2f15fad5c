#pragma once

// Brute-force reproduction of the constants in the rigidity case analysis:
// extremal values of the boundary ratio L over one-parameter curvature
// families, the axially symmetric dimension window, and the graphical
// height-function identities.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "capcone/jet.hpp"
#include "capcone/simons.hpp"
#include "capcone/stability.hpp"

namespace capcone {

// ---------------------------------------------------------------------------
// Scalar optimization

struct Optimum {
  double t;
  double value;
};

/// Golden-section search on [lo, hi]; `maximize` flips the order.
inline Optimum golden_section(const std::function<double(double)>& f, double lo, double hi, bool maximize,
                              int max_iters = 200, double xtol = 1e-12) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto better = [&](double a, double b) { return maximize ? a > b : a < b; };
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iters && (b - a) > xtol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (better(fc, fd) || fc == fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  const double t = 0.5 * (a + b);
  return {t, f(t)};
}

/// Dense polynomial in t, lowest degree first.
struct Poly {
  std::vector<double> c;

  static Poly constant(double v) { return {{v}}; }
  static Poly t() { return {{0.0, 1.0}}; }

  double operator()(double x) const {
    double s = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) s = s * x + c[i];
    return s;
  }
  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r{std::vector<double>(std::max(a.c.size(), b.c.size()), 0.0)};
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r{std::vector<double>(a.c.size() + b.c.size() - 1, 0.0)};
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
  friend Poly operator*(double s, const Poly& a) { return Poly::constant(s) * a; }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-1.0) * b; }

  /// Coefficients of s -> p(x0 + s).
  std::vector<double> taylor_at(double x0) const {
    std::vector<double> out(c.size(), 0.0);
    Poly shifted = constant(0.0);
    const Poly base{{x0, 1.0}};
    for (std::size_t i = c.size(); i-- > 0;) shifted = shifted * base + constant(c[i]);
    for (std::size_t i = 0; i < shifted.c.size() && i < out.size(); ++i) out[i] = shifted.c[i];
    return out;
  }
};

/// Rational function 1 + N(t) / D(t) with D > 0.
struct RatioFamily {
  std::string name;
  Poly num;
  Poly den;

  double operator()(double t) const { return 1.0 + num(t) / den(t); }
};

namespace detail {
inline Poly sq(const Poly& p) { return p * p; }
inline Poly cube(const Poly& p) { return p * p * p; }
inline Poly t_poly() { return Poly::t(); }
inline Poly one_minus_t() { return Poly::constant(1.0) - Poly::t(); }
}  // namespace detail

// Extremal values of L on the two sign branches, t in [0, 1] and t > 1.
inline RatioFamily K1_family() {
  using namespace detail;
  const Poly T = t_poly(), S = one_minus_t();
  return {"K1", 4.0 * (sq(T) + sq(S)) + cube(T) + cube(S), sq(T) + sq(S) + Poly::constant(4.0)};
}
inline RatioFamily K2_family() {
  using namespace detail;
  const Poly T = t_poly(), S = one_minus_t();
  return {"K2", 4.0 * (sq(T) + sq(S)) + cube(T) + 4.0 * cube(S), sq(T) + 4.0 * sq(S) + Poly::constant(4.0)};
}
inline RatioFamily k1_family() {
  using namespace detail;
  const Poly T = t_poly(), S = one_minus_t();
  return {"k1", sq(T) + sq(S) + 4.0 * cube(T) + 4.0 * cube(S), Poly::constant(1.0) + 4.0 * sq(T) + 4.0 * sq(S)};
}
inline RatioFamily k2_family() {
  using namespace detail;
  const Poly T = t_poly(), S = one_minus_t();
  return {"k2", sq(T) + sq(S) + 4.0 * cube(T) + cube(S), Poly::constant(1.0) + 4.0 * sq(T) + sq(S)};
}

struct ScanResult {
  std::string name;
  double value = 0.0;
  double argopt = 0.0;
  std::size_t grid = 0;
  bool refined = false;
  bool attained = true;  // false when the optimum is an open-endpoint limit
  std::optional<double> reference_value;
  std::optional<bool> matches;
  std::optional<std::string> discrepancy;
  std::optional<std::string> certificate;
};

struct ScanDomain {
  double lo, hi;
  bool lo_open = false;
};

/// Grid scan (lowest t wins ties) followed by golden-section refinement in
/// the bracketing cells. An open lower endpoint is handled through the
/// one-sided limit, which is reported as a non-attained optimum when it
/// beats every interior value.
inline ScanResult scan_extremum(std::string name, const std::function<double(double)>& f, ScanDomain dom,
                                bool maximize, std::size_t resolution, int refine_iters) {
  if (resolution < 2) throw DomainError("scan_extremum: resolution must be >= 2");
  auto better = [&](double a, double b) { return maximize ? a > b : a < b; };
  const double step = (dom.hi - dom.lo) / static_cast<double>(resolution);
  std::size_t best = dom.lo_open ? 1 : 0;
  double best_v = f(dom.lo + step * static_cast<double>(best));
  for (std::size_t i = best + 1; i <= resolution; ++i) {
    const double v = f(dom.lo + step * static_cast<double>(i));
    if (better(v, best_v)) {
      best = i;
      best_v = v;
    }
  }
  ScanResult r;
  r.name = std::move(name);
  r.value = best_v;
  r.argopt = dom.lo + step * static_cast<double>(best);
  r.grid = resolution;
  if (refine_iters > 0) {
    const double a = dom.lo + step * static_cast<double>(best == 0 ? 0 : best - 1);
    const double b = dom.lo + step * static_cast<double>(std::min(best + 1, resolution));
    const Optimum o = golden_section(f, a, b, maximize, refine_iters);
    r.refined = true;
    if (better(o.value, r.value)) {
      r.value = o.value;
      r.argopt = o.t;
    }
  }
  if (dom.lo_open) {
    const double limit = f(dom.lo);
    if (better(limit, r.value) || limit == r.value) {
      r.value = limit;
      r.argopt = dom.lo;
      r.attained = false;
    }
  }
  return r;
}

/// Certifies that 1 + N/D stays below (maximize) or above (minimize) the
/// value m for all t >= T: P = N - (m - 1) D has Taylor coefficients at T of
/// one strict sign.
inline std::optional<std::string> tail_certificate(const RatioFamily& fam, double m, double T, bool maximize) {
  const Poly p = fam.num - (m - 1.0) * fam.den;
  const auto coeffs = p.taylor_at(T);
  for (double c : coeffs)
    if (maximize ? !(c < 0.0) : !(c > 0.0)) return std::nullopt;
  std::string s = fam.name + " tail beyond t=" + std::to_string(T) + ": Taylor coefficients (";
  for (std::size_t i = 0; i < coeffs.size(); ++i) s += (i ? ", " : "") + std::to_string(coeffs[i]);
  return s + (maximize ? ") all negative" : ") all positive");
}

struct KConstants {
  ScanResult K1, K2, k1, k2;
  double k2_at_two;     // the second-branch ratio at t = 2
  double k2_limit_at_one;  // its one-sided limit t -> 1+
};

inline constexpr double kTailCutoff = 50.0;

inline KConstants scan_K_constants(std::size_t resolution = 100000, int refine_iters = 200,
                                   double T = kTailCutoff) {
  if (resolution < 1000) throw DomainError("scan_K_constants: resolution must be >= 1000");
  const auto K1f = K1_family(), K2f = K2_family(), k1f = k1_family(), k2f = k2_family();
  KConstants out{scan_extremum("K1", K1f, {0.0, 1.0}, true, resolution, refine_iters),
                 scan_extremum("K2", K2f, {1.0, T, true}, true, resolution, refine_iters),
                 scan_extremum("k1", k1f, {0.0, 1.0}, false, resolution, refine_iters),
                 scan_extremum("k2", k2f, {1.0, T, true}, false, resolution, refine_iters),
                 k2f(2.0), k2f(1.0)};
  auto judge = [](ScanResult& r, double ref) {
    r.reference_value = ref;
    r.matches = std::abs(r.value - ref) < 1e-6;
  };
  judge(out.K1, 2.0);
  judge(out.K2, 3.0);
  judge(out.k1, 1.5);
  out.k2.reference_value = 3.0;
  out.k2.discrepancy = "infimum over (1, T] is the one-sided limit " + std::to_string(out.k2_limit_at_one) +
                       " as t -> 1+, not attained; the ratio equals " + std::to_string(out.k2_at_two) +
                       " at t = 2";
  out.K2.certificate = tail_certificate(K2f, out.K2.value, T, true);
  out.k2.certificate = tail_certificate(k2f, out.k2.value, T, false);
  return out;
}

/// Tangential curvatures (0, t, 1 - t) with normal curvature -1 (H > 0) or
/// their negatives with normal curvature +1 (H < 0).
inline std::vector<double> xi_configuration(double t, bool negative_normal) {
  const double s = negative_normal ? 1.0 : -1.0;
  return {0.0, s * t, s * (1.0 - t), -s};
}

/// L on the xi-family. L does not depend on theta since sin(theta) H equals
/// minus the normal curvature.
inline double xi_L(double t, bool negative_normal, double a) {
  const double theta = std::numbers::pi / 4;
  const auto l = xi_configuration(t, negative_normal);
  return L_function(split_competitor(a, 0.5), l, theta, -l.back() / std::sin(theta));
}

struct LScan {
  ScanResult sup;  // normal curvature < 0 branch
  ScanResult inf;  // normal curvature > 0 branch
  double sup_composite;  // max(K1, K2)
  double inf_composite;  // min(k1, k2)
};

inline LScan scan_L_over_constraint(std::size_t n = 4, double a = 4.0, std::size_t resolution = 200000,
                                    int refine_iters = 200, double T = kTailCutoff) {
  if (n != 4 || a != 4.0) throw DomainError("scan_L_over_constraint: only n = 4, a = 4 is supported");
  const auto K = scan_K_constants(std::max<std::size_t>(resolution / 2, 1000), refine_iters, T);
  LScan out{scan_extremum("supL", [a](double t) { return xi_L(t, true, a); }, {-T, T}, true, resolution,
                          refine_iters),
            scan_extremum("infL", [a](double t) { return xi_L(t, false, a); }, {-T, T}, false, resolution,
                          refine_iters),
            std::max(K.K1.value, K.K2.value), std::min(K.k1.value, K.k2.value)};
  out.sup.reference_value = 3.0;
  out.sup.matches = std::abs(out.sup.value - 3.0) < 1e-6;
  // The family is symmetric under t -> 1 - t, so the K2 / k2 certificates at
  // T also cover t <= -T.
  out.sup.certificate = K.K2.certificate;
  out.inf.certificate = K.k2.certificate;
  return out;
}

// ---------------------------------------------------------------------------
// Axially symmetric window and exact identities

enum class AxisymVerdict { FlatStrict, EqualityGradientImprovement, Inconclusive };

inline const char* to_string(AxisymVerdict v) {
  switch (v) {
    case AxisymVerdict::FlatStrict: return "flat, strict";
    case AxisymVerdict::EqualityGradientImprovement: return "equality, strictness via gradient term";
    case AxisymVerdict::Inconclusive: return "inconclusive";
  }
  return "";
}

struct AxisymReport {
  std::size_t n;
  Rational L;
  Rational alpha;
  Rational Lambda;
  Rational threshold;
  Rational gradient_coefficient;  // alpha (alpha - 1 + 2/(n-1))
  AxisymVerdict verdict;
};

inline AxisymReport axisym_analysis(std::size_t n) {
  if (n < 3 || n > 12) throw DomainError("axisym_analysis: n outside [3, 12]");
  const long long m = static_cast<long long>(n);
  const Rational L(m - 1, m - 2);
  const Rational alpha(m - 2, m - 1);
  const Rational Lambda = alpha * (alpha + 1);
  const Rational threshold = criterion_threshold(n, -alpha);
  const Rational grad = alpha * (alpha - 1 + Rational(2, m - 1));
  AxisymVerdict v = AxisymVerdict::Inconclusive;
  if (Lambda > threshold) {
    v = AxisymVerdict::FlatStrict;
  } else if (Lambda == threshold) {
    const auto ev = assemble_verdict(n, -alpha, Lambda, grad > 0, false);
    if (ev.conclusion == Conclusion::WMustVanish) v = AxisymVerdict::EqualityGradientImprovement;
  }
  return {n, L, alpha, Lambda, threshold, grad, v};
}

/// Cubic boundary term for (0, l2, -l2, 0) with a = 4, which must equal 3 l2^3.
inline Rational zero_H_boundary_check(const Rational& l2) {
  const Rational pos = l2 >= 0 ? l2 : Rational(0);
  const Rational neg = l2 >= 0 ? -l2 : l2;
  const Rational other = l2 >= 0 ? Rational(0) : -l2;
  return -(pos * pos * pos + other * other * other + 4 * neg * neg * neg);
}

inline double zero_H_boundary_check(double l2) {
  const std::vector<double> l{0.0, l2, -l2, 0.0};
  return -weighted_cubic(l, 4.0);
}

struct N3Report {
  double max_residual;  // max |lambda_2 + lambda_3| over random cone jets
  std::size_t samples;
  AxisymReport axisym;
};

inline N3Report n3_reduction(double theta, std::size_t samples = 500, std::uint64_t seed = 0) {
  const ConeSpec spec(3, theta);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ur(0.5, 2.0);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto jet = random_boundary_jet(spec, rng, ur(rng));
    const auto l = principal_curvatures_by_index(jet);
    worst = std::max(worst, std::abs(l[0]) + std::abs(l[1] + l[2]) / (1.0 + max_abs(l)));
  }
  return {worst, samples, axisym_analysis(3)};
}

/// Exact Cauchy-Schwarz constant sum_{i != 0, k} (lambda_i - lambda_k)(f_i - f_k) / c.
struct SharpnessResult {
  double ratio;
  double bound;  // n - 1
  bool within_bound;
};

inline SharpnessResult cs_sharpness(const SymmetricFn& f, Eigenvalues lambda, std::size_t k) {
  const std::size_t n = lambda.size();
  if (k == 0 || k >= n) throw DomainError("cs_sharpness: k must be a non-radial index");
  const double c = f.value(lambda);
  if (c == 0.0) throw DomainError("cs_sharpness: c = 0");
  const auto g = f.grad(lambda);
  double s = 0.0;
  for (std::size_t i = 1; i < n; ++i)
    if (i != k) s += (lambda[i] - lambda[k]) * (g[i] - g[k]);
  const double ratio = s / c;
  const double bound = static_cast<double>(n - 1);
  return {ratio, bound, ratio <= bound * (1.0 + 1e-12)};
}

struct NeighborhoodSharpness {
  double max_ratio;
  double center_ratio;
  std::size_t samples;
};

/// Scans trace-free perturbations of `center` (lambda_0 = 0 kept) with
/// 0 < |delta| <= radius.
inline NeighborhoodSharpness cs_sharpness_neighborhood(const SymmetricFn& f, std::vector<double> center,
                                                       std::size_t k, double radius, std::size_t samples,
                                                       std::uint64_t seed = 0) {
  const std::size_t n = center.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  NeighborhoodSharpness out{-INFINITY, cs_sharpness(f, center, k).ratio, samples};
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> d(n, 0.0);
    double mean = 0.0, norm = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      d[i] = u(rng);
      mean += d[i] / static_cast<double>(n - 1);
    }
    for (std::size_t i = 1; i < n; ++i) {
      d[i] -= mean;
      norm += d[i] * d[i];
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double scale = radius * std::uniform_real_distribution<double>(1e-3, 1.0)(rng) / norm;
    std::vector<double> l = center;
    for (std::size_t i = 1; i < n; ++i) l[i] += scale * d[i];
    out.max_ratio = std::max(out.max_ratio, cs_sharpness(f, l, k).ratio);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Height function v = |grad_M x_{n+1}| on a graph

/// Derivatives up to order three of a graph x_{n+1} = u(x) at a point.
struct GraphJet {
  std::vector<double> p;
  Matrix h;
  Tensor3 t;
};

inline GraphJet graph_jet(const BoundaryJet& jet) { return {jet.gradient(), jet.hessian(), jet.third()}; }

struct VIdentities {
  double v;
  double v2_residual;        // |v^2 - (1 - (e_{n+1} . nu)^2)|
  double gradient_residual;  // |grad_M v|^2 against (1/v^2 - 1) |A e_{n+1}|^2
  double cs_gap;             // |A|^2 v^2 - |A e_{n+1}|^2, expected >= 0
  double scale;
};

inline VIdentities graphical_v_identities(const GraphJet& gj) {
  const std::size_t n = gj.p.size();
  double p2 = 0.0;
  for (double x : gj.p) p2 += x * x;
  if (p2 == 0.0) throw DomainError("graphical_v_identities: v = 0, normal parallel to e_{n+1}");
  const double w2 = 1.0 + p2;
  const double w = std::sqrt(w2);
  const double nu_last = 1.0 / w;  // nu = (-Du, 1) / W
  const double v = std::sqrt(p2 / w2);

  Matrix ginv = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ginv(i, j) -= gj.p[i] * gj.p[j] / w2;

  // v_k by differentiating v(x) = |Du| / W along each coordinate.
  std::vector<double> dv(n);
  for (std::size_t k = 0; k < n; ++k) {
    Dual q2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Dual pi(gj.p[i], gj.h(i, k));
      q2 += pi * pi;
    }
    dv[k] = sqrt(q2 / (Dual(1.0) + q2)).d;
  }
  double grad_v2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) grad_v2 += ginv(i, j) * dv[i] * dv[j];

  // Tangential part of e_{n+1} is g^{-1} Du; A acts through S = g^{-1} D2u / W.
  std::vector<double> tau(n, 0.0), h_tau(n, 0.0), s_tau(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) tau[i] += ginv(i, j) * gj.p[j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h_tau[i] += gj.h(i, j) * tau[j] / w;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s_tau[i] += ginv(i, j) * h_tau[j];
  double ae2 = 0.0;  // g(S tau, S tau) = (S tau) . (D2u tau / W)
  for (std::size_t i = 0; i < n; ++i) ae2 += s_tau[i] * h_tau[i];

  std::vector<std::vector<double>> hv(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) hv[i][j] = gj.h(i, j);
  const double normA2 = detail::norm_A2(gj.p, hv);

  const double scale = 1.0 + normA2 / (v * v);
  return {v, std::abs(v * v - (1.0 - nu_last * nu_last)),
          std::abs(grad_v2 - (1.0 / (v * v) - 1.0) * ae2) / scale, normA2 * v * v - ae2, scale};
}

struct BoundaryVIdentities {
  VIdentities interior;
  double boundary_value_residual;     // |v - sin(theta)|
  double boundary_derivative_residual;  // (1/2)(grad_M v^2, eta) against cos(theta) sin^2(theta) H
};

inline BoundaryVIdentities graphical_v_identities(const BoundaryJet& jet) {
  const auto base = graphical_v_identities(graph_jet(jet));
  const double th = jet.spec().theta;
  const std::size_t N = jet.n() - 1;
  Dual q2 = 0.0;
  for (std::size_t i = 0; i < jet.n(); ++i) {
    const Dual pi(jet.gradient()[i], jet.hessian()(i, N));
    q2 += pi * pi;
  }
  const double half_dv2 = 0.5 * (q2 / (Dual(1.0) + q2)).d;
  const double closed = std::cos(th) * std::pow(std::sin(th), 2) * mean_curvature_fb(jet);
  const double lhs = eta_derivative(jet, half_dv2);
  return {base, std::abs(base.v - std::sin(th)),
          std::abs(lhs - closed) / (1.0 + std::abs(closed) + max_abs(principal_curvatures_by_index(jet)))};
}

}  // namespace capcone
