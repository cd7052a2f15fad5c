#pragma once

// Third-order jets of a graph x_{n+1} = u(x) at a free-boundary point x0 of a
// capillary minimal surface meeting the wall {x_{n+1} = 0} at angle theta.
//
// Coordinates are chosen so that at x0 the gradient is -tan(theta) e_n, the
// tangential Hessian is diagonal, and the wall normal is e_n. In code the
// last coordinate index N = n - 1 plays the role of e_n. Free data are the
// tangential diagonal second derivatives and the tangential third
// derivatives; every other derivative up to order three follows from the
// minimal-surface equation and the contact-angle condition.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "capcone/dual.hpp"
#include "capcone/linalg.hpp"
#include "capcone/spectral.hpp"

namespace capcone {

/// Maps a contact angle in (pi/2, pi) to its supplement. Returns nullopt for
/// angles outside (0, pi) or equal to pi/2.
struct NormalizedAngle {
  double theta;
  bool reflected;
};

inline std::optional<NormalizedAngle> normalize_contact_angle(double theta) {
  constexpr double pi = std::numbers::pi;
  if (!(theta > 0.0 && theta < pi) || theta == pi / 2) return std::nullopt;
  if (theta > pi / 2) return NormalizedAngle{pi - theta, true};
  return NormalizedAngle{theta, false};
}

struct ConeSpec {
  std::size_t n;
  double theta;
  double sigma;  // cos(theta)

  ConeSpec(std::size_t dim, double angle) : n(dim), theta(angle), sigma(std::cos(angle)) {
    if (n < 2 || n > kMaxDimension) throw DomainError("ConeSpec: n outside [2, 16]");
    if (!(theta > 0.0 && theta < std::numbers::pi / 2))
      throw DomainError("ConeSpec: theta must lie in (0, pi/2); reflect obtuse angles first");
  }

  std::size_t normal_index() const { return n - 1; }
  double u_n() const { return -std::tan(theta); }
  double W() const { return 1.0 / std::cos(theta); }
};

/// Unit vectors in R^{n+1} at the base point.
struct Frame {
  std::vector<double> nu;
  std::vector<double> eta;
  std::vector<double> nubar;
};

inline Frame boundary_frame(const ConeSpec& spec) {
  const std::size_t m = spec.n + 1;
  const std::size_t N = spec.normal_index();
  const double s = std::sin(spec.theta);
  const double c = std::cos(spec.theta);
  Frame f{std::vector<double>(m), std::vector<double>(m), std::vector<double>(m)};
  f.nubar[N] = 1.0;
  f.nu[N] = s;
  f.nu[spec.n] = c;
  f.eta[N] = c;
  f.eta[spec.n] = -s;
  return f;
}

struct Triplet {
  std::size_t i, j, k;
};

/// Free tangential third-derivative slots, i <= j <= k < n-1. In cone mode
/// the radial index 0 is excluded because those entries are fixed by
/// homogeneity.
inline std::vector<Triplet> free_third_triplets(std::size_t n, bool cone_mode) {
  std::vector<Triplet> out;
  const std::size_t lo = cone_mode ? 1 : 0;
  for (std::size_t i = lo; i + 1 < n; ++i)
    for (std::size_t j = i; j + 1 < n; ++j)
      for (std::size_t k = j; k + 1 < n; ++k) out.push_back({i, j, k});
  return out;
}

class BoundaryJet {
 public:
  const ConeSpec& spec() const { return spec_; }
  std::size_t n() const { return spec_.n; }
  bool cone_mode() const { return radius_.has_value(); }
  std::optional<double> radius() const { return radius_; }

  double u_n() const { return p_[spec_.normal_index()]; }
  double u_nn() const { return h_(spec_.normal_index(), spec_.normal_index()); }
  std::vector<double> d2_tangential() const {
    std::vector<double> d(n() - 1);
    for (std::size_t j = 0; j + 1 < n(); ++j) d[j] = h_(j, j);
    return d;
  }

  /// Full derivative arrays at x0.
  const std::vector<double>& gradient() const { return p_; }
  const Matrix& hessian() const { return h_; }
  const Tensor3& third() const { return t_; }

 private:
  friend BoundaryJet make_boundary_jet(const ConeSpec&, const std::vector<double>&,
                                       const std::vector<double>&, std::optional<double>);
  explicit BoundaryJet(const ConeSpec& s) : spec_(s), p_(s.n, 0.0), h_(s.n, s.n), t_(s.n) {}

  ConeSpec spec_;
  std::optional<double> radius_;
  std::vector<double> p_;
  Matrix h_;
  Tensor3 t_;
};

/// Builds the jet from its free data. `d3_tangential` lists values for
/// free_third_triplets(n, cone_mode) in order; cone mode is selected by
/// passing a radius |x0|, with index 0 radial.
inline BoundaryJet make_boundary_jet(const ConeSpec& spec, const std::vector<double>& d2_tangential,
                                     const std::vector<double>& d3_tangential,
                                     std::optional<double> radius = std::nullopt) {
  const std::size_t n = spec.n;
  const std::size_t N = spec.normal_index();
  const bool cone = radius.has_value();
  if (d2_tangential.size() != n - 1)
    throw DomainError("make_boundary_jet: expected " + std::to_string(n - 1) +
                      " tangential second derivatives");
  const auto slots = free_third_triplets(n, cone);
  if (d3_tangential.size() != slots.size())
    throw DomainError("make_boundary_jet: expected " + std::to_string(slots.size()) +
                      " tangential third derivatives");
  if (cone) {
    if (!(*radius > 0.0) || !std::isfinite(*radius))
      throw DomainError("make_boundary_jet: cone radius must be positive");
    if (d2_tangential[0] != 0.0)
      throw DomainError("make_boundary_jet: radial second derivative u_11 must vanish in cone mode");
  }
  for (double v : d2_tangential)
    if (!std::isfinite(v)) throw DomainError("make_boundary_jet: non-finite second derivative");
  for (double v : d3_tangential)
    if (!std::isfinite(v)) throw DomainError("make_boundary_jet: non-finite third derivative");

  BoundaryJet jet(spec);
  jet.radius_ = radius;
  const double un = spec.u_n();
  const double w2 = 1.0 + un * un;
  jet.p_[N] = un;

  double trace_t = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    jet.h_(j, j) = d2_tangential[j];
    trace_t += d2_tangential[j];
  }
  const double unn = -w2 * trace_t;
  jet.h_(N, N) = unn;

  Tensor3& t = jet.t_;
  for (std::size_t s = 0; s < slots.size(); ++s) t.set(slots[s].i, slots[s].j, slots[s].k, d3_tangential[s]);
  if (cone) {
    // u is 1-homogeneous, so every second derivative is (-1)-homogeneous.
    const double r = *radius;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i; j < N; ++j) t.set(0, i, j, -jet.h_(i, j) / r);
  }

  for (std::size_t i = 0; i < N; ++i) {
    const double uii = jet.h_(i, i);
    t.set(i, i, N, (unn * uii - uii * uii) / un);
    double s = 0.0;
    for (std::size_t j = 0; j < N; ++j) s += t(i, j, j);
    t.set(i, N, N, -w2 * s);
  }
  double sq = 0.0;
  for (std::size_t j = 0; j < N; ++j) sq += jet.h_(j, j) * jet.h_(j, j);
  t.set(N, N, N, w2 / un * sq + (1.0 + 3.0 * un * un) / (un * w2) * unn * unn);
  return jet;
}

/// Free parameters uniform in [-2, 2].
inline BoundaryJet random_boundary_jet(const ConeSpec& spec, std::mt19937_64& rng,
                                       std::optional<double> radius = std::nullopt) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> d2(spec.n - 1);
  for (auto& v : d2) v = u(rng);
  if (radius) d2[0] = 0.0;
  std::vector<double> d3(free_third_triplets(spec.n, radius.has_value()).size());
  for (auto& v : d3) v = u(rng);
  return make_boundary_jet(spec, d2, d3, radius);
}

// ---------------------------------------------------------------------------
// Constraint residuals, evaluated from the general differentiated equations
// rather than from the resolved formulas.

struct ConstraintResiduals {
  double normalization = 0.0;      // tangential gradient, tangential off-diagonals, u_n + tan(theta)
  double minimality = 0.0;         // minimal-surface equation at x0
  double minimality_d1 = 0.0;      // its first derivatives in every direction
  double contact_d1 = 0.0;         // first tangential derivative of |grad u|^2 on {u = 0}
  double contact_d2 = 0.0;         // second tangential derivatives of the same
  double cone = 0.0;               // homogeneity relations (cone mode)

  double max() const {
    return std::max({normalization, minimality, minimality_d1, contact_d1, contact_d2, cone});
  }
};

/// Each residual is divided by max(1, sum of absolute values of its terms).
inline ConstraintResiduals constraint_residuals(const BoundaryJet& jet) {
  const std::size_t n = jet.n();
  const std::size_t N = n - 1;
  const auto& p = jet.gradient();
  const Matrix& h = jet.hessian();
  const Tensor3& t = jet.third();
  auto rel = [](double v, double mag) { return std::abs(v) / std::max(1.0, mag); };
  ConstraintResiduals r;

  for (std::size_t i = 0; i < N; ++i) {
    r.normalization = std::max(r.normalization, std::abs(p[i]));
    for (std::size_t j = 0; j < N; ++j)
      if (i != j) {
        r.normalization = std::max(r.normalization, std::abs(h(i, j)));
        r.normalization = std::max(r.normalization, std::abs(t(i, j, N)));
      }
  }
  r.normalization = std::max(r.normalization, rel(p[N] + std::tan(jet.spec().theta), std::abs(p[N])));

  double p2 = 0.0;
  for (double x : p) p2 += x * x;
  const double w2 = 1.0 + p2;
  std::vector<double> hp(n, 0.0);
  double trh = 0.0, pHp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    trh += h(i, i);
    for (std::size_t j = 0; j < n; ++j) hp[i] += h(i, j) * p[j];
  }
  for (std::size_t i = 0; i < n; ++i) pHp += p[i] * hp[i];
  {
    double mag = std::abs(pHp);
    for (std::size_t i = 0; i < n; ++i) mag += w2 * std::abs(h(i, i));
    r.minimality = rel(w2 * trh - pHp, mag);
  }

  // d/dx_k [ W^2 tr D2u - Du^T D2u Du ]
  for (std::size_t k = 0; k < n; ++k) {
    double hk_p = 0.0, hk_hp = 0.0, tr_tk = 0.0, pTkp = 0.0;
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      hk_p += h(k, i) * p[i];
      hk_hp += h(k, i) * hp[i];
      tr_tk += t(i, i, k);
      mag += w2 * std::abs(t(i, i, k)) + 2.0 * std::abs(h(k, i) * hp[i]);
      for (std::size_t j = 0; j < n; ++j) {
        pTkp += p[i] * p[j] * t(i, j, k);
        mag += std::abs(p[i] * p[j] * t(i, j, k));
      }
    }
    mag += 2.0 * std::abs(hk_p * trh);
    r.minimality_d1 = std::max(r.minimality_d1, rel(2.0 * hk_p * trh + w2 * tr_tk - 2.0 * hk_hp - pTkp, mag));
  }

  // The boundary is locally x_n = phi(x'), with u(x', phi) = 0 and
  // |Du|^2(x', phi) = tan^2(theta).
  std::vector<double> phi1(N);
  for (std::size_t i = 0; i < N; ++i) phi1[i] = -p[i] / p[N];
  Matrix phi2(N, N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      phi2(i, j) = -(h(i, j) + h(i, N) * phi1[j] + h(j, N) * phi1[i] + h(N, N) * phi1[i] * phi1[j]) / p[N];
  for (std::size_t i = 0; i < N; ++i) {
    double g1 = 0.0, mag = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      g1 += 2.0 * p[l] * (h(l, i) + h(l, N) * phi1[i]);
      mag += 2.0 * std::abs(p[l]) * (std::abs(h(l, i)) + std::abs(h(l, N) * phi1[i]));
    }
    r.contact_d1 = std::max(r.contact_d1, rel(g1, mag));
    for (std::size_t j = 0; j < N; ++j) {
      double g2 = 0.0, mag2 = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        const double a = (h(l, i) + h(l, N) * phi1[i]) * (h(l, j) + h(l, N) * phi1[j]);
        const double b = p[l] * (t(l, i, j) + t(l, i, N) * phi1[j] + t(l, j, N) * phi1[i] +
                                 t(l, N, N) * phi1[i] * phi1[j] + h(l, N) * phi2(i, j));
        g2 += 2.0 * a + 2.0 * b;
        mag2 += 2.0 * std::abs(a) +
                2.0 * std::abs(p[l]) *
                    (std::abs(t(l, i, j)) + std::abs(t(l, i, N) * phi1[j]) + std::abs(t(l, j, N) * phi1[i]) +
                     std::abs(t(l, N, N) * phi1[i] * phi1[j]) + std::abs(h(l, N) * phi2(i, j)));
      }
      r.contact_d2 = std::max(r.contact_d2, rel(g2, mag2));
    }
  }

  if (jet.cone_mode()) {
    const double rad = *jet.radius();
    r.cone = std::abs(h(0, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        r.cone = std::max(r.cone, rel(rad * t(0, i, j) + h(i, j), std::abs(h(i, j))));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Fundamental forms and curvatures

struct FundamentalForms {
  Matrix g;
  Matrix g_inverse;
  SymMatrix A;  // symmetrized second fundamental form in graph coordinates
  double normA2;
};

namespace detail {

/// |A|^2 = tr((g^{-1} D2u)^2) / W^2 as a function of (Du, D2u). With q the
/// unit vector along Du, g^{-1} = (I - q q^T) + q q^T / W^2; the projector
/// form keeps steep graphs (W large) free of cancellation.
template <class T>
T norm_A2(const std::vector<T>& p, const std::vector<std::vector<T>>& h) {
  using std::sqrt;
  const std::size_t n = p.size();
  T p2 = 0.0;
  for (const T& x : p) p2 += x * x;
  const T w2 = T(1.0) + p2;
  std::vector<std::vector<T>> m = h;  // g^{-1} D2u
  if (value_of(p2) > 0.0) {
    const T len = sqrt(p2);
    std::vector<T> q(n), qh(n, T(0.0));
    for (std::size_t i = 0; i < n; ++i) q[i] = p[i] / len;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) qh[j] += q[i] * h[i][j];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i][j] = (h[i][j] - q[i] * qh[j]) + q[i] * qh[j] / w2;
  }
  T tr = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) tr += m[i][j] * m[j][i];
  return tr / w2;
}

/// Jet data moved a step t along e_k: Du + t D2u e_k, D2u + t D3u e_k.
inline void dual_along(const BoundaryJet& jet, std::size_t k, std::vector<Dual>& p,
                       std::vector<std::vector<Dual>>& h) {
  const std::size_t n = jet.n();
  p.assign(n, Dual());
  h.assign(n, std::vector<Dual>(n));
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = Dual(jet.gradient()[i], jet.hessian()(i, k));
    for (std::size_t j = 0; j < n; ++j) h[i][j] = Dual(jet.hessian()(i, j), jet.third()(i, j, k));
  }
}

}  // namespace detail

inline FundamentalForms fundamental_forms(const BoundaryJet& jet) {
  const std::size_t n = jet.n();
  const auto& p = jet.gradient();
  const Matrix& h = jet.hessian();
  double p2 = 0.0;
  for (double x : p) p2 += x * x;
  const double w2 = 1.0 + p2;
  const double w = std::sqrt(w2);

  FundamentalForms out{Matrix::identity(n), Matrix::identity(n), SymMatrix(n), 0.0};
  // With q = Du / |Du|, p_i (D2u p)_j / W^2 = q_i (D2u q)_j (1 - 1 / W^2).
  std::vector<double> q(n, 0.0), hq(n, 0.0);
  const double len = std::sqrt(p2);
  if (len > 0.0)
    for (std::size_t i = 0; i < n; ++i) q[i] = p[i] / len;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out.g(i, j) += p[i] * p[j];
      out.g_inverse(i, j) -= p[i] * p[j] / w2;
      hq[i] += h(i, j) * q[j];
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double sym = 0.5 * (q[i] * hq[j] + hq[i] * q[j]);
      out.A.set(i, j, ((h(i, j) - sym) + sym / w2) / w);
    }

  std::vector<std::vector<double>> hv(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) hv[i][j] = h(i, j);
  out.normA2 = detail::norm_A2(p, hv);
  return out;
}

/// Principal curvatures indexed by coordinate: u_jj / W for tangential j and
/// u_nn / W^3 for the normal index.
inline std::vector<double> principal_curvatures_by_index(const BoundaryJet& jet) {
  const std::size_t n = jet.n();
  const double w = jet.spec().W();
  std::vector<double> l(n);
  for (std::size_t j = 0; j + 1 < n; ++j) l[j] = jet.hessian()(j, j) / w;
  l[n - 1] = jet.u_nn() / (w * w * w);
  return l;
}

/// Same values sorted descending; rotation is the matching permutation.
inline Spectrum principal_curvatures(const BoundaryJet& jet) {
  const auto l = principal_curvatures_by_index(jet);
  const std::size_t n = l.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return l[a] > l[b]; });
  Spectrum s{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    s.values[c] = l[order[c]];
    s.rotation(order[c], c) = 1.0;
  }
  return s;
}

/// Mean curvature of the free boundary inside the wall.
inline double mean_curvature_fb(const BoundaryJet& jet) {
  const double un = jet.u_n();
  return jet.u_nn() / (un * (1.0 + un * un));
}

/// (A eta, eta). The bilinear form is D2u / W and eta is the pushforward of
/// e_n normalized by |e_n|_g = sqrt(g_nn).
inline double A_eta_eta(const BoundaryJet& jet) {
  const std::size_t N = jet.n() - 1;
  const auto ff = fundamental_forms(jet);
  double p2 = 0.0;
  for (double x : jet.gradient()) p2 += x * x;
  return jet.hessian()(N, N) / std::sqrt(1.0 + p2) / ff.g(N, N);
}

struct CurvatureIdentityResiduals {
  double eta_form;   // |cot(theta) (A eta, eta) + cos(theta) H|
  double normal_ev;  // |lambda_n + sin(theta) H|
};

/// Free-boundary curvature identities tying (A eta, eta) and lambda_n to the
/// mean curvature of the boundary.
inline CurvatureIdentityResiduals check_curvature_identity(const BoundaryJet& jet) {
  const double th = jet.spec().theta;
  const double H = mean_curvature_fb(jet);
  const double ln = principal_curvatures_by_index(jet).back();
  return {std::abs(A_eta_eta(jet) / std::tan(th) + std::cos(th) * H),
          std::abs(ln + std::sin(th) * H)};
}

/// (grad_M phi, eta) from the coordinate derivative d_n phi: e_n + u_n e_{n+1}
/// has length 1 / cos(theta).
inline double eta_derivative(const BoundaryJet& jet, double phi_normal_derivative) {
  return std::cos(jet.spec().theta) * phi_normal_derivative;
}

}  // namespace capcone
