#pragma once

// Reduced stability criterion for a k-homogeneous non-negative function w on
// a stable cone satisfying an interior inequality with constant Lambda:
// w must vanish once Lambda >= (n/2 + k - 1)^2, provided the comparison is
// strict somewhere. Curvature powers w = c^alpha have k = -alpha.

#include <algorithm>
#include <string>

#include <boost/rational.hpp>

#include "capcone/linalg.hpp"

namespace capcone {

using Rational = boost::rational<long long>;

inline Rational half_dimension(std::size_t n) { return Rational(static_cast<long long>(n), 2); }

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

inline double criterion_threshold(std::size_t n, double k) {
  if (n < 2) throw DomainError("criterion_threshold: n must be >= 2");
  const double b = static_cast<double>(n) / 2.0 + k - 1.0;
  return b * b;
}

inline Rational criterion_threshold(std::size_t n, const Rational& k) {
  if (n < 2) throw DomainError("criterion_threshold: n must be >= 2");
  const Rational b = half_dimension(n) + k - 1;
  return b * b;
}

struct OpenInterval {
  double lo, hi;
  bool empty() const { return !(lo < hi); }
};

/// Radial test exponents beta < pivot < alpha with |alpha|, |beta| < bound,
/// where pivot = 1 - k - n/2 and bound = n/2 + k - 1. Since pivot = -bound,
/// the beta range is always empty and the alpha range is (-bound, bound).
struct ExponentWindow {
  double pivot;
  double bound;
  OpenInterval alpha;
  OpenInterval beta;

  bool nonempty() const { return !alpha.empty() && !beta.empty(); }
  bool alpha_nonempty() const { return !alpha.empty(); }
};

inline ExponentWindow exponent_window(std::size_t n, double k) {
  if (n < 2) throw DomainError("exponent_window: n must be >= 2");
  const double pivot = 1.0 - k - static_cast<double>(n) / 2.0;
  const double bound = static_cast<double>(n) / 2.0 + k - 1.0;
  ExponentWindow w{pivot, bound, {0.0, 0.0}, {0.0, 0.0}};
  if (bound > 0.0) {
    w.alpha = {std::max(pivot, -bound), bound};
    w.beta = {-bound, std::min(pivot, bound)};
  }
  return w;
}

enum class Conclusion { WMustVanish, Inconclusive };

inline const char* to_string(Conclusion c) {
  return c == Conclusion::WMustVanish ? "w_must_vanish" : "inconclusive";
}

struct StabilityVerdict {
  std::size_t n;
  double k;
  double Lambda;
  double threshold;
  bool strict_interior;
  bool strict_boundary;
  bool strict_criterion;  // Lambda > threshold
  Conclusion conclusion;
};

inline StabilityVerdict assemble_verdict(std::size_t n, double k, double Lambda, bool strict_interior,
                                         bool strict_boundary) {
  if (!(Lambda >= 0.0)) throw DomainError("assemble_verdict: Lambda must be >= 0");
  const double t = criterion_threshold(n, k);
  const bool strict = Lambda > t;
  const bool vanish = Lambda >= t && (strict_interior || strict_boundary || strict);
  return {n, k, Lambda, t, strict_interior, strict_boundary, strict,
          vanish ? Conclusion::WMustVanish : Conclusion::Inconclusive};
}

struct ExactVerdict {
  Rational Lambda;
  Rational threshold;
  bool strict_criterion;
  Conclusion conclusion;
};

inline ExactVerdict assemble_verdict(std::size_t n, const Rational& k, const Rational& Lambda,
                                     bool strict_interior, bool strict_boundary) {
  if (Lambda < 0) throw DomainError("assemble_verdict: Lambda must be >= 0");
  const Rational t = criterion_threshold(n, k);
  const bool strict = Lambda > t;
  const bool vanish = Lambda >= t && (strict_interior || strict_boundary || strict);
  return {Lambda, t, strict, vanish ? Conclusion::WMustVanish : Conclusion::Inconclusive};
}

}  // namespace capcone
