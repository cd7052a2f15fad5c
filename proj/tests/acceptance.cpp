// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "capcone/app/suites.hpp"
#include "capcone/capcone.hpp"
#include "oracles.hpp"

using namespace capcone;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

oracle::Dense dense(const SymMatrix& a) {
  oracle::Dense d(a.size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) d[i][j] = a(i, j);
  return d;
}

const double kAngles[] = {15.0, 30.0, 45.0, 60.0, 75.0};
constexpr double kDeg = std::numbers::pi / 180.0;

Outcome spectral_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int s = 0; s < 200; ++s) {
    const std::size_t n = 2 + static_cast<std::size_t>(s) % 4;
    const auto families = builtin_families(n, 4.0);
    const auto& f = families[static_cast<std::size_t>(s) % families.size()];
    const auto l = random_separated_spectrum(n, rng);
    const Matrix q = random_orthogonal(n, rng);
    const SymMatrix a = conjugate_diagonal(q, l);
    oracle::SpectralFn fo = [&](const std::vector<double>& x) { return f.value(x); };

    // Full packed derivatives at diag(lambda), with lambda taken from the solver.
    const Spectrum sp = jacobi_eigh(a);
    const auto ref = oracle::derivatives(fo, dense(SymMatrix::diagonal(sp.values)));
    const auto g = grad_F_at_diagonal(f, sp.values);
    worst = std::max(worst, oracle::max_rel(std::vector<double>(g.packed().begin(), g.packed().end()), ref.gradient));
    const Matrix h = hess_F_at_diagonal(f, sp.values).packed(n);
    for (std::size_t p = 0; p < h.rows(); ++p) {
      std::vector<double> row(h.cols());
      for (std::size_t r = 0; r < h.cols(); ++r) row[r] = h(p, r);
      worst = std::max(worst, oracle::max_rel(row, ref.hessian[p]));
    }

    // Directional derivatives at A itself through the composite formula:
    // F(A + t B) = F(diag(lambda) + t R^T B R).
    const SymMatrix b = random_symmetric(n, rng, 1.0);
    const Matrix rb = sp.rotation.transposed() * b.dense() * sp.rotation;
    SymMatrix rbs(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) rbs.set(i, j, 0.5 * (rb(i, j) + rb(j, i)));
    const MatrixFieldJet jet{SymMatrix::diagonal(sp.values), {rbs}, {SymMatrix(n)}};
    const auto cd = composite_derivatives(f, jet);
    auto phi = [&](double t) {
      oracle::Dense m = dense(a);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] += t * b(i, j);
      return f.value(oracle::eigenvalues(m));
    };
    auto d1 = [&](double hh) { return (phi(hh) - phi(-hh)) / (2 * hh); };
    auto d2 = [&](double hh) { return (phi(hh) - 2 * phi(0) + phi(-hh)) / (hh * hh); };
    const double hh = 2e-3;
    const double g1 = (4 * d1(hh / 2) - d1(hh)) / 3, g2 = (4 * d2(hh / 2) - d2(hh)) / 3;
    worst = std::max(worst, std::abs(cd.gradient[0] - g1) / std::max(1.0, std::abs(g1)));
    worst = std::max(worst, std::abs(cd.hessian(0, 0) - g2) / std::max(1.0, std::abs(g2)));
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-6 && secs < 10.0, fmt("max relative error %.3g over 200 pairs (limit 1e-6), %.2f s (limit 10 s)", worst, secs)};
}

template <class Fn>
void jet_sweep(std::uint64_t seed, Fn&& fn) {
  std::mt19937_64 rng(seed);
  for (std::size_t n = 2; n <= 7; ++n)
    for (double th : kAngles) {
      const ConeSpec spec(n, th * kDeg);
      for (int s = 0; s < 500; ++s) fn(random_boundary_jet(spec, rng));
    }
}

Outcome jet_closure() {
  const auto t0 = std::chrono::steady_clock::now();
  double cons = 0.0, trace = 0.0;
  jet_sweep(2, [&](const BoundaryJet& jet) {
    cons = std::max(cons, constraint_residuals(jet).max());
    const auto l = principal_curvatures_by_index(jet);
    trace = std::max(trace, std::abs(sum(l)) / (1.0 + max_abs(l)));
  });
  const double secs = seconds_since(t0);
  return {cons < 1e-12 && trace < 1e-12 && secs < 5.0,
          fmt("constraint residual %.3g, trace %.3g (limit 1e-12), %.2f s (limit 5 s)", cons, trace, secs)};
}

Outcome curvature_identity() {
  double worst = 0.0;
  jet_sweep(2, [&](const BoundaryJet& jet) {
    const auto r = check_curvature_identity(jet);
    const double s = 1.0 + std::abs(mean_curvature_fb(jet));
    worst = std::max({worst, r.eta_form / s, r.normal_ev / s});
  });
  return {worst < 1e-12, fmt("max residual %.3g over 15000 jets (limit 1e-12)", worst)};
}

Outcome boundary_identities() {
  std::mt19937_64 rng(4);
  double worst = 0.0;  // |gap| relative to each entry's scale
  std::size_t bad = 0, total = 0;
  auto account = [&](const InequalityLedger& e) {
    ++total;
    if (!e.holds()) ++bad;
    worst = std::max(worst, std::abs(e.gap) * 1e-10 / e.tolerance);
  };
  for (std::size_t n = 2; n <= 7; ++n) {
    const ConeSpec spec(n, kAngles[n % 5] * kDeg);
    for (int s = 0; s < 500; ++s) {
      const auto jet = random_boundary_jet(spec, rng);
      account(boundary_identity_A2(jet));
      for (double a : {1.0, 4.0})
        for (const auto& e : boundary_identity_split(jet, a)) account(e);
    }
  }
  return {bad == 0, fmt("%.0f of %.0f entries outside 1e-10 relative; worst %.3g", static_cast<double>(bad),
                        static_cast<double>(total), worst)};
}

Outcome interior_chain() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(5);
  double worst_gap = 0.0, worst_pair = 0.0;
  std::size_t bad = 0;
  for (std::size_t n = 3; n <= 7; ++n) {
    const SymmetricFn fs[] = {split_quadratic_fn(n, 4.0), frobenius_fn(n)};
    for (int s = 0; s < 100000; ++s) {
      const auto cfg = random_cone_configuration(n, rng);
      const double scale = cone_scale(cfg);
      for (const auto& e : simons_interior_chain(fs[s % 2], cfg).ledger) {
        if (e.context == "pair_sum_identity") {
          const double r = std::abs(e.gap) / (1.0 + std::abs(e.rhs));
          worst_pair = std::max(worst_pair, r);
          if (r > 1e-10) ++bad;
        } else if (e.relation == Relation::GreaterEqual) {
          worst_gap = std::min(worst_gap, e.gap / scale);
          if (e.gap < -1e-12 * scale) ++bad;
        } else if (!e.holds()) {
          ++bad;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 60.0,
          fmt("min gap/scale %.3g (limit -1e-12), pair-sum residual %.3g (limit 1e-10), %.1f s (limit 60 s)",
              worst_gap, worst_pair, secs)};
}

Outcome rigidity_constants() {
  const auto K = scan_K_constants();
  const auto L = scan_L_over_constraint();
  const bool ok = std::abs(K.K1.value - 2.0) <= 1e-6 && std::abs(K.K2.value - 3.0) <= 1e-6 &&
                  std::abs(K.K2.argopt - 2.0) <= 1e-6 && std::abs(K.k1.value - 1.5) <= 1e-6 &&
                  K.k2.discrepancy.has_value() && std::abs(K.k2_at_two - 3.0) <= 1e-12 &&
                  std::abs(K.k2_limit_at_one - 2.0) <= 1e-12 &&
                  std::abs(L.sup.value - L.sup_composite) <= 1e-8 && std::abs(L.inf.value - L.inf_composite) <= 1e-8;
  return {ok, "K1 " + app::format_real(K.K1.value) + ", K2 " + app::format_real(K.K2.value) + ", k1 " +
                  app::format_real(K.k1.value) + ", k2 limit " + app::format_real(K.k2_limit_at_one) +
                  " (stated 3, value at t=2 " + app::format_real(K.k2_at_two) + "), sup L " +
                  app::format_real(L.sup.value) + ", inf L " + app::format_real(L.inf.value)};
}

Outcome exact_equalities() {
  const Rational third(1, 3);
  const bool e1 = criterion_threshold(4, -third) == Rational(4, 9) &&
                  Rational(4, 9) == (Rational(2) - third - 1) * (Rational(2) - third - 1);
  const auto a6 = axisym_analysis(6);
  const bool e2 = a6.Lambda == Rational(36, 25) && a6.threshold == Rational(36, 25);
  bool e3 = true;
  for (long long l2 : {0LL, 1LL, 2LL}) e3 = e3 && zero_H_boundary_check(Rational(l2)) == Rational(3 * l2 * l2 * l2);
  return {e1 && e2 && e3, std::string("n=4 threshold ") + (e1 ? "exact" : "wrong") + ", n=6 equality " +
                              (e2 ? "exact" : "wrong") + ", zero-H cubic " + (e3 ? "exact" : "wrong")};
}

Outcome dimension_window() {
  bool ok = true;
  std::string d;
  for (std::size_t n = 3; n <= 12; ++n) {
    const auto v = axisym_analysis(n).verdict;
    const auto want = n <= 5 ? AxisymVerdict::FlatStrict
                      : n == 6 ? AxisymVerdict::EqualityGradientImprovement
                               : AxisymVerdict::Inconclusive;
    ok = ok && v == want;
    if (n <= 7) d += (d.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) + " " + to_string(v);
  }
  return {ok, d + "; n=8..12 " + (ok ? "inconclusive" : "mismatch")};
}

Outcome graphical_identities() {
  std::mt19937_64 rng(9);
  double v = 0.0, sinr = 0.0;
  for (std::size_t n = 2; n <= 7; ++n)
    for (double th : kAngles) {
      const ConeSpec spec(n, th * kDeg);
      for (int s = 0; s < 500; ++s) {
        const auto r = graphical_v_identities(random_boundary_jet(spec, rng));
        v = std::max({v, r.interior.v2_residual, r.interior.gradient_residual, r.boundary_derivative_residual,
                      -r.interior.cs_gap / r.interior.scale});
        sinr = std::max(sinr, r.boundary_value_residual);
      }
    }
  return {v < 1e-12 && sinr < 1e-14, fmt("identity residual %.3g (limit 1e-12), |v - sin theta| %.3g (limit 1e-14)", v, sinr)};
}

Outcome determinism() {
  bool ok = true;
  std::size_t records = 0;
  for (auto c : {app::Command::CheckSpectral, app::Command::CheckJets, app::Command::CheckBoundary,
                 app::Command::ScanRigidity}) {
    app::RunConfig cfg;
    cfg.command = c;
    cfg.samples = 300;
    cfg.seed = 12345;
    cfg.exact = true;
    app::validate(cfg);
    const auto r1 = app::run(cfg);
    const auto r2 = app::run(cfg);
    ok = ok && app::machine_block(r1) == app::machine_block(r2);
    for (const auto& s : r1.suites) records += s.records.size();
  }
  return {ok, "four suites re-run with seed 12345: machine blocks " + std::string(ok ? "identical" : "differ") +
                  " (" + std::to_string(records) + " records)"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"spectral derivatives vs finite differences", spectral_oracle},
      {"jet constraint closure", jet_closure},
      {"free-boundary curvature identity", curvature_identity},
      {"boundary identities", boundary_identities},
      {"interior chain", interior_chain},
      {"rigidity constants", rigidity_constants},
      {"exact rational equalities", exact_equalities},
      {"dimension windows", dimension_window},
      {"graphical identities", graphical_identities},
      {"determinism", determinism},
  };
  int failures = 0;
  int id = 0;
  for (const auto& [name, fn] : criteria) {
    ++id;
    Outcome o{false, ""};
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
