#include <catch_amalgamated.hpp>

#include "capcone/stability.hpp"

using namespace capcone;

TEST_CASE("criterion threshold in floating and exact arithmetic") {
  CHECK(criterion_threshold(4, Rational(-1, 3)) == Rational(4, 9));
  CHECK(criterion_threshold(6, Rational(-4, 5)) == Rational(36, 25));
  CHECK(criterion_threshold(4, -1.0 / 3.0) == Catch::Approx(4.0 / 9.0).epsilon(1e-15));
  CHECK_THROWS_AS(criterion_threshold(1, 0.0), DomainError);
}

TEST_CASE("the pivot sits at minus the bound, so the lower window is empty") {
  for (std::size_t n = 3; n <= 9; ++n) {
    const auto w = exponent_window(n, -0.5);
    CHECK(w.pivot == -w.bound);
    CHECK(w.beta.empty());
    CHECK_FALSE(w.nonempty());
    CHECK(w.alpha_nonempty() == (w.bound > 0));
  }
  CHECK_FALSE(exponent_window(2, -0.5).alpha_nonempty());
}

TEST_CASE("verdict needs the criterion and some strictness") {
  const double t = criterion_threshold(5, -0.5);
  CHECK(assemble_verdict(5, -0.5, t + 0.1, false, false).conclusion == Conclusion::WMustVanish);
  CHECK(assemble_verdict(5, -0.5, t, false, false).conclusion == Conclusion::Inconclusive);
  CHECK(assemble_verdict(5, -0.5, t, true, false).conclusion == Conclusion::WMustVanish);
  CHECK(assemble_verdict(5, -0.5, t, false, true).conclusion == Conclusion::WMustVanish);
  CHECK(assemble_verdict(5, -0.5, t - 0.1, true, true).conclusion == Conclusion::Inconclusive);
  CHECK_THROWS_AS(assemble_verdict(5, -0.5, -1.0, true, true), DomainError);

  const auto e = assemble_verdict(6, Rational(-4, 5), Rational(36, 25), true, false);
  CHECK(e.threshold == Rational(36, 25));
  CHECK_FALSE(e.strict_criterion);
  CHECK(e.conclusion == Conclusion::WMustVanish);
  CHECK(std::string(to_string(e.conclusion)) == "w_must_vanish");
}
