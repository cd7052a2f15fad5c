#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "capcone/sampling.hpp"
#include "capcone/simons.hpp"

using namespace capcone;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("interior chain holds on cone configurations") {
  std::mt19937_64 rng(17);
  for (std::size_t n = 3; n <= 7; ++n)
    for (double a : {1.0, 4.0}) {
      const auto f = split_quadratic_fn(n, a);
      for (int s = 0; s < 400; ++s) {
        const auto cfg = random_cone_configuration(n, rng);
        REQUIRE(cone_constraint_violation(cfg) < 1e-12);
        const auto chain = simons_interior_chain(f, cfg);
        bool saw_pair_sum = false;
        for (const auto& e : chain.ledger) {
          INFO(e.context << " n=" << n << " a=" << a << " gap=" << e.gap);
          CHECK(e.holds());
          if (e.context == "pair_sum_identity") {
            saw_pair_sum = true;
            CHECK_THAT(e.rhs, WithinRel(static_cast<double>(n - 1) * chain.c, 1e-12));
          }
        }
        CHECK(saw_pair_sum);
      }
    }
}

TEST_CASE("flat points give an all-zero ledger") {
  ConeConfig cfg{std::vector<double>(4, 0.0), Tensor3(4), 1.0};
  const auto chain = simons_interior_chain(frobenius_fn(4), cfg);
  CHECK(chain.c == 0.0);
  for (const auto& e : chain.ledger) {
    CHECK(e.lhs == 0.0);
    CHECK(e.rhs == 0.0);
  }
}

TEST_CASE("regularized power chain converges to its limit") {
  std::mt19937_64 rng(23);
  for (int s = 0; s < 300; ++s) {
    const auto cfg = random_cone_configuration(3 + s % 5, rng);
    for (const auto& e : regularized_power_chain(cfg, 0.4, std::vector<double>{1e-4, 1e-6, 1e-8})) {
      INFO(e.context << " gap=" << e.gap);
      CHECK(e.holds());
    }
  }
  const auto cfg = random_cone_configuration(4, rng);
  CHECK_THROWS_AS(regularized_power_chain(cfg, 0.4, std::vector<double>{0.0}), DomainError);
}

TEST_CASE("power bound constants") {
  const auto b4 = power_interior_bound(1.0 / 3.0, 1.0, 1.0, 1.0, 4);
  REQUIRE(b4.simplified);
  CHECK_THAT(*b4.simplified, WithinRel(4.0 / 9.0, 1e-15));
  CHECK_THAT(b4.constant, WithinRel(4.0 / 9.0, 1e-14));
  CHECK_FALSE(power_interior_bound(0.2, 1.0, 1.0, 1.0, 7).simplified);
  CHECK_THROWS_AS(power_interior_bound(0.5, 1.0, 0.5, 1.0, 4), DomainError);
}

TEST_CASE("boundary identities hold for unit and split weights") {
  std::mt19937_64 rng(31);
  for (std::size_t n = 2; n <= 6; ++n) {
    const ConeSpec spec(n, (10.0 + 12.0 * static_cast<double>(n)) * std::numbers::pi / 180.0);
    for (int s = 0; s < 100; ++s) {
      const auto jet = random_boundary_jet(spec, rng);
      CHECK(boundary_identity_A2(jet).holds());
      for (double a : {1.0, 4.0})
        for (const auto& e : boundary_identity_split(jet, a)) {
          INFO(e.context << " gap=" << e.gap);
          CHECK(e.holds());
        }
    }
  }
}

TEST_CASE("boundary ratio values") {
  const double th = std::numbers::pi / 4;
  const std::vector<double> l{0.0, 2.0, -1.0, -1.0};
  const double H = 1.0 / std::sin(th);
  CHECK_THAT(L_function(split_competitor(4.0, 0.5), l, th, H), WithinAbs(3.0, 1e-14));
  CHECK_THROWS_AS(L_function(split_competitor(4.0, 0.5), l, th, 0.0), DomainError);
  CHECK(weighted_cubic(std::vector<double>{1.0, -1.0}, 4.0) == -3.0);
  CHECK(zero_H_condition(split_competitor(4.0, 0.5), std::vector<double>{0.0, 1.0, -1.0, 0.0}) == 3.0);
  CHECK_THROWS_AS(competitor_fn(split_competitor(0.0, 0.5), 3), DomainError);
  CHECK_THROWS_AS(competitor_fn(power_competitor(1.5), 3), DomainError);
}

TEST_CASE("admissible exponents from axially symmetric samples") {
  for (std::size_t n = 3; n <= 8; ++n) {
    std::vector<double> l(n, 1.0);
    l[0] = 0.0;
    l[n - 1] = -static_cast<double>(n - 2);
    const double th = 0.6;
    const auto iv = admissible_alpha(power_competitor(0.5), {{l, -l.back() / std::sin(th)}}, th);
    const double nd = static_cast<double>(n);
    CHECK(iv.feasible);
    CHECK_THAT(iv.hi, WithinRel((nd - 2) / (nd - 1), 1e-14));
    CHECK(iv.contains(0.5 * (nd - 2) / (nd - 1)));
    CHECK_FALSE(iv.contains(1.01 * (nd - 2) / (nd - 1)));
  }
  const auto bad = admissible_alpha(split_competitor(4.0, 0.5), {{{3.0, -1.0, -1.0, -1.0}, 0.0}}, 0.5);
  CHECK_FALSE(bad.feasible);
}
