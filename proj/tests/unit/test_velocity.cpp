#include <gtest/gtest.h>

#include <cmath>

#include "flip/combinatorics.hpp"
#include "flip/error.hpp"
#include "flip/velocity.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace flip;

TEST(Velocity, ConstantExamples) {
  const Rule tr = triangle_removal_rule();
  const Rule er = erdos_renyi_rule();
  for (double d : {0.0, 0.3, 0.5, 1.0}) {
    EXPECT_NEAR(velocity(tr, constant_graphon(d)).value(0, 0), -6 * d * d * d, 1e-14);
    EXPECT_NEAR(velocity(er, constant_graphon(d)).value(0, 0), 2 * (1 - d), 1e-14);
    for (int k = 2; k <= 5; ++k)
      EXPECT_NEAR(velocity(complementing_rule(k), constant_graphon(d)).value(0, 0),
                  falling_factorial(k, 2) * (1 - 2 * d), 1e-12);
  }
  EXPECT_NEAR(velocity(tr, constant_graphon(0.5)).value(0, 0), -0.75, 1e-15);
  EXPECT_TRUE(VelocityOperator(trivial_rule(4)).vanishes());
  EXPECT_EQ(linf_norm(velocity(trivial_rule(3), symmetric_two_block(0.2, 0.9))), 0.0);
}

TEST(Velocity, MatchesDefinitionOracle) {
  auto rng = fixture::stream(11);
  for (const auto& name : builtin_rule_names()) {
    const Rule rule = builtin_rule(name);
    const int m = rule.order() >= 5 ? 2 : 3;
    const auto W = fixture::random_graphon(m, rng);
    const auto v = velocity(rule, W);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        EXPECT_NEAR(v.value(i, j), oracle::velocity_cell(rule, W, i, j), 1e-12) << name;
  }
}

TEST(Velocity, AsymmetricRuleMatchesOracle) {
  // Removing a single labeled edge breaks vertex symmetry.
  const std::pair<int, int> e[] = {{0, 2}};
  const Rule rule = removal_rule(LabeledGraph::from_edges(4, e));
  auto rng = fixture::stream(12);
  const auto W = fixture::random_graphon(3, rng);
  const auto v = velocity(rule, W);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(v.value(i, j), oracle::velocity_cell(rule, W, i, j), 1e-13);
}

TEST(Velocity, BoundsAndTwinRows) {
  auto rng = fixture::stream(13);
  for (const auto& name : builtin_rule_names()) {
    const Rule rule = builtin_rule(name);
    const double k2 = falling_factorial(rule.order(), 2);
    // Parts 0 and 1 are twins: equal masses and equal value rows.
    const double x = rng.uniform(), y = rng.uniform(), z = rng.uniform();
    const StepGraphon W({0.3, 0.3, 0.4}, {x, x, y, x, x, y, y, y, z});
    const auto v = velocity(rule, W);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(v.value(0, j), v.value(1, j), 1e-13) << name;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        EXPECT_GE(v.value(i, j), -k2 * W.value(i, j) - 1e-12) << name;
        EXPECT_LE(v.value(i, j), k2 * (1 - W.value(i, j)) + 1e-12) << name;
      }
    EXPECT_LE(linf_norm(v), k2 + 1e-12);
  }
}

TEST(Velocity, ExtremistKeepsSymmetricTwoBlockClass) {
  const Rule rule = extremist_rule(3);
  for (auto [x, y] : {std::pair{0.95, 0.18}, {0.3, 0.6}, {0.5, 0.5}}) {
    const auto v = velocity(rule, symmetric_two_block(x, y));
    EXPECT_NEAR(v.value(0, 0), v.value(1, 1), 1e-14);
    EXPECT_NEAR(v.value(0, 1), v.value(1, 0), 0.0);
  }
}

TEST(Velocity, BlockDiagonalZerosStay) {
  const StepGraphon W({0.3, 0.3, 0.4}, {0.6, 0.0, 0.0, 0.0, 0.8, 0.5, 0.0, 0.5, 0.2});
  for (const char* name : {"component-completion:3", "component-completion:4", "triangle-removal",
                           "removal:4:45"}) {
    const auto v = velocity(builtin_rule(name), W);
    EXPECT_EQ(v.value(0, 1), 0.0) << name;
    EXPECT_EQ(v.value(0, 2), 0.0) << name;
  }
}

TEST(Velocity, PolynomialMatchesOperator) {
  for (const auto& name : builtin_rule_names()) {
    const Rule rule = builtin_rule(name);
    const auto poly = velocity_poly(rule);
    EXPECT_EQ(poly.degree(), pair_count(rule.order()));
    EXPECT_GE(eval_poly(poly, 0.0), -1e-15) << name;
    EXPECT_LE(eval_poly(poly, 1.0), 1e-15) << name;
    for (int g = 0; g <= 20; ++g) {
      const double d = g / 20.0;
      const double exact = velocity(rule, constant_graphon(d)).value(0, 0);
      EXPECT_NEAR(eval_poly(poly, d), exact, 1e-12) << name;
      EXPECT_NEAR(eval_monomial(poly, d), exact, 1e-10) << name;
    }
  }
  const auto er = velocity_poly(erdos_renyi_rule());
  EXPECT_NEAR(er.monomial[0], 2.0, 1e-15);
  EXPECT_NEAR(er.monomial[1], -2.0, 1e-15);
  const auto tr = velocity_poly(triangle_removal_rule());
  EXPECT_NEAR(tr.monomial[3], -6.0, 1e-14);
}

TEST(Velocity, MonteCarloAgreesWithExact) {
  EXPECT_EQ(velocity_monte_carlo(trivial_rule(3), constant_graphon(0.4), 0, 0, 100, 1).mean, 0.0);
  const auto tr = velocity_monte_carlo(triangle_removal_rule(), constant_graphon(0.5), 0, 0,
                                       200000, 5);
  EXPECT_NEAR(tr.mean, -0.75, 4 * tr.std_error);
  const Rule ex = extremist_rule(3);
  const auto W = symmetric_two_block(0.95, 0.18);
  const auto exact = velocity(ex, W);
  for (auto [i, j] : {std::pair{0, 0}, {0, 1}}) {
    const auto mc = velocity_monte_carlo(ex, W, i, j, 100000, 9);
    EXPECT_NEAR(mc.mean, exact.value(i, j), 4 * mc.std_error + 1e-12);
  }
}

TEST(Velocity, LipschitzConstants) {
  auto rng = fixture::stream(14);
  for (const char* name : {"er", "triangle-removal", "complementing:3", "extremist:4"}) {
    const Rule rule = builtin_rule(name);
    const int k = rule.order();
    const double k2 = falling_factorial(k, 2);
    const double ck = k2 * k2 * std::ldexp(1.0, pair_count(k) - 1);
    const double cbox = 2 * ck;
    for (int rep = 0; rep < 10; ++rep) {
      const auto U = fixture::random_graphon(3, rng);
      const auto W = fixture::with_values(U, fixture::random_symmetric(3, rng, 0, 1));
      const auto vu = velocity(rule, U), vw = velocity(rule, W);
      EXPECT_LE(linf_dist(vu, vw), ck * linf_dist(U, W) + 1e-12);
      EXPECT_LE(cut_norm_exact(kernel_sub(vu, vw)).value,
                cbox * cut_norm_exact(kernel_sub(U, W)).value + 1e-12);
    }
  }
}
