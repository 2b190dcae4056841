#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "flip/combinatorics.hpp"
#include "flip/error.hpp"
#include "flip/trajectory.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace flip;

TEST(Integrator, OptionValidation) {
  IntegratorOptions opts;
  opts.rtol = 0;
  EXPECT_THROW(validate_options(opts), ValidationError);
  opts = {};
  opts.band_tol = 1e-6;
  EXPECT_THROW(validate_options(opts), ValidationError);
}

TEST(Integrator, ExponentialBothMethods) {
  const VectorField f = [](std::span<const double> y, std::span<double> d) { d[0] = -y[0]; };
  for (auto method : {IntegratorMethod::kRk45Adaptive, IntegratorMethod::kRk4Fixed}) {
    IntegratorOptions opts;
    opts.method = method;
    std::vector<double> y{1.0};
    StepStats stats;
    integrate_ode(f, y, 0.0, 2.0, opts, stats);
    EXPECT_NEAR(y[0], std::exp(-2.0), 1e-10);
    integrate_ode(f, y, 2.0, 0.0, opts, stats);
    EXPECT_NEAR(y[0], 1.0, 1e-9);
  }
}

TEST(Trajectory, ClosedForms) {
  const auto er = flow_at(erdos_renyi_rule(), constant_graphon(0), 0.5);
  EXPECT_NEAR(er.value(0, 0), 0.632120558829, 1e-8);
  const auto tr = flow_at(triangle_removal_rule(), constant_graphon(1), 1.0);
  EXPECT_NEAR(tr.value(0, 0), 0.277350098113, 1e-8);
  const auto W = symmetric_two_block(0.3, 0.9);
  EXPECT_EQ(flow_at(extremist_rule(3), W, 0.0), static_cast<const StepKernel&>(W));
}

TEST(Trajectory, ComplementingCheckpoints) {
  for (int k = 2; k <= 4; ++k) {
    const double times[] = {0.05, 0.1, 0.2, 0.4};
    const auto traj = integrate(complementing_rule(k), constant_graphon(0.9), times);
    ASSERT_EQ(traj.checkpoints.size(), 4u);
    for (const auto& cp : traj.checkpoints)
      EXPECT_NEAR(cp.state.value(0, 0), oracle::complementing_density(k, 0.9, cp.t), 1e-8);
  }
}

TEST(Trajectory, CheckpointValidation) {
  const double unsorted[] = {0.2, 0.1};
  EXPECT_THROW(integrate(erdos_renyi_rule(), constant_graphon(0), unsorted), ValidationError);
  const double mixed[] = {-0.1, 0.2};
  EXPECT_THROW(integrate(erdos_renyi_rule(), constant_graphon(0), mixed), ValidationError);
}

TEST(Trajectory, ExtremistStaysInClass) {
  std::vector<double> times;
  for (int c = 1; c <= 14; ++c) times.push_back(0.1 * c);
  const auto traj = integrate(extremist_rule(3), symmetric_two_block(0.95, 0.18), times);
  for (const auto& cp : traj.checkpoints) {
    EXPECT_NEAR(cp.state.value(0, 0), cp.state.value(1, 1), 1e-10);
    for (double v : cp.state.values()) {
      EXPECT_GE(v, -1e-9);
      EXPECT_LE(v, 1 + 1e-9);
    }
  }
  EXPECT_LE(traj.stats.max_band_excursion, 1e-9);
}

TEST(Trajectory, Semigroup) {
  const auto er = erdos_renyi_rule();
  EXPECT_LE(semigroup_check(er, constant_graphon(0.2), 0.3, 0.3), 1e-8);
  EXPECT_LE(semigroup_check(triangle_removal_rule(), constant_graphon(0.9), 0.4, 0.6), 1e-8);
  EXPECT_LE(semigroup_check(er, constant_graphon(0.2), 0.0, 0.5), 1e-10);
  EXPECT_THROW(semigroup_check(er, constant_graphon(0.2), -1, 0.5), ValidationError);
}

TEST(Trajectory, TimeLipschitzAndPositivity) {
  auto rng = fixture::stream(21);
  std::vector<double> times;
  for (int c = 1; c <= 12; ++c) times.push_back(0.25 * c);
  for (const auto& name : builtin_rule_names()) {
    const Rule rule = builtin_rule(name);
    const double k2 = falling_factorial(rule.order(), 2);
    const auto W0 = fixture::random_graphon(2, rng);
    const auto traj = integrate(rule, W0, times);
    const StepKernel* prev = &W0;
    double prev_t = 0.0;
    for (const auto& cp : traj.checkpoints) {
      EXPECT_LE(linf_dist(cp.state, *prev), k2 * (cp.t - prev_t) + 1e-9) << name;
      const double decay = std::exp(-k2 * cp.t);
      for (std::size_t e = 0; e < cp.state.values().size(); ++e) {
        EXPECT_GE(cp.state.values()[e], decay * W0.values()[e] - 1e-10) << name;
        EXPECT_GE(1 - cp.state.values()[e], decay * (1 - W0.values()[e]) - 1e-10) << name;
      }
      prev = &cp.state;
      prev_t = cp.t;
    }
  }
}

TEST(Trajectory, FirstOrderAccuracy) {
  auto rng = fixture::stream(22);
  for (const char* name : {"er", "triangle-removal", "extremist:3", "component-completion:4"}) {
    const Rule rule = builtin_rule(name);
    const int k = rule.order();
    const double k2 = falling_factorial(k, 2);
    const double ck = k2 * k2 * std::ldexp(1.0, pair_count(k) - 1);
    const auto W = fixture::random_graphon(3, rng);
    const auto v = velocity(rule, W);
    for (double delta : {1e-2, 1e-3}) {
      const auto moved = flow_at(rule, W, delta);
      double worst = 0.0;
      for (std::size_t e = 0; e < v.values().size(); ++e)
        worst = std::max(worst, std::abs((moved.values()[e] - W.values()[e]) / delta - v.values()[e]));
      EXPECT_LE(worst, ck * k2 * delta) << name;
    }
  }
}

TEST(Trajectory, StepStructurePreserved) {
  auto rng = fixture::stream(23);
  for (const char* name : {"extremist:3", "component-completion:3", "complementing:3"}) {
    const auto W0 = fixture::random_graphon(3, rng, 0.05, 0.95);
    const auto W = flow_at(builtin_rule(name), W0, 1.0);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        double gap = 0.0;
        for (int c = 0; c < 3; ++c) gap = std::max(gap, std::abs(W.value(i, c) - W.value(j, c)));
        EXPECT_GT(gap, 1e-6) << name;
      }
  }
}

TEST(Trajectory, BackwardAge) {
  const auto er = erdos_renyi_rule();
  const auto age = backward_age(er, constant_graphon(1 - std::exp(-2.0)), 10.0);
  EXPECT_EQ(age.status, AgeStatus::kBoundaryReached);
  EXPECT_NEAR(age.age, 1.0, 1e-6);
  EXPECT_NEAR(age.origin.value(0, 0), 0.0, 1e-6);

  const auto fixed = backward_age(er, constant_graphon(1.0), 5.0);
  EXPECT_EQ(fixed.status, AgeStatus::kExceedsMaxAge);
  EXPECT_EQ(fixed.age, 5.0);

  const auto top = backward_age(triangle_removal_rule(), constant_graphon(1.0), 5.0);
  EXPECT_EQ(top.status, AgeStatus::kBoundaryReached);
  EXPECT_EQ(top.age, 0.0);
  EXPECT_EQ(top.origin.value(0, 0), 1.0);
}

TEST(Trajectory, AgeUpperSemicontinuityProbe) {
  const auto rule = complementing_rule(3);
  const double base = backward_age(rule, constant_graphon(0.3), 10.0).age;
  // Tail of a sequence approaching 0.3 from both sides.
  double tail = 0.0;
  for (double eps : {1e-2, -1e-3, 1e-4, -1e-5}) {
    const double age = backward_age(rule, constant_graphon(0.3 + eps), 10.0).age;
    if (std::abs(eps) <= 1e-4) tail = std::max(tail, age);
  }
  EXPECT_LE(tail, base + 1e-3);
}

TEST(Trajectory, Destinations) {
  const auto er = find_destination(erdos_renyi_rule(), symmetric_two_block(0.2, 0.7));
  ASSERT_TRUE(er.converged);
  for (double v : er.state.values()) EXPECT_NEAR(v, 1.0, 1e-8);

  std::vector<double> dist(8, 0.0);
  dist[1] = 0.5;
  dist[7] = 0.5;
  const double d = average_density(3, dist);
  const auto ig = find_destination(ignorant_rule(3, dist), StepGraphon({0.4, 0.6}, {0.1, 0.8, 0.8, 0.3}));
  ASSERT_TRUE(ig.converged);
  for (double v : ig.state.values()) EXPECT_NEAR(v, d, 1e-8);

  const StepGraphon W0({0.4, 0.6}, {0.9, 0.1, 0.1, 0.5});
  const auto st = find_destination(stirring_rule(3, StirringVariant::kFirm), W0);
  ASSERT_TRUE(st.converged);
  for (double v : st.state.values()) EXPECT_NEAR(v, edge_density(W0), 1e-7);
  EXPECT_LT(st.velocity_residual, 1e-8);

  const auto slow = find_destination(triangle_removal_rule(), constant_graphon(1.0), 1e-8, 1e-9, 3.0);
  EXPECT_FALSE(slow.converged);
  EXPECT_EQ(slow.time, 3.0);
}

TEST(Trajectory, ConstantFixedPoints) {
  EXPECT_EQ(constant_fixed_points(erdos_renyi_rule()), std::vector<double>{1.0});
  EXPECT_EQ(constant_fixed_points(triangle_removal_rule()), std::vector<double>{0.0});
  for (int k = 3; k <= 5; ++k) {
    const auto roots = constant_fixed_points(extremist_rule(k));
    for (double target : {0.0, 0.5, 1.0})
      EXPECT_TRUE(std::any_of(roots.begin(), roots.end(),
                              [&](double r) { return std::abs(r - target) < 1e-12; }))
          << k << " " << target;
  }
  const auto comp = constant_fixed_points(complementing_rule(3));
  ASSERT_EQ(comp.size(), 1u);
  EXPECT_NEAR(comp[0], 0.5, 1e-12);
  EXPECT_EQ(constant_fixed_points(stirring_rule(3, StirringVariant::kFirm), 11).size(), 11u);
}

TEST(Trajectory, Genome) {
  const auto er = erdos_renyi_rule();
  const auto same = genome_check(er, constant_graphon(0.3), constant_graphon(0.3), 1.0);
  EXPECT_FALSE(same.has_value());
  const auto ratio = genome_check(er, constant_graphon(0.3), constant_graphon(0.6), 0.7);
  ASSERT_TRUE(ratio.has_value());
  EXPECT_NEAR(*ratio, std::exp(-1.4), 1e-8);
  const double cbox = 36.0 * 8;
  const auto fig = genome_check(extremist_rule(3), symmetric_two_block(0.95, 0.18),
                                symmetric_two_block(0.95, 0.15), 1.4);
  ASSERT_TRUE(fig.has_value());
  EXPECT_LE(*fig, std::exp(cbox * 1.4));
}

TEST(Trajectory, CsvRoundTrip) {
  const double times[] = {0.0, 0.5, 1.0};
  const auto W0 = StepGraphon({0.25, 0.75}, {0.1, 0.2, 0.2, 0.3});
  const auto traj = integrate(extremist_rule(3), W0, times);
  std::stringstream ss;
  write_trajectory_csv(ss, traj);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "t,cell_1_1,cell_1_2,cell_2_2");
  const auto back = read_trajectory_csv(ss, W0.masses());
  ASSERT_EQ(back.checkpoints.size(), 3u);
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(back.checkpoints[c].t, traj.checkpoints[c].t);
    EXPECT_EQ(back.checkpoints[c].state, traj.checkpoints[c].state);
  }
}
