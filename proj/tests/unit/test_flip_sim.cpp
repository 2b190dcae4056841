#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "flip/error.hpp"
#include "flip/flip_sim.hpp"
#include "flip/velocity.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace flip;

namespace {

SimGraph complete_graph(int n) {
  SimGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.set_edge(u, v, true);
  return g;
}

std::set<std::pair<int, int>> edge_set(const SimGraph& g) {
  std::set<std::pair<int, int>> out;
  for (int u = 0; u < g.vertex_count(); ++u)
    for (int v = u + 1; v < g.vertex_count(); ++v)
      if (g.has_edge(u, v)) out.insert({u, v});
  return out;
}

}  // namespace

TEST(FlipSim, SingleSteps) {
  const Rule er = erdos_renyi_rule();
  FlipProcess p(er, SimGraph(20), RandomStream(1, StreamTag::kProcess));
  EXPECT_EQ(p.step(), 1);
  EXPECT_EQ(p.graph().edge_count(), 1);

  const Rule trivial = trivial_rule(3);
  auto rng = fixture::stream(31);
  const SimGraph g0 = sample_graph(40, constant_graphon(0.5), rng);
  FlipProcess q(trivial, g0, RandomStream(2, StreamTag::kProcess));
  q.advance(1000);
  EXPECT_EQ(q.graph(), g0);

  EXPECT_THROW(FlipProcess(triangle_removal_rule(), SimGraph(2), RandomStream(1, StreamTag::kProcess)),
               ValidationError);
}

TEST(FlipSim, TriangleFreeGraphIsAbsorbing) {
  // Complete bipartite graphs contain no triangle.
  SimGraph g(30);
  for (int u = 0; u < 15; ++u)
    for (int v = 15; v < 30; ++v) g.set_edge(u, v, true);
  const Rule tr = triangle_removal_rule();
  FlipProcess p(tr, g, RandomStream(3, StreamTag::kProcess));
  p.advance(5000);
  EXPECT_EQ(p.graph(), g);
}

TEST(FlipSim, LocalityAndMonotonicity) {
  auto rng = fixture::stream(32);
  const SimGraph g0 = sample_graph(25, constant_graphon(0.5), rng);
  for (const char* name : {"extremist:4", "component-completion:3", "triangle-removal", "removal:4:45"}) {
    const Rule rule = builtin_rule(name);
    FlipProcess p(rule, g0, RandomStream(4, StreamTag::kProcess));
    RandomStream proposal_rng(5, StreamTag::kProcess);
    for (int s = 0; s < 500; ++s) {
      const auto toggles = p.propose(proposal_rng);
      EXPECT_LE(toggles.size(), static_cast<std::size_t>(pair_count(rule.order())));
      std::set<int> vertices;
      for (const auto& t : toggles) {
        EXPECT_NE(p.graph().has_edge(t.u, t.v), t.present);
        vertices.insert(t.u);
        vertices.insert(t.v);
      }
      EXPECT_LE(vertices.size(), static_cast<std::size_t>(rule.order()));
      const auto before = p.graph().edge_count();
      const auto before_edges = edge_set(p.graph());
      p.step();
      const auto after = p.graph().edge_count();
      const std::string n = name;
      if (n == "component-completion:3") EXPECT_GE(after, before);
      if (n == "triangle-removal" || n == "removal:4:45") EXPECT_LE(after, before);
      std::size_t diff = 0;
      for (const auto& e : edge_set(p.graph())) diff += before_edges.count(e) == 0;
      for (const auto& e : before_edges) diff += p.graph().has_edge(e.first, e.second) ? 0 : 1;
      EXPECT_LE(diff, static_cast<std::size_t>(pair_count(rule.order())));
    }
  }
}

TEST(FlipSim, TupleSamplingIsUniform) {
  // Which ordered pair gets toggled under complementing:2 reveals the tuple.
  const Rule rule = complementing_rule(2);
  FlipProcess p(rule, SimGraph(4), RandomStream(6, StreamTag::kProcess));
  RandomStream rng(7, StreamTag::kProcess);
  std::map<std::pair<int, int>, int> counts;
  const int samples = 24000;
  for (int s = 0; s < samples; ++s) {
    const auto t = p.propose(rng);
    ASSERT_EQ(t.size(), 1u);
    ++counts[{t[0].u, t[0].v}];
  }
  EXPECT_EQ(counts.size(), 12u);
  const double expected = samples / 12.0;
  for (const auto& [pair, c] : counts) EXPECT_NEAR(c, expected, 5 * std::sqrt(expected));
}

TEST(FlipSim, IncrementalCountersMatchRecount) {
  auto rng = fixture::stream(33);
  const SimGraph g0 = sample_graph(60, StepGraphon({0.2, 0.3, 0.5}, {0.9, 0.1, 0.4, 0.1, 0.5, 0.2, 0.4, 0.2, 0.7}), rng);
  FlipProcess p(extremist_rule(3), g0, RandomStream(8, StreamTag::kProcess));
  for (int s = 0; s < 20; ++s) {
    p.advance(100);
    EXPECT_EQ(p.block_counts(), block_edge_counts(p.graph()));
    EXPECT_EQ(p.stepped_graphon(), stepped(p.graph()));
  }
}

TEST(FlipSim, RunIsDeterministic) {
  auto rng = fixture::stream(34);
  const SimGraph g0 = sample_graph(50, constant_graphon(0.4), rng);
  const Rule rule = extremist_rule(3);
  const auto a = run(rule, g0, 3000, {1000, 2000}, 11);
  const auto b = run(rule, g0, 3000, {1000, 2000}, 11);
  ASSERT_EQ(a.snapshots.size(), 3u);
  EXPECT_EQ(a.final_graph, b.final_graph);
  std::ostringstream ea, eb;
  a.final_graph.write_edge_list(ea);
  b.final_graph.write_edge_list(eb);
  EXPECT_EQ(ea.str(), eb.str());
  for (std::size_t s = 0; s < 3; ++s) EXPECT_EQ(a.snapshots[s].stepped, b.snapshots[s].stepped);
  const auto none = run(rule, g0, 0, {}, 11);
  EXPECT_EQ(none.snapshots.size(), 1u);
  EXPECT_EQ(none.final_graph, g0);
  EXPECT_THROW(run(rule, g0, 10, {20}, 1), ValidationError);
}

TEST(FlipSim, ErdosRenyiDensity) {
  const int n = 1000;
  const auto result = run(erdos_renyi_rule(), SimGraph(n), n * n / 2, {}, 1);
  EXPECT_NEAR(result.final_graph.edge_density(), oracle::er_density(0, 0.5), 0.02);
}

TEST(FlipSim, OneStepExpectation) {
  auto rng = fixture::stream(35);
  const SimGraph g = sample_graph(500, constant_graphon(0.3), rng);
  const auto trivial = one_step_expectation_check(trivial_rule(3), g, 0, 0, 1000, 1);
  EXPECT_EQ(trivial.empirical, 0.0);
  EXPECT_EQ(trivial.exact, 0.0);
  const auto er = one_step_expectation_check(erdos_renyi_rule(), g, 0, 0, 200000, 2);
  EXPECT_NEAR(er.exact, 2 * (1 - stepped(g).value(0, 0)), 1e-12);
  EXPECT_NEAR(er.empirical, er.exact, 4 * er.std_error + er.slack);
  const SimGraph dense = sample_graph(500, constant_graphon(0.8), rng);
  const auto tr = one_step_expectation_check(triangle_removal_rule(), dense, 0, 0, 200000, 3);
  EXPECT_NEAR(tr.exact, -6 * std::pow(stepped(dense).value(0, 0), 3), 1e-12);
  EXPECT_NEAR(tr.empirical, tr.exact, 4 * tr.std_error + tr.slack);
}

TEST(FlipSim, TransferenceReport) {
  const auto report = transference_experiment(erdos_renyi_rule(), constant_graphon(0.0), 300, 0.5, 5, 1);
  ASSERT_EQ(report.points.size(), 6u);
  EXPECT_EQ(report.points.front().t, 0.0);
  EXPECT_EQ(report.points.back().step, 45000);
  EXPECT_LE(report.max_cut_dist(), 0.05);
  std::ostringstream out;
  write_transference_csv(out, report);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "t,cut_dist,l1_dist,sim_density,traj_density");
  EXPECT_THROW(transference_experiment(erdos_renyi_rule(), constant_graphon(0.0), 50, 0.5, 5, 1),
               ValidationError);
}
