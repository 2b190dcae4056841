#include "flip/flip_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <ostream>

#include "flip/combinatorics.hpp"
#include "flip/csv.hpp"
#include "flip/error.hpp"
#include "flip/trajectory.hpp"
#include "flip/velocity.hpp"

namespace flip {

FlipProcess::FlipProcess(const Rule& rule, SimGraph G0, RandomStream rng)
    : rule_(rule), graph_(std::move(G0)), rng_(rng) {
  const int n = graph_.vertex_count();
  if (n < rule.order()) throw ValidationError("graph has fewer vertices than the rule order");
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0);
  tuple_.resize(rule.order());
  sizes_ = graph_.part_sizes();
  counts_ = block_edge_counts(graph_);
}

std::vector<Toggle> FlipProcess::propose(RandomStream& rng) {
  const int k = rule_.order();
  const int n = graph_.vertex_count();
  for (int a = 0; a < k; ++a) {
    const int b = a + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - a)));
    std::swap(order_[a], order_[b]);
    tuple_[a] = order_[a];
  }
  std::uint32_t drawn = 0;
  for (int a = 0, p = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b, ++p)
      if (graph_.has_edge(tuple_[a], tuple_[b])) drawn |= std::uint32_t{1} << p;
  const std::uint32_t replacement = rule_.sample(drawn, rng.uniform());
  std::vector<Toggle> toggles;
  std::uint32_t diff = drawn ^ replacement;
  while (diff != 0) {
    const int p = std::countr_zero(diff);
    diff &= diff - 1;
    const auto [a, b] = pair_endpoints(k, p);
    toggles.push_back({tuple_[a], tuple_[b], ((replacement >> p) & 1u) != 0});
  }
  return toggles;
}

void FlipProcess::apply(const Toggle& t) {
  if (!graph_.set_edge(t.u, t.v, t.present)) return;
  const int m = graph_.part_count();
  const int pu = graph_.part_of(t.u), pv = graph_.part_of(t.v);
  const std::int64_t delta = t.present ? 1 : -1;
  if (pu == pv) {
    counts_[static_cast<std::size_t>(pu) * m + pu] += 2 * delta;
  } else {
    counts_[static_cast<std::size_t>(pu) * m + pv] += delta;
    counts_[static_cast<std::size_t>(pv) * m + pu] += delta;
  }
}

int FlipProcess::step() {
  const auto toggles = propose(rng_);
  for (const auto& t : toggles) apply(t);
  ++steps_;
  return static_cast<int>(toggles.size());
}

void FlipProcess::advance(std::int64_t steps) {
  for (std::int64_t s = 0; s < steps; ++s) step();
}

StepGraphon FlipProcess::stepped_graphon() const { return stepped_from_counts(sizes_, counts_); }

RunResult run(const Rule& rule, const SimGraph& G0, std::int64_t total_steps,
              const std::vector<std::int64_t>& checkpoint_steps, std::uint64_t seed,
              std::uint32_t replicate) {
  if (total_steps < 0) throw ValidationError("total_steps must be non-negative");
  for (std::size_t c = 0; c < checkpoint_steps.size(); ++c) {
    if (checkpoint_steps[c] < 0 || checkpoint_steps[c] > total_steps)
      throw ValidationError("checkpoint steps must lie in [0, total_steps]");
    if (c > 0 && checkpoint_steps[c] <= checkpoint_steps[c - 1])
      throw ValidationError("checkpoint steps must be strictly increasing");
  }
  FlipProcess process(rule, G0, RandomStream(seed, StreamTag::kProcess, replicate));
  RunResult result;
  result.snapshots.push_back({0, G0.edge_count(), process.stepped_graphon()});
  for (std::int64_t target : checkpoint_steps) {
    if (target == 0) continue;
    process.advance(target - process.step_count());
    result.snapshots.push_back(
        {process.step_count(), process.graph().edge_count(), process.stepped_graphon()});
  }
  process.advance(total_steps - process.step_count());
  result.final_graph = process.graph();
  return result;
}

OneStepCheck one_step_expectation_check(const Rule& rule, const SimGraph& G, int i, int j,
                                        std::int64_t samples, std::uint64_t seed) {
  if (samples < 2) throw ValidationError("need at least 2 samples");
  const int m = G.part_count();
  if (i < 0 || j < 0 || i >= m || j >= m) throw ValidationError("part index out of range");
  const StepGraphon W = stepped(G);
  const auto sizes = G.part_sizes();
  const double n = G.vertex_count();
  // Stepped value change per toggled pair in the (i,j) block.
  const double unit = i == j ? 2.0 / (static_cast<double>(sizes[i]) * sizes[i])
                             : 1.0 / (static_cast<double>(sizes[i]) * sizes[j]);
  const double scale = n * (n - 1.0);

  FlipProcess process(rule, G, RandomStream(seed, StreamTag::kProcess));
  RandomStream rng(seed, StreamTag::kOneStepCheck);
  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    double change = 0.0;
    for (const auto& t : process.propose(rng)) {
      const int pu = G.part_of(t.u), pv = G.part_of(t.v);
      if ((pu == i && pv == j) || (pu == j && pv == i)) change += t.present ? unit : -unit;
    }
    const double x = scale * change;
    sum += x;
    sum_sq += x * x;
  }
  OneStepCheck out;
  out.samples = samples;
  out.empirical = sum / samples;
  const double var = std::max(0.0, (sum_sq - sum * out.empirical) / (samples - 1));
  out.std_error = std::sqrt(var / samples);
  out.exact = VelocityOperator(rule).cell(W, i, j);
  const int k = rule.order();
  out.slack = 2.0 * falling_factorial(k, 2) * pair_count(k) / n;
  return out;
}

double TransferenceReport::max_cut_dist() const {
  double worst = 0.0;
  for (const auto& p : points) worst = std::max(worst, p.cut_dist);
  return worst;
}

namespace {

double bisection_spread(const SimGraph& G, RandomStream& rng) {
  const int n = G.vertex_count(), m = G.part_count();
  const std::size_t words = G.row_words();
  std::vector<std::vector<int>> members(m);
  for (int v = 0; v < n; ++v) members[G.part_of(v)].push_back(v);
  std::vector<std::vector<std::uint64_t>> masks(m, std::vector<std::uint64_t>(words, 0));
  for (int v = 0; v < n; ++v) masks[G.part_of(v)][v >> 6] |= std::uint64_t{1} << (v & 63);

  double spread = 0.0;
  for (int i = 0; i < m; ++i) {
    auto& part = members[i];
    if (part.size() < 2) continue;
    std::shuffle(part.begin(), part.end(), rng);
    const std::size_t half = part.size() / 2;
    for (int j = 0; j < m; ++j) {
      std::int64_t e[2] = {0, 0};
      for (std::size_t idx = 0; idx < part.size(); ++idx) {
        const auto row = G.row(part[idx]);
        std::int64_t c = 0;
        for (std::size_t w = 0; w < words; ++w) c += std::popcount(row[w] & masks[j][w]);
        e[idx < half ? 0 : 1] += c;
      }
      const double size_j = static_cast<double>(members[j].size());
      const double d0 = e[0] / (static_cast<double>(half) * size_j);
      const double d1 = e[1] / (static_cast<double>(part.size() - half) * size_j);
      spread = std::max(spread, std::abs(d0 - d1));
    }
  }
  return spread;
}

}  // namespace

TransferenceReport transference_experiment(const Rule& rule, const StepGraphon& W0, int n, double T,
                                           int checkpoint_count, std::uint64_t seed,
                                           const IntegratorOptions& opts, std::uint32_t replicate) {
  if (n < 100) throw ValidationError("transference needs n >= 100");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("T must be positive");
  if (checkpoint_count < 1) throw ValidationError("need at least one checkpoint");
  if (W0.part_count() > kCutNormExactMaxParts)
    throw ValidationError("initial graphon has too many parts for the exact cut norm");

  RandomStream graph_rng(seed, StreamTag::kGraphSample, replicate);
  SimGraph G0 = sample_graph_stratified(n, W0, graph_rng);
  std::vector<double> times{0.0};
  for (int c = 1; c <= checkpoint_count; ++c) times.push_back(T * c / checkpoint_count);
  const double n2 = static_cast<double>(n) * n;

  const std::vector<double> flow_times(times.begin() + 1, times.end());
  const Trajectory traj = integrate(rule, W0, flow_times, opts);

  FlipProcess process(rule, std::move(G0), RandomStream(seed, StreamTag::kProcess, replicate));
  RandomStream spread_rng(seed, StreamTag::kGeneric, replicate);
  TransferenceReport report;
  report.n = n;
  report.seed = seed;
  report.replicate = replicate;
  for (std::size_t c = 0; c < times.size(); ++c) {
    const auto target = static_cast<std::int64_t>(std::floor(times[c] * n2));
    process.advance(target - process.step_count());
    StepGraphon sim = process.stepped_graphon();
    const StepKernel& flow = c == 0 ? static_cast<const StepKernel&>(W0) : traj.checkpoints[c - 1].state;
    const std::vector<double> masses(sim.masses().begin(), sim.masses().end());
    const std::vector<double> values(flow.values().begin(), flow.values().end());
    StepKernel flow_on_sample(masses, values);
    const StepKernel diff = kernel_sub(sim, flow_on_sample);
    TransferencePoint point{times[c],
                            process.step_count(),
                            sim,
                            flow_on_sample,
                            cut_norm_exact(diff).value,
                            l1_dist(sim, flow_on_sample),
                            edge_density(sim),
                            edge_density(flow_on_sample),
                            bisection_spread(process.graph(), spread_rng)};
    report.points.push_back(std::move(point));
  }
  return report;
}

void write_transference_csv(std::ostream& out, const TransferenceReport& report) {
  out << "t,cut_dist,l1_dist,sim_density,traj_density\n";
  for (const auto& p : report.points)
    out << csv::format(p.t) << ',' << csv::format(p.cut_dist) << ',' << csv::format(p.l1_dist) << ','
        << csv::format(p.sim_density) << ',' << csv::format(p.traj_density) << '\n';
}

}  // namespace flip
