#pragma once

// Discrete flip process on n-vertex graphs and the harnesses comparing it
// with the velocity operator and with graphon trajectories.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "flip/integrator.hpp"
#include "flip/random.hpp"
#include "flip/rule.hpp"
#include "flip/sim_graph.hpp"
#include "flip/step_graphon.hpp"

namespace flip {

// One pair rewritten by a step: tuple positions are already mapped to
// vertices.
struct Toggle {
  int u;
  int v;
  bool present;
};

// Process state: the graph, a persistent vertex permutation used for
// partial Fisher-Yates tuple sampling, and per-part edge counters kept in
// sync with every toggle.
class FlipProcess {
 public:
  FlipProcess(const Rule& rule, SimGraph G0, RandomStream rng);

  const Rule& rule() const { return rule_; }
  const SimGraph& graph() const { return graph_; }
  std::int64_t step_count() const { return steps_; }

  // Samples an ordered tuple and a replacement with `rng` and returns the
  // pairs that would change, without touching the graph.
  std::vector<Toggle> propose(RandomStream& rng);

  // One step of the process with the process's own stream. Returns the
  // number of toggled pairs.
  int step();
  void advance(std::int64_t steps);

  const std::vector<std::int64_t>& block_counts() const { return counts_; }
  const std::vector<std::int64_t>& part_sizes() const { return sizes_; }
  // stepped(graph()) from the incremental counters.
  StepGraphon stepped_graphon() const;

 private:
  void apply(const Toggle& t);

  Rule rule_;
  SimGraph graph_;
  RandomStream rng_;
  std::int64_t steps_ = 0;
  std::vector<int> order_;
  std::vector<int> tuple_;
  std::vector<std::int64_t> sizes_;
  std::vector<std::int64_t> counts_;
};

struct Snapshot {
  std::int64_t step;
  std::int64_t edges;
  StepGraphon stepped;
};

struct RunResult {
  std::vector<Snapshot> snapshots;
  SimGraph final_graph;
};

// Runs total_steps steps from G0 with stream (seed, kProcess, replicate). A
// snapshot is taken at step 0 and at every listed checkpoint (sorted,
// <= total_steps).
RunResult run(const Rule& rule, const SimGraph& G0, std::int64_t total_steps,
              const std::vector<std::int64_t>& checkpoint_steps, std::uint64_t seed,
              std::uint32_t replicate = 0);

struct OneStepCheck {
  double empirical = 0.0;  // (n)_2 * mean change of the stepped value at (i,j)
  double exact = 0.0;      // velocity(rule, stepped(G)) at (i,j)
  double std_error = 0.0;
  double slack = 0.0;      // finite-n allowance 2 (k)_2 C(k,2) / n
  std::int64_t samples = 0;
};

OneStepCheck one_step_expectation_check(const Rule& rule, const SimGraph& G, int i, int j,
                                        std::int64_t samples, std::uint64_t seed);

struct TransferencePoint {
  double t;
  std::int64_t step;
  StepGraphon simulated;  // stepped simulation on the sampled parts
  StepKernel trajectory;  // flow of W0 at t
  double cut_dist;        // exact cut norm on the coarse parts
  double l1_dist;
  double sim_density;
  double traj_density;
  double within_part_spread;  // largest density gap across random part bisections
};

struct TransferenceReport {
  int n = 0;
  std::uint64_t seed = 0;
  std::uint32_t replicate = 0;
  std::vector<TransferencePoint> points;
  double max_cut_dist() const;
};

// Samples G0 from W0 with stratified part sizes, runs floor(T n^2) steps and
// compares the stepped simulation with the trajectory of W0 at
// checkpoint_count evenly spaced times in (0, T], plus t = 0. The coarse
// comparison uses the sampled part masses for both graphons.
// Streams are keyed by (seed, purpose, replicate).
TransferenceReport transference_experiment(const Rule& rule, const StepGraphon& W0, int n, double T,
                                           int checkpoint_count, std::uint64_t seed,
                                           const IntegratorOptions& opts = {},
                                           std::uint32_t replicate = 0);

// CSV "t,cut_dist,l1_dist,sim_density,traj_density".
void write_transference_csv(std::ostream& out, const TransferenceReport& report);

}  // namespace flip
