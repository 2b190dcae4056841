#pragma once

// Step kernels and step graphons: finitely many parts with masses and a
// symmetric value matrix. Densities, rooted densities, cut norm, distances,
// sampling of finite graphs and stepping of finite graphs back to graphons.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flip/graph_space.hpp"
#include "flip/random.hpp"
#include "flip/sim_graph.hpp"

namespace flip {

inline constexpr double kMassTolerance = 1e-12;
inline constexpr double kGraphonBand = 1e-9;
inline constexpr double kAssignmentGuard = 1e8;

class StepKernel {
 public:
  StepKernel() = default;
  // values is m*m row-major. Masses must be positive and sum to 1 within
  // 1e-12; values must be symmetric within 1e-12 (they are symmetrized).
  StepKernel(std::vector<double> masses, std::vector<double> values);

  int part_count() const { return m_; }
  double mass(int i) const { return masses_[i]; }
  double value(int i, int j) const { return values_[static_cast<std::size_t>(i) * m_ + j]; }
  std::span<const double> masses() const { return masses_; }
  std::span<const double> values() const { return values_; }

  // Same part count and masses within 1e-12.
  bool same_masses(const StepKernel& other) const;

  friend bool operator==(const StepKernel&, const StepKernel&) = default;

 protected:
  int m_ = 0;
  std::vector<double> masses_;
  std::vector<double> values_;
};

// A step kernel with values in [0,1] (a numeric band of 1e-9 is tolerated).
class StepGraphon : public StepKernel {
 public:
  StepGraphon() = default;
  StepGraphon(std::vector<double> masses, std::vector<double> values);
  // Wraps a kernel after checking the [0,1] band.
  explicit StepGraphon(const StepKernel& kernel);
};

StepGraphon constant_graphon(double d);
// Two parts with masses (mu, 1-mu): diag values x1, x2 and off-diagonal y.
StepGraphon two_block(double mu, double x1, double x2, double y);
// U_{x,y}: parts of mass 1/2, value x on both diagonal blocks, y across.
StepGraphon symmetric_two_block(double x, double y);

// Homomorphism density t(F,W) and induced density t_ind(F,W) by direct
// enumeration of all m^k part assignments. GuardExceeded above 1e8.
double density(const LabeledGraph& F, const StepKernel& W);
double induced_density(const LabeledGraph& F, const StepKernel& W);

// Rooted densities with vertex a of F pinned to part i and b to part j.
double rooted_density(const LabeledGraph& F, int a, int b, int i, int j, const StepKernel& W);
double rooted_induced_density(const LabeledGraph& F, int a, int b, int i, int j,
                              const StepKernel& W);

struct CutNormResult {
  double value = 0.0;
  std::vector<int> rows;     // maximizing S
  std::vector<int> columns;  // maximizing T
};

inline constexpr int kCutNormExactMaxParts = 14;

// max over S,T subsets of parts of |sum_{i in S, j in T} mu_i mu_j K_ij|.
// GuardExceeded above 14 parts (use cut_norm_lower_bound instead).
CutNormResult cut_norm_exact(const StepKernel& K);

// Randomized single-flip local search over (S,T); never exceeds the exact
// value.
CutNormResult cut_norm_lower_bound(const StepKernel& K, int restarts, std::uint64_t seed);

StepKernel kernel_sub(const StepKernel& U, const StepKernel& W);
double linf_norm(const StepKernel& K);
double linf_dist(const StepKernel& U, const StepKernel& W);
double l1_dist(const StepKernel& U, const StepKernel& W);

// Total edge density sum_ij mu_i mu_j W_ij.
double edge_density(const StepKernel& W);

// Minimum over mass-preserving relabelings sigma of the parts of
// cut_norm_exact(U - W o sigma); an upper bound on the cut distance.
// Requires equal sorted mass multisets and at most 8 parts.
double cut_distance_perm(const StepKernel& U, const StepKernel& W);

// n vertices, each with an independent pi-random part; each pair an
// independent edge with probability W on the parts.
SimGraph sample_graph(int n, const StepGraphon& W, RandomStream& rng);

// Part sizes round(mu_i n) (largest remainder), assigned to a random
// permutation of the vertices; edges as in sample_graph.
SimGraph sample_graph_stratified(int n, const StepGraphon& W, RandomStream& rng);

// Graphon of G averaged over its parts: off-diagonal e(V_i,V_j)/(|V_i||V_j|),
// diagonal 2 e(V_i)/|V_i|^2, masses |V_i|/n. Empty parts throw.
StepGraphon stepped(const SimGraph& G);

// Per-part edge counters: counts[i*m+j] = e_G(V_i, V_j) with edges inside a
// part counted twice on the diagonal.
std::vector<std::int64_t> block_edge_counts(const SimGraph& G);
StepGraphon stepped_from_counts(std::span<const std::int64_t> part_sizes,
                                std::span<const std::int64_t> counts);

// JSON graphon file: {"masses": [...], "values": [[...], ...]}.
std::string graphon_to_json(const StepKernel& W);
StepGraphon graphon_from_json(const std::string& text);
StepGraphon read_graphon_file(const std::string& path);
void write_graphon_file(const StepKernel& W, const std::string& path);

}  // namespace flip
