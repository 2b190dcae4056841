#pragma once

// Flip-process rules: row-stochastic replacement matrices over labeled
// k-vertex graphs, the example rule families, and derived quantities.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "flip/graph_space.hpp"

namespace flip {

inline constexpr double kProbabilityTolerance = 1e-12;

struct RuleEntry {
  std::uint32_t target;  // replacement graph index H
  double probability;    // R[F][H]

  friend bool operator==(const RuleEntry&, const RuleEntry&) = default;
};

using RuleRow = std::vector<RuleEntry>;

// Checks row stochasticity and entry range. Throws ValidationError naming the
// worst row and its residual. Rows must be sorted by target without
// duplicates.
void validate_rows(int k, const std::vector<RuleRow>& rows);

class Rule {
 public:
  // rows[F] is the sparse replacement distribution of drawn graph F; an empty
  // row means F is idle. Zero-probability entries are dropped.
  Rule(int k, std::vector<RuleRow> rows);

  // Builds a rule from explicitly listed rows; omitted rows are idle.
  static Rule from_sparse(int k, const std::map<std::uint32_t, RuleRow>& rows);

  int order() const { return k_; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(rows_.size()); }

  // Non-empty sparse row (idle rows are materialized as {F, 1}).
  std::span<const RuleEntry> row(std::uint32_t from) const { return rows_[from]; }
  double probability(std::uint32_t from, std::uint32_t to) const;

  // Inverse-CDF sampling in ascending H order: returns the first H whose
  // cumulative probability exceeds u, u in [0,1).
  std::uint32_t sample(std::uint32_t from, double u) const;

  bool is_idle(std::uint32_t from) const;

 private:
  int k_;
  std::vector<RuleRow> rows_;
  std::vector<std::vector<double>> cdf_;
};

// Throws unless the rule passes validate_rows (always true for constructed
// rules; kept for the explicit check in tools and tests).
void validate(const Rule& rule);

// Built-in families.
Rule trivial_rule(int k);
Rule erdos_renyi_rule();
Rule triangle_removal_rule();
Rule removal_rule(const LabeledGraph& pattern);
Rule complementing_rule(int k);
Rule component_completion_rule(int k);
enum class StirringVariant { kFirm, kLoose };
Rule stirring_rule(int k, StirringVariant variant);
Rule extremist_rule(int k);
// dist[H] = probability that the replacement is H, independent of F.
Rule ignorant_rule(int k, std::span<const double> dist);
// Deterministic rule F -> map(F).
Rule deterministic_rule(int k, const std::function<LabeledGraph(const LabeledGraph&)>& map);

// E_J[e(J)] / C(k,2) for an ignorant replacement distribution.
double average_density(int k, std::span<const double> dist);

// c[F][ab] = sum_H R[F][H] (1{ab in H\F} - 1{ab in F\H}). The value is the
// same for (a,b) and (b,a), so it is stored per unordered pair position.
class PairCoefficients {
 public:
  explicit PairCoefficients(const Rule& rule);

  int order() const { return k_; }
  double at(std::uint32_t from, int a, int b) const {
    return values_[from * static_cast<std::size_t>(pairs_) + pair_position(k_, a, b)];
  }
  double at_pair(std::uint32_t from, int p) const {
    return values_[from * static_cast<std::size_t>(pairs_) + p];
  }
  // Drawn graphs with at least one non-zero coefficient.
  const std::vector<std::uint32_t>& active() const { return active_; }

 private:
  int k_;
  int pairs_;
  std::vector<double> values_;
  std::vector<std::uint32_t> active_;
};

// Delta_l, l = 0..C(k,2): expected edge-count change of one flip when the
// drawn graph is uniform over l-edge graphs.
std::vector<double> deltas(const Rule& rule);

bool is_trivial(const Rule& rule);
std::vector<std::uint32_t> idle_graphs(const Rule& rule);

// R[psi F][psi H] = R[F][H] for every vertex permutation psi.
bool is_symmetric(const Rule& rule);

// JSON rule file: {"k": int, "rows": [[F, [[H, p], ...]], ...]}.
std::string rule_to_json(const Rule& rule);
Rule rule_from_json(const std::string& text);
Rule read_rule_file(const std::string& path);
void write_rule_file(const Rule& rule, const std::string& path);

// Named built-ins: "er", "triangle-removal", "complementing:K",
// "component-completion:K", "stirring-firm:K", "stirring-loose:K",
// "extremist:K", "trivial:K", "removal:K:INDEX", "ignorant-uniform:K".
Rule builtin_rule(const std::string& name);

// The representative built-in rules exercised by the property suites.
std::vector<std::string> builtin_rule_names();

}  // namespace flip
