#pragma once

// Labeled graphs on vertex set {0,...,k-1}, 2 <= k <= 6, encoded as a bitset
// over vertex pairs. Pair (a,b), a<b, occupies bit position
//   p(a,b) = a*(2k-a-1)/2 + (b-a-1),
// i.e. the lexicographic order (0,1),(0,2),...,(0,k-1),(1,2),...,(k-2,k-1).
// The integer value of the bitset is the canonical index of the graph.
// The API is 0-based; the serialized index coincides with the 1-based
// lexicographic convention used in rule files.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace flip {

class SimGraph;

inline constexpr int kMinOrder = 2;
inline constexpr int kMaxOrder = 6;

constexpr int pair_count(int k) { return k * (k - 1) / 2; }

constexpr int pair_position(int k, int a, int b) {
  if (a > b) std::swap(a, b);
  return a * (2 * k - a - 1) / 2 + (b - a - 1);
}

// Number of labeled graphs on k vertices, 2^C(k,2).
constexpr std::uint32_t graph_count(int k) {
  return std::uint32_t{1} << pair_count(k);
}

// Endpoints of the pair at position p; a < b.
std::pair<int, int> pair_endpoints(int k, int p);

// Throws UnsupportedOrder unless kMinOrder <= k <= kMaxOrder.
void check_order(int k);

class LabeledGraph {
 public:
  LabeledGraph() = default;
  // Throws UnsupportedOrder / ValidationError on a bad order or an index
  // with bits beyond C(k,2).
  LabeledGraph(int k, std::uint32_t index);

  static LabeledGraph empty(int k) { return {k, 0}; }
  static LabeledGraph complete(int k) { return {k, graph_count(k) - 1}; }
  static LabeledGraph from_edges(int k,
                                 std::span<const std::pair<int, int>> edges);

  int order() const { return k_; }
  std::uint32_t index() const { return bits_; }

  bool has_edge(int a, int b) const {
    return (bits_ >> pair_position(k_, a, b)) & 1u;
  }
  bool has_pair(int p) const { return (bits_ >> p) & 1u; }

  LabeledGraph with_edge(int a, int b, bool present) const;

  // E(this) is a subset of E(other).
  bool is_subgraph_of(const LabeledGraph& other) const {
    return k_ == other.k_ && (bits_ & ~other.bits_) == 0;
  }

  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;

 private:
  int k_ = kMinOrder;
  std::uint32_t bits_ = 0;
};

// All 2^C(k,2) graphs in canonical-index order.
std::vector<LabeledGraph> enumerate_graphs(int k);

int edge_count(const LabeledGraph& g);
LabeledGraph complement(const LabeledGraph& g);

// Disjoint union of cliques with the same components as g.
LabeledGraph component_closure(const LabeledGraph& g);
int component_count(const LabeledGraph& g);

// Edge ab becomes edge perm[a]perm[b]. perm must be a bijection on
// {0,...,k-1}; otherwise ValidationError.
LabeledGraph permute(const LabeledGraph& g, std::span<const int> perm);

// Drawn graph of an ordered tuple of distinct vertices of G: pair (a,b) is an
// edge iff tuple[a]tuple[b] is an edge of G. Duplicate or out-of-range
// vertices throw ValidationError.
LabeledGraph induced_pattern(const SimGraph& G, std::span<const int> tuple);

}  // namespace flip
