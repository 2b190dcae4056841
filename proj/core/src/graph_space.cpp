#include "flip/graph_space.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "flip/error.hpp"
#include "flip/sim_graph.hpp"

namespace flip {

namespace {

int find_root(std::vector<int>& parent, int v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

std::vector<int> component_labels(const LabeledGraph& g) {
  const int k = g.order();
  std::vector<int> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  for (int p = 0; p < pair_count(k); ++p) {
    if (!g.has_pair(p)) continue;
    auto [a, b] = pair_endpoints(k, p);
    int ra = find_root(parent, a);
    int rb = find_root(parent, b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  for (int v = 0; v < k; ++v) parent[v] = find_root(parent, v);
  return parent;
}

}  // namespace

std::pair<int, int> pair_endpoints(int k, int p) {
  int a = 0;
  while (p >= k - 1 - a) {
    p -= k - 1 - a;
    ++a;
  }
  return {a, a + 1 + p};
}

void check_order(int k) {
  if (k < kMinOrder || k > kMaxOrder)
    throw UnsupportedOrder("graph order " + std::to_string(k) +
                           " outside supported range [2,6]");
}

LabeledGraph::LabeledGraph(int k, std::uint32_t index) : k_(k), bits_(index) {
  check_order(k);
  if (index >= graph_count(k))
    throw ValidationError("graph index " + std::to_string(index) +
                          " out of range for order " + std::to_string(k));
}

LabeledGraph LabeledGraph::from_edges(
    int k, std::span<const std::pair<int, int>> edges) {
  check_order(k);
  std::uint32_t bits = 0;
  for (auto [a, b] : edges) {
    if (a == b || a < 0 || b < 0 || a >= k || b >= k)
      throw ValidationError("invalid edge for order " + std::to_string(k));
    bits |= std::uint32_t{1} << pair_position(k, a, b);
  }
  return {k, bits};
}

LabeledGraph LabeledGraph::with_edge(int a, int b, bool present) const {
  const std::uint32_t bit = std::uint32_t{1} << pair_position(k_, a, b);
  return {k_, present ? (bits_ | bit) : (bits_ & ~bit)};
}

std::vector<LabeledGraph> enumerate_graphs(int k) {
  check_order(k);
  const std::uint32_t count = graph_count(k);
  std::vector<LabeledGraph> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) out.emplace_back(k, i);
  return out;
}

int edge_count(const LabeledGraph& g) { return std::popcount(g.index()); }

LabeledGraph complement(const LabeledGraph& g) {
  const int k = g.order();
  return {k, ~g.index() & (graph_count(k) - 1)};
}

LabeledGraph component_closure(const LabeledGraph& g) {
  const int k = g.order();
  const auto label = component_labels(g);
  std::uint32_t bits = 0;
  for (int p = 0; p < pair_count(k); ++p) {
    auto [a, b] = pair_endpoints(k, p);
    if (label[a] == label[b]) bits |= std::uint32_t{1} << p;
  }
  return {k, bits};
}

int component_count(const LabeledGraph& g) {
  const auto label = component_labels(g);
  int count = 0;
  for (int v = 0; v < g.order(); ++v)
    if (label[v] == v) ++count;
  return count;
}

LabeledGraph permute(const LabeledGraph& g, std::span<const int> perm) {
  const int k = g.order();
  if (static_cast<int>(perm.size()) != k)
    throw ValidationError("permutation length does not match graph order");
  std::vector<bool> seen(k, false);
  for (int v : perm) {
    if (v < 0 || v >= k || seen[v])
      throw ValidationError("permutation is not a bijection");
    seen[v] = true;
  }
  std::uint32_t bits = 0;
  for (int p = 0; p < pair_count(k); ++p) {
    if (!g.has_pair(p)) continue;
    auto [a, b] = pair_endpoints(k, p);
    bits |= std::uint32_t{1} << pair_position(k, perm[a], perm[b]);
  }
  return {k, bits};
}

LabeledGraph induced_pattern(const SimGraph& G, std::span<const int> tuple) {
  const int k = static_cast<int>(tuple.size());
  check_order(k);
  const int n = G.vertex_count();
  for (int a = 0; a < k; ++a) {
    if (tuple[a] < 0 || tuple[a] >= n)
      throw ValidationError("tuple vertex out of range");
    for (int b = 0; b < a; ++b)
      if (tuple[a] == tuple[b])
        throw ValidationError("tuple vertices must be distinct");
  }
  std::uint32_t bits = 0;
  int p = 0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b, ++p)
      if (G.has_edge(tuple[a], tuple[b])) bits |= std::uint32_t{1} << p;
  return {k, bits};
}

}  // namespace flip
