#include "flip/sim_graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "flip/error.hpp"

namespace flip {

SimGraph::SimGraph(int n) : SimGraph(n, std::vector<int>(std::max(n, 0), 0)) {}

SimGraph::SimGraph(int n, std::vector<int> part_of)
    : n_(n), part_of_(std::move(part_of)) {
  if (n < 1) throw ValidationError("graph must have at least one vertex");
  if (static_cast<int>(part_of_.size()) != n)
    throw ValidationError("part map size does not match vertex count");
  int max_part = 0;
  for (int p : part_of_) {
    if (p < 0) throw ValidationError("negative part index");
    max_part = std::max(max_part, p);
  }
  parts_ = max_part + 1;
  words_ = (static_cast<std::size_t>(n) + 63) / 64;
  rows_.assign(words_ * static_cast<std::size_t>(n), 0);
}

bool SimGraph::set_edge(int u, int v, bool present) {
  if (u == v) throw ValidationError("self-loops are not allowed");
  if (has_edge(u, v) == present) return false;
  rows_[static_cast<std::size_t>(u) * words_ + (v >> 6)] ^= std::uint64_t{1} << (v & 63);
  rows_[static_cast<std::size_t>(v) * words_ + (u >> 6)] ^= std::uint64_t{1} << (u & 63);
  edges_ += present ? 1 : -1;
  return true;
}

double SimGraph::edge_density() const {
  if (n_ < 2) return 0.0;
  return static_cast<double>(edges_) /
         (0.5 * static_cast<double>(n_) * static_cast<double>(n_ - 1));
}

std::vector<std::int64_t> SimGraph::part_sizes() const {
  std::vector<std::int64_t> sizes(parts_, 0);
  for (int p : part_of_) ++sizes[p];
  return sizes;
}

void SimGraph::write_edge_list(std::ostream& out) const {
  for (int u = 0; u < n_; ++u)
    for (int v = u + 1; v < n_; ++v)
      if (has_edge(u, v)) out << (u + 1) << ' ' << (v + 1) << '\n';
}

void SimGraph::write_parts(std::ostream& out) const {
  for (int v = 0; v < n_; ++v) out << (v + 1) << ' ' << (part_of_[v] + 1) << '\n';
}

SimGraph SimGraph::read(std::istream& edges, std::istream& parts) {
  std::vector<std::pair<int, int>> assignment;
  std::string line;
  int n = 0;
  while (std::getline(parts, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int v = 0, p = 0;
    if (!(ls >> v >> p) || v < 1 || p < 1)
      throw ValidationError("malformed part line: " + line);
    assignment.emplace_back(v - 1, p - 1);
    n = std::max(n, v);
  }
  std::vector<int> part_of(n, -1);
  for (auto [v, p] : assignment) part_of[v] = p;
  if (std::find(part_of.begin(), part_of.end(), -1) != part_of.end())
    throw ValidationError("part sidecar does not cover every vertex");
  SimGraph g(n, std::move(part_of));
  while (std::getline(edges, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int u = 0, v = 0;
    if (!(ls >> u >> v) || u < 1 || v < 1 || u > n || v > n || u == v)
      throw ValidationError("malformed edge line: " + line);
    g.set_edge(u - 1, v - 1, true);
  }
  return g;
}

}  // namespace flip
