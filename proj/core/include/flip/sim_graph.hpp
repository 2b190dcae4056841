#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace flip {

// n-vertex simple graph with bitset adjacency rows and a map from vertices to
// the parts of a step graphon. Vertices are 0-based.
class SimGraph {
 public:
  SimGraph() = default;
  // All vertices in part 0 unless part_of is given.
  explicit SimGraph(int n);
  SimGraph(int n, std::vector<int> part_of);

  int vertex_count() const { return n_; }
  int part_count() const { return parts_; }
  int part_of(int v) const { return part_of_[v]; }
  const std::vector<int>& parts() const { return part_of_; }
  std::int64_t edge_count() const { return edges_; }

  bool has_edge(int u, int v) const {
    return (rows_[static_cast<std::size_t>(u) * words_ + (v >> 6)] >> (v & 63)) & 1u;
  }
  // Adjacency bitset of v (bit u of word u/64).
  std::span<const std::uint64_t> row(int v) const {
    return {rows_.data() + static_cast<std::size_t>(v) * words_, words_};
  }
  std::size_t row_words() const { return words_; }

  // Returns true if the pair changed state. Loops are rejected.
  bool set_edge(int u, int v, bool present);

  double edge_density() const;

  // Vertex counts per part.
  std::vector<std::int64_t> part_sizes() const;

  // Edge list "u v" (1-based, u<v), one pair per line.
  void write_edge_list(std::ostream& out) const;
  // Part sidecar "vertex part" (both 1-based), one vertex per line.
  void write_parts(std::ostream& out) const;
  static SimGraph read(std::istream& edges, std::istream& parts);

  friend bool operator==(const SimGraph&, const SimGraph&) = default;

 private:
  int n_ = 0;
  int parts_ = 1;
  std::size_t words_ = 0;
  std::int64_t edges_ = 0;
  std::vector<std::uint64_t> rows_;
  std::vector<int> part_of_;
};

}  // namespace flip
