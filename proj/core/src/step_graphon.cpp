#include "flip/step_graphon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "flip/error.hpp"

namespace flip {

namespace {

void check_masses(const std::vector<double>& masses) {
  if (masses.empty()) throw ValidationError("a step kernel needs at least one part");
  double total = 0.0;
  for (double mu : masses) {
    if (!(mu > 0.0)) throw ValidationError("part masses must be positive");
    total += mu;
  }
  if (std::abs(total - 1.0) > kMassTolerance)
    throw ValidationError("part masses must sum to 1");
}

void check_band(const StepKernel& K) {
  for (double v : K.values())
    if (!(v >= -kGraphonBand && v <= 1.0 + kGraphonBand))
      throw ValidationError("graphon values must lie in [0,1]");
}

double power_guard(int m, int exponent) {
  return std::pow(static_cast<double>(m), exponent);
}

// Calls visit(assignment, weight) for every map [count] -> [m], where weight
// is the product of the part masses. pinned[v] >= 0 fixes vertex v and
// contributes no mass factor.
template <typename Visit>
void for_each_assignment(const StepKernel& W, std::span<const int> pinned, Visit&& visit) {
  const int m = W.part_count();
  const int count = static_cast<int>(pinned.size());
  std::vector<int> free;
  for (int v = 0; v < count; ++v)
    if (pinned[v] < 0) free.push_back(v);
  if (power_guard(m, static_cast<int>(free.size())) > kAssignmentGuard)
    throw GuardExceeded("part-assignment enumeration exceeds 1e8 terms");
  std::vector<int> phi(pinned.begin(), pinned.end());
  for (int v : free) phi[v] = 0;
  while (true) {
    double weight = 1.0;
    for (int v : free) weight *= W.mass(phi[v]);
    visit(std::span<const int>(phi), weight);
    std::size_t pos = 0;
    while (pos < free.size()) {
      int& slot = phi[free[pos]];
      if (++slot < m) break;
      slot = 0;
      ++pos;
    }
    if (pos == free.size()) break;
  }
}

template <bool Induced>
double pattern_weight(const LabeledGraph& F, std::span<const int> phi, const StepKernel& W) {
  const int k = F.order();
  double w = 1.0;
  int p = 0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b, ++p) {
      const double v = W.value(phi[a], phi[b]);
      if (F.has_pair(p))
        w *= v;
      else if constexpr (Induced)
        w *= 1.0 - v;
    }
  return w;
}

template <bool Induced>
double unrooted(const LabeledGraph& F, const StepKernel& W) {
  std::vector<int> pinned(F.order(), -1);
  double total = 0.0;
  for_each_assignment(W, pinned, [&](std::span<const int> phi, double weight) {
    total += weight * pattern_weight<Induced>(F, phi, W);
  });
  return total;
}

template <bool Induced>
double rooted(const LabeledGraph& F, int a, int b, int i, int j, const StepKernel& W) {
  const int k = F.order();
  if (a == b || a < 0 || b < 0 || a >= k || b >= k)
    throw ValidationError("roots must be two distinct vertices of F");
  if (i < 0 || j < 0 || i >= W.part_count() || j >= W.part_count())
    throw ValidationError("root part out of range");
  std::vector<int> pinned(k, -1);
  pinned[a] = i;
  pinned[b] = j;
  double total = 0.0;
  for_each_assignment(W, pinned, [&](std::span<const int> phi, double weight) {
    total += weight * pattern_weight<Induced>(F, phi, W);
  });
  return total;
}

std::vector<double> weighted_values(const StepKernel& K) {
  const int m = K.part_count();
  std::vector<double> w(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) w[i * m + j] = K.mass(i) * K.mass(j) * K.value(i, j);
  return w;
}

double cut_value(const std::vector<double>& w, int m, std::uint32_t rows, std::uint32_t cols) {
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    if (!((rows >> i) & 1u)) continue;
    for (int j = 0; j < m; ++j)
      if ((cols >> j) & 1u) total += w[i * m + j];
  }
  return total;
}

std::vector<int> mask_members(std::uint32_t mask, int m) {
  std::vector<int> out;
  for (int i = 0; i < m; ++i)
    if ((mask >> i) & 1u) out.push_back(i);
  return out;
}

int sample_part(const StepKernel& W, RandomStream& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (int i = 0; i + 1 < W.part_count(); ++i) {
    acc += W.mass(i);
    if (u < acc) return i;
  }
  return W.part_count() - 1;
}

SimGraph sample_edges(std::vector<int> part_of, const StepGraphon& W, RandomStream& rng) {
  const int n = static_cast<int>(part_of.size());
  SimGraph g(n, std::move(part_of));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(W.value(g.part_of(u), g.part_of(v)))) g.set_edge(u, v, true);
  return g;
}

}  // namespace

StepKernel::StepKernel(std::vector<double> masses, std::vector<double> values)
    : m_(static_cast<int>(masses.size())), masses_(std::move(masses)), values_(std::move(values)) {
  check_masses(masses_);
  if (values_.size() != static_cast<std::size_t>(m_) * m_)
    throw ValidationError("value matrix must be m x m");
  for (int i = 0; i < m_; ++i)
    for (int j = i + 1; j < m_; ++j) {
      double& vij = values_[i * m_ + j];
      double& vji = values_[j * m_ + i];
      if (!std::isfinite(vij) || !std::isfinite(vji))
        throw ValidationError("kernel values must be finite");
      if (std::abs(vij - vji) > 1e-12) throw ValidationError("kernel values must be symmetric");
      vji = vij;
    }
  for (int i = 0; i < m_; ++i)
    if (!std::isfinite(values_[i * m_ + i])) throw ValidationError("kernel values must be finite");
}

bool StepKernel::same_masses(const StepKernel& other) const {
  if (m_ != other.m_) return false;
  for (int i = 0; i < m_; ++i)
    if (std::abs(masses_[i] - other.masses_[i]) > kMassTolerance) return false;
  return true;
}

StepGraphon::StepGraphon(std::vector<double> masses, std::vector<double> values)
    : StepKernel(std::move(masses), std::move(values)) {
  check_band(*this);
}

StepGraphon::StepGraphon(const StepKernel& kernel) : StepKernel(kernel) { check_band(*this); }

StepGraphon constant_graphon(double d) { return StepGraphon({1.0}, {d}); }

StepGraphon two_block(double mu, double x1, double x2, double y) {
  if (!(mu > 0.0 && mu < 1.0)) throw ValidationError("two_block mass must lie in (0,1)");
  return StepGraphon({mu, 1.0 - mu}, {x1, y, y, x2});
}

StepGraphon symmetric_two_block(double x, double y) { return two_block(0.5, x, x, y); }

double density(const LabeledGraph& F, const StepKernel& W) { return unrooted<false>(F, W); }

double induced_density(const LabeledGraph& F, const StepKernel& W) {
  return unrooted<true>(F, W);
}

double rooted_density(const LabeledGraph& F, int a, int b, int i, int j, const StepKernel& W) {
  return rooted<false>(F, a, b, i, j, W);
}

double rooted_induced_density(const LabeledGraph& F, int a, int b, int i, int j,
                              const StepKernel& W) {
  return rooted<true>(F, a, b, i, j, W);
}

CutNormResult cut_norm_exact(const StepKernel& K) {
  const int m = K.part_count();
  if (m > kCutNormExactMaxParts)
    throw GuardExceeded("exact cut norm supports at most 14 parts; use cut_norm_lower_bound");
  const auto w = weighted_values(K);
  double best = 0.0;
  std::uint32_t best_rows = 0, best_cols = 0;
  std::vector<double> column(m);
  // For fixed S the optimal T collects the columns of one sign.
  for (std::uint32_t rows = 1; rows < (1u << m); ++rows) {
    std::fill(column.begin(), column.end(), 0.0);
    for (int i = 0; i < m; ++i)
      if ((rows >> i) & 1u)
        for (int j = 0; j < m; ++j) column[j] += w[i * m + j];
    std::uint32_t pos = 0, neg = 0;
    for (int j = 0; j < m; ++j) {
      if (column[j] > 0.0) pos |= 1u << j;
      if (column[j] < 0.0) neg |= 1u << j;
    }
    for (std::uint32_t cols : {pos, neg}) {
      if (cols == 0) continue;
      const double v = std::abs(cut_value(w, m, rows, cols));
      if (v > best) {
        best = v;
        best_rows = rows;
        best_cols = cols;
      }
    }
  }
  return {best, mask_members(best_rows, m), mask_members(best_cols, m)};
}

CutNormResult cut_norm_lower_bound(const StepKernel& K, int restarts, std::uint64_t seed) {
  const int m = K.part_count();
  if (m > 32) throw GuardExceeded("cut norm search supports at most 32 parts");
  const auto w = weighted_values(K);
  RandomStream rng(seed, StreamTag::kCutNormSearch);
  double best = 0.0;
  std::uint32_t best_rows = 0, best_cols = 0;
  const std::uint32_t full = m == 32 ? ~0u : ((1u << m) - 1);
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    std::uint32_t rows = static_cast<std::uint32_t>(rng.next_u64()) & full;
    std::uint32_t cols = static_cast<std::uint32_t>(rng.next_u64()) & full;
    double current = cut_value(w, m, rows, cols);
    bool improved = true;
    while (improved) {
      improved = false;
      for (int e = 0; e < 2 * m; ++e) {
        const bool is_row = e < m;
        const int idx = is_row ? e : e - m;
        double delta = 0.0;
        if (is_row) {
          for (int j = 0; j < m; ++j)
            if ((cols >> j) & 1u) delta += w[idx * m + j];
          if ((rows >> idx) & 1u) delta = -delta;
        } else {
          for (int i = 0; i < m; ++i)
            if ((rows >> i) & 1u) delta += w[i * m + idx];
          if ((cols >> idx) & 1u) delta = -delta;
        }
        const double candidate = current + delta;
        if (std::abs(candidate) > std::abs(current) + 1e-15) {
          if (is_row)
            rows ^= 1u << idx;
          else
            cols ^= 1u << idx;
          current = cut_value(w, m, rows, cols);
          improved = true;
        }
      }
    }
    const double v = std::abs(current);
    if (v > best) {
      best = v;
      best_rows = rows;
      best_cols = cols;
    }
  }
  return {best, mask_members(best_rows, m), mask_members(best_cols, m)};
}

StepKernel kernel_sub(const StepKernel& U, const StepKernel& W) {
  if (!U.same_masses(W)) throw ValidationError("kernels have different part masses");
  std::vector<double> diff(U.values().begin(), U.values().end());
  for (std::size_t e = 0; e < diff.size(); ++e) diff[e] -= W.values()[e];
  return StepKernel(std::vector<double>(U.masses().begin(), U.masses().end()), std::move(diff));
}

double linf_norm(const StepKernel& K) {
  double out = 0.0;
  for (double v : K.values()) out = std::max(out, std::abs(v));
  return out;
}

double linf_dist(const StepKernel& U, const StepKernel& W) {
  return linf_norm(kernel_sub(U, W));
}

double l1_dist(const StepKernel& U, const StepKernel& W) {
  const StepKernel d = kernel_sub(U, W);
  const int m = d.part_count();
  double total = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) total += d.mass(i) * d.mass(j) * std::abs(d.value(i, j));
  return total;
}

double edge_density(const StepKernel& W) {
  const int m = W.part_count();
  double total = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) total += W.mass(i) * W.mass(j) * W.value(i, j);
  return total;
}

double cut_distance_perm(const StepKernel& U, const StepKernel& W) {
  const int m = U.part_count();
  if (W.part_count() != m) throw ValidationError("kernels have different part counts");
  if (m > 8) throw GuardExceeded("permutation cut distance supports at most 8 parts");
  std::vector<double> mu(U.masses().begin(), U.masses().end());
  std::vector<double> nu(W.masses().begin(), W.masses().end());
  std::sort(mu.begin(), mu.end());
  std::sort(nu.begin(), nu.end());
  for (int i = 0; i < m; ++i)
    if (std::abs(mu[i] - nu[i]) > kMassTolerance)
      throw ValidationError("kernels have different mass multisets");
  std::vector<int> sigma(m);
  std::iota(sigma.begin(), sigma.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> relabeled(static_cast<std::size_t>(m) * m);
  do {
    bool ok = true;
    for (int i = 0; i < m && ok; ++i)
      ok = std::abs(U.mass(i) - W.mass(sigma[i])) <= kMassTolerance;
    if (!ok) continue;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) relabeled[i * m + j] = W.value(sigma[i], sigma[j]);
    const StepKernel moved(std::vector<double>(U.masses().begin(), U.masses().end()), relabeled);
    best = std::min(best, cut_norm_exact(kernel_sub(U, moved)).value);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return best;
}

SimGraph sample_graph(int n, const StepGraphon& W, RandomStream& rng) {
  if (n < 1) throw ValidationError("sample_graph needs n >= 1");
  std::vector<int> part_of(n);
  for (int v = 0; v < n; ++v) part_of[v] = sample_part(W, rng);
  return sample_edges(std::move(part_of), W, rng);
}

SimGraph sample_graph_stratified(int n, const StepGraphon& W, RandomStream& rng) {
  const int m = W.part_count();
  if (n < m) throw ValidationError("stratified sampling needs at least one vertex per part");
  std::vector<int> sizes(m);
  std::vector<std::pair<double, int>> remainders;
  int assigned = 0;
  for (int i = 0; i < m; ++i) {
    const double exact = W.mass(i) * n;
    sizes[i] = static_cast<int>(std::floor(exact));
    assigned += sizes[i];
    remainders.emplace_back(exact - sizes[i], i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int r = 0; assigned < n; ++r, ++assigned) ++sizes[remainders[r % m].second];
  std::vector<int> part_of;
  part_of.reserve(n);
  for (int i = 0; i < m; ++i) part_of.insert(part_of.end(), sizes[i], i);
  for (int v = n - 1; v > 0; --v)
    std::swap(part_of[v], part_of[rng.below(static_cast<std::uint64_t>(v) + 1)]);
  for (int i = 0; i < m; ++i)
    if (sizes[i] == 0) throw ValidationError("a part received no vertices; increase n");
  return sample_edges(std::move(part_of), W, rng);
}

std::vector<std::int64_t> block_edge_counts(const SimGraph& G) {
  const int m = G.part_count();
  const int n = G.vertex_count();
  std::vector<std::int64_t> counts(static_cast<std::size_t>(m) * m, 0);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (G.has_edge(u, v)) {
        const int pu = G.part_of(u), pv = G.part_of(v);
        ++counts[pu * m + pv];
        ++counts[pv * m + pu];
      }
  return counts;
}

StepGraphon stepped_from_counts(std::span<const std::int64_t> part_sizes,
                                std::span<const std::int64_t> counts) {
  const int m = static_cast<int>(part_sizes.size());
  std::int64_t n = 0;
  for (auto s : part_sizes) {
    if (s <= 0) throw ValidationError("stepped graphon needs every part non-empty");
    n += s;
  }
  std::vector<double> masses(m), values(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i) masses[i] = static_cast<double>(part_sizes[i]) / static_cast<double>(n);
  // Renormalize so the masses sum to 1 to machine precision.
  const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  for (auto& mu : masses) mu /= total;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      values[i * m + j] = static_cast<double>(counts[i * m + j]) /
                          (static_cast<double>(part_sizes[i]) * static_cast<double>(part_sizes[j]));
  return StepGraphon(std::move(masses), std::move(values));
}

StepGraphon stepped(const SimGraph& G) {
  const auto sizes = G.part_sizes();
  const auto counts = block_edge_counts(G);
  return stepped_from_counts(sizes, counts);
}

std::string graphon_to_json(const StepKernel& W) {
  const int m = W.part_count();
  nlohmann::json values = nlohmann::json::array();
  for (int i = 0; i < m; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m; ++j) row.push_back(W.value(i, j));
    values.push_back(std::move(row));
  }
  nlohmann::json doc = {{"masses", std::vector<double>(W.masses().begin(), W.masses().end())},
                        {"values", std::move(values)}};
  return doc.dump() + "\n";
}

StepGraphon graphon_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    auto masses = doc.at("masses").get<std::vector<double>>();
    const auto rows = doc.at("values").get<std::vector<std::vector<double>>>();
    std::vector<double> values;
    for (const auto& row : rows) {
      if (row.size() != masses.size()) throw ValidationError("graphon value matrix is not m x m");
      values.insert(values.end(), row.begin(), row.end());
    }
    if (rows.size() != masses.size()) throw ValidationError("graphon value matrix is not m x m");
    return StepGraphon(std::move(masses), std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed graphon file: ") + e.what());
  }
}

StepGraphon read_graphon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open graphon file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return graphon_from_json(buffer.str());
}

void write_graphon_file(const StepKernel& W, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeFault("cannot write graphon file " + path);
  out << graphon_to_json(W);
}

}  // namespace flip
