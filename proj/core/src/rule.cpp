#include "flip/rule.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "flip/combinatorics.hpp"
#include "flip/error.hpp"

namespace flip {

namespace {

void check_dense_order(int k) {
  check_order(k);
  if (k > 5)
    throw UnsupportedOrder("dense rule builders support orders 2..5; order " +
                           std::to_string(k) + " rules must be supplied as a file");
}

std::vector<RuleRow> identity_rows(int k) {
  std::vector<RuleRow> rows(graph_count(k));
  for (std::uint32_t f = 0; f < rows.size(); ++f) rows[f] = {{f, 1.0}};
  return rows;
}

int parse_int(const std::string& s, const std::string& name) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("malformed integer '" + s + "' in rule name '" + name + "'");
  }
}

}  // namespace

void validate_rows(int k, const std::vector<RuleRow>& rows) {
  check_order(k);
  if (rows.size() != graph_count(k))
    throw ValidationError("rule of order " + std::to_string(k) + " needs " +
                          std::to_string(graph_count(k)) + " rows");
  double worst = 0.0;
  std::uint32_t worst_row = 0;
  for (std::uint32_t f = 0; f < rows.size(); ++f) {
    double sum = 0.0;
    for (std::size_t e = 0; e < rows[f].size(); ++e) {
      const auto& entry = rows[f][e];
      if (entry.target >= graph_count(k))
        throw ValidationError("row " + std::to_string(f) + ": target index " +
                              std::to_string(entry.target) + " out of range");
      if (!(entry.probability >= 0.0 && entry.probability <= 1.0 + kProbabilityTolerance))
        throw ValidationError("row " + std::to_string(f) + ": probability " +
                              std::to_string(entry.probability) + " outside [0,1]");
      if (e > 0 && rows[f][e - 1].target >= entry.target)
        throw ValidationError("row " + std::to_string(f) +
                              ": targets must be strictly increasing");
      sum += entry.probability;
    }
    const double residual = std::abs(sum - 1.0);
    if (residual > worst) {
      worst = residual;
      worst_row = f;
    }
  }
  if (worst > kProbabilityTolerance) {
    std::ostringstream msg;
    msg << "non-stochastic rule: row " << worst_row << " sums to 1 with residual "
        << worst;
    throw ValidationError(msg.str());
  }
}

Rule::Rule(int k, std::vector<RuleRow> rows) : k_(k), rows_(std::move(rows)) {
  check_order(k);
  if (rows_.size() != graph_count(k))
    throw ValidationError("rule of order " + std::to_string(k) + " needs " +
                          std::to_string(graph_count(k)) + " rows");
  for (std::uint32_t f = 0; f < rows_.size(); ++f) {
    auto& row = rows_[f];
    if (row.empty()) row = {{f, 1.0}};
  }
  validate_rows(k, rows_);
  cdf_.resize(rows_.size());
  for (std::uint32_t f = 0; f < rows_.size(); ++f) {
    auto& row = rows_[f];
    std::erase_if(row, [](const RuleEntry& e) { return e.probability == 0.0; });
    cdf_[f].reserve(row.size());
    double acc = 0.0;
    for (const auto& e : row) cdf_[f].push_back(acc += e.probability);
  }
}

Rule Rule::from_sparse(int k, const std::map<std::uint32_t, RuleRow>& rows) {
  check_order(k);
  std::vector<RuleRow> dense(graph_count(k));
  for (const auto& [from, row] : rows) {
    if (from >= graph_count(k))
      throw ValidationError("row index " + std::to_string(from) + " out of range");
    dense[from] = row;
  }
  return Rule(k, std::move(dense));
}

double Rule::probability(std::uint32_t from, std::uint32_t to) const {
  const auto& row = rows_[from];
  auto it = std::lower_bound(row.begin(), row.end(), to,
                             [](const RuleEntry& e, std::uint32_t t) { return e.target < t; });
  return (it != row.end() && it->target == to) ? it->probability : 0.0;
}

std::uint32_t Rule::sample(std::uint32_t from, double u) const {
  const auto& cdf = cdf_[from];
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
  if (idx >= cdf.size()) idx = cdf.size() - 1;
  return rows_[from][idx].target;
}

bool Rule::is_idle(std::uint32_t from) const {
  return probability(from, from) >= 1.0 - kProbabilityTolerance;
}

void validate(const Rule& rule) {
  std::vector<RuleRow> rows(rule.size());
  for (std::uint32_t f = 0; f < rule.size(); ++f) {
    auto r = rule.row(f);
    rows[f].assign(r.begin(), r.end());
  }
  validate_rows(rule.order(), rows);
}

Rule trivial_rule(int k) {
  check_order(k);
  return Rule(k, identity_rows(k));
}

Rule deterministic_rule(int k, const std::function<LabeledGraph(const LabeledGraph&)>& map) {
  check_order(k);
  std::vector<RuleRow> rows(graph_count(k));
  for (const auto& g : enumerate_graphs(k)) {
    const LabeledGraph h = map(g);
    if (h.order() != k) throw ValidationError("replacement graph has wrong order");
    rows[g.index()] = {{h.index(), 1.0}};
  }
  return Rule(k, std::move(rows));
}

Rule erdos_renyi_rule() {
  return Rule(2, {{{1, 1.0}}, {{1, 1.0}}});
}

Rule triangle_removal_rule() {
  return removal_rule(LabeledGraph::complete(3));
}

Rule removal_rule(const LabeledGraph& pattern) {
  const int k = pattern.order();
  check_dense_order(k);
  return deterministic_rule(k, [&](const LabeledGraph& g) {
    if (!pattern.is_subgraph_of(g)) return g;
    return LabeledGraph(k, g.index() & ~pattern.index());
  });
}

Rule complementing_rule(int k) {
  check_dense_order(k);
  return deterministic_rule(k, [](const LabeledGraph& g) { return complement(g); });
}

Rule component_completion_rule(int k) {
  check_dense_order(k);
  return deterministic_rule(k, [](const LabeledGraph& g) { return component_closure(g); });
}

Rule stirring_rule(int k, StirringVariant variant) {
  check_dense_order(k);
  const int pairs = pair_count(k);
  const auto graphs = enumerate_graphs(k);
  std::vector<RuleRow> rows(graphs.size());
  for (const auto& f : graphs) {
    const int m = edge_count(f);
    RuleRow& row = rows[f.index()];
    if (variant == StirringVariant::kFirm) {
      const double p = 1.0 / binomial(pairs, m);
      for (const auto& h : graphs)
        if (edge_count(h) == m) row.push_back({h.index(), p});
    } else {
      const double p = static_cast<double>(m) / pairs;
      for (const auto& h : graphs) {
        const int e = edge_count(h);
        const double prob = std::pow(p, e) * std::pow(1.0 - p, pairs - e);
        if (prob > 0.0) row.push_back({h.index(), prob});
      }
    }
  }
  return Rule(k, std::move(rows));
}

Rule extremist_rule(int k) {
  check_dense_order(k);
  if (k < 3) throw UnsupportedOrder("extremist rules need order >= 3");
  const int pairs = pair_count(k);
  return deterministic_rule(k, [k, pairs](const LabeledGraph& g) {
    const int twice = 2 * edge_count(g);
    if (twice > pairs) return LabeledGraph::complete(k);
    if (twice < pairs) return LabeledGraph::empty(k);
    return g;
  });
}

Rule ignorant_rule(int k, std::span<const double> dist) {
  check_dense_order(k);
  if (dist.size() != graph_count(k))
    throw ValidationError("ignorant distribution must have one entry per graph");
  const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
  if (std::abs(total - 1.0) > kProbabilityTolerance)
    throw ValidationError("ignorant distribution is not normalized");
  RuleRow row;
  for (std::uint32_t h = 0; h < dist.size(); ++h)
    if (dist[h] != 0.0) row.push_back({h, dist[h]});
  return Rule(k, std::vector<RuleRow>(graph_count(k), row));
}

double average_density(int k, std::span<const double> dist) {
  check_order(k);
  if (dist.size() != graph_count(k))
    throw ValidationError("ignorant distribution must have one entry per graph");
  double expected_edges = 0.0;
  for (std::uint32_t h = 0; h < dist.size(); ++h)
    expected_edges += dist[h] * edge_count(LabeledGraph(k, h));
  return expected_edges / pair_count(k);
}

PairCoefficients::PairCoefficients(const Rule& rule)
    : k_(rule.order()), pairs_(pair_count(rule.order())) {
  values_.assign(static_cast<std::size_t>(rule.size()) * pairs_, 0.0);
  for (std::uint32_t f = 0; f < rule.size(); ++f) {
    bool any = false;
    for (const auto& e : rule.row(f)) {
      if (e.target == f) continue;
      const std::uint32_t added = e.target & ~f;
      const std::uint32_t removed = f & ~e.target;
      for (int p = 0; p < pairs_; ++p) {
        double sign = 0.0;
        if ((added >> p) & 1u) sign = 1.0;
        if ((removed >> p) & 1u) sign = -1.0;
        if (sign != 0.0) {
          values_[f * static_cast<std::size_t>(pairs_) + p] += sign * e.probability;
          any = true;
        }
      }
    }
    if (any) active_.push_back(f);
  }
}

std::vector<double> deltas(const Rule& rule) {
  const int k = rule.order();
  const int pairs = pair_count(k);
  std::vector<double> sums(pairs + 1, 0.0);
  for (std::uint32_t f = 0; f < rule.size(); ++f) {
    const int ell = edge_count(LabeledGraph(k, f));
    for (const auto& e : rule.row(f))
      sums[ell] += e.probability * (edge_count(LabeledGraph(k, e.target)) - ell);
  }
  for (int ell = 0; ell <= pairs; ++ell) sums[ell] /= binomial(pairs, ell);
  return sums;
}

bool is_trivial(const Rule& rule) {
  for (std::uint32_t f = 0; f < rule.size(); ++f)
    if (!rule.is_idle(f)) return false;
  return true;
}

std::vector<std::uint32_t> idle_graphs(const Rule& rule) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t f = 0; f < rule.size(); ++f)
    if (rule.is_idle(f)) out.push_back(f);
  return out;
}

bool is_symmetric(const Rule& rule) {
  const int k = rule.order();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (std::uint32_t f = 0; f < rule.size(); ++f) {
      const std::uint32_t pf = permute(LabeledGraph(k, f), perm).index();
      for (const auto& e : rule.row(f)) {
        const std::uint32_t ph = permute(LabeledGraph(k, e.target), perm).index();
        if (std::abs(rule.probability(pf, ph) - e.probability) > kProbabilityTolerance)
          return false;
      }
      if (rule.row(f).size() != rule.row(pf).size()) return false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return true;
}

std::string rule_to_json(const Rule& rule) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::uint32_t f = 0; f < rule.size(); ++f) {
    auto row = rule.row(f);
    if (row.size() == 1 && row[0].target == f) continue;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : row) entries.push_back({e.target, e.probability});
    rows.push_back({f, std::move(entries)});
  }
  nlohmann::json doc = {{"k", rule.order()}, {"rows", std::move(rows)}};
  return doc.dump() + "\n";
}

Rule rule_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("rule file is not valid JSON: ") + e.what());
  }
  try {
    const int k = doc.at("k").get<int>();
    check_order(k);
    std::map<std::uint32_t, RuleRow> rows;
    for (const auto& item : doc.at("rows")) {
      const auto from = item.at(0).get<std::uint32_t>();
      if (rows.contains(from))
        throw ValidationError("row " + std::to_string(from) + " listed twice");
      RuleRow row;
      for (const auto& entry : item.at(1))
        row.push_back({entry.at(0).get<std::uint32_t>(), entry.at(1).get<double>()});
      std::sort(row.begin(), row.end(),
                [](const RuleEntry& a, const RuleEntry& b) { return a.target < b.target; });
      rows.emplace(from, std::move(row));
    }
    return Rule::from_sparse(k, rows);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed rule file: ") + e.what());
  }
}

Rule read_rule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open rule file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return rule_from_json(buffer.str());
}

void write_rule_file(const Rule& rule, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeFault("cannot write rule file " + path);
  out << rule_to_json(rule);
}

Rule builtin_rule(const std::string& name) {
  std::vector<std::string> parts;
  std::stringstream ss(name);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.empty()) throw ValidationError("empty rule name");
  const std::string& family = parts[0];
  auto order_arg = [&](std::size_t expected) {
    if (parts.size() != expected)
      throw ValidationError("rule '" + name + "' has the wrong number of parameters");
    return parse_int(parts[1], name);
  };
  if (family == "er" && parts.size() == 1) return erdos_renyi_rule();
  if (family == "triangle-removal" && parts.size() == 1) return triangle_removal_rule();
  if (family == "trivial") return trivial_rule(order_arg(2));
  if (family == "complementing") return complementing_rule(order_arg(2));
  if (family == "component-completion") return component_completion_rule(order_arg(2));
  if (family == "stirring-firm") return stirring_rule(order_arg(2), StirringVariant::kFirm);
  if (family == "stirring-loose") return stirring_rule(order_arg(2), StirringVariant::kLoose);
  if (family == "extremist") return extremist_rule(order_arg(2));
  if (family == "removal") {
    const int k = order_arg(3);
    const int index = parse_int(parts[2], name);
    if (index < 0) throw ValidationError("negative graph index in '" + name + "'");
    return removal_rule(LabeledGraph(k, static_cast<std::uint32_t>(index)));
  }
  if (family == "ignorant-uniform") {
    const int k = order_arg(2);
    check_dense_order(k);
    std::vector<double> dist(graph_count(k), 1.0 / graph_count(k));
    return ignorant_rule(k, dist);
  }
  throw ValidationError("unknown rule '" + name + "'");
}

std::vector<std::string> builtin_rule_names() {
  return {"er",
          "triangle-removal",
          "removal:4:45",  // 4-cycle removal
          "complementing:3",
          "complementing:4",
          "component-completion:3",
          "component-completion:4",
          "stirring-firm:3",
          "stirring-loose:3",
          "stirring-firm:4",
          "stirring-loose:4",
          "extremist:3",
          "extremist:4",
          "extremist:5",
          "ignorant-uniform:3"};
}

}  // namespace flip
