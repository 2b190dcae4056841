#include "flip/velocity.hpp"

#include <cmath>
#include <numeric>

#include "flip/combinatorics.hpp"
#include "flip/error.hpp"

namespace flip {

namespace {

// Permutation sending 0 -> a, 1 -> b and the remaining vertices, in
// increasing order, to the remaining labels.
std::vector<int> root_permutation(int k, int a, int b) {
  std::vector<int> perm{a, b};
  for (int v = 0; v < k; ++v)
    if (v != a && v != b) perm.push_back(v);
  return perm;
}

}  // namespace

VelocityOperator::VelocityOperator(const Rule& rule) : k_(rule.order()) {
  const PairCoefficients coeffs(rule);
  root_coefficients_.assign(rule.size(), 0.0);
  for (int a = 0; a < k_; ++a)
    for (int b = 0; b < k_; ++b) {
      if (a == b) continue;
      const auto perm = root_permutation(k_, a, b);
      const int p = pair_position(k_, a, b);
      for (std::uint32_t g = 0; g < rule.size(); ++g) {
        const std::uint32_t f = permute(LabeledGraph(k_, g), perm).index();
        root_coefficients_[g] += coeffs.at_pair(f, p);
      }
    }
  vanishes_ = coeffs.active().empty();
}

double VelocityOperator::cell(const StepKernel& W, int i, int j) const {
  const int m = W.part_count();
  const int others = k_ - 2;
  const int pairs = pair_count(k_);
  if (std::pow(static_cast<double>(m), others) * std::pow(2.0, pairs) * k_ * k_ > kVelocityGuard)
    throw GuardExceeded("velocity evaluation exceeds the per-cell work guard");
  if (vanishes_) return 0.0;

  std::vector<int> phi(k_, 0);
  phi[0] = i;
  phi[1] = j;
  std::vector<double> prob(pairs);
  std::vector<double> buffer(root_coefficients_.size());
  double total = 0.0;
  while (true) {
    double weight = 1.0;
    for (int v = 2; v < k_; ++v) weight *= W.mass(phi[v]);
    int p = 0;
    for (int a = 0; a < k_; ++a)
      for (int b = a + 1; b < k_; ++b, ++p) prob[p] = W.value(phi[a], phi[b]);
    std::copy(root_coefficients_.begin(), root_coefficients_.end(), buffer.begin());
    // Contract the multilinear form one pair variable at a time, highest bit
    // first: buffer[x] <- (1-p) buffer[x] + p buffer[x + half].
    for (int e = pairs - 1; e >= 0; --e) {
      const std::size_t half = std::size_t{1} << e;
      const double q = prob[e];
      for (std::size_t x = 0; x < half; ++x)
        buffer[x] = (1.0 - q) * buffer[x] + q * buffer[x + half];
    }
    total += weight * buffer[0];

    int v = 2;
    while (v < k_) {
      if (++phi[v] < m) break;
      phi[v] = 0;
      ++v;
    }
    if (v >= k_) break;
  }
  return total;
}

StepKernel VelocityOperator::operator()(const StepKernel& W) const {
  const int m = W.part_count();
  std::vector<double> values(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const double v = cell(W, i, j);
      values[i * m + j] = v;
      values[j * m + i] = v;
    }
  return StepKernel(std::vector<double>(W.masses().begin(), W.masses().end()), std::move(values));
}

StepKernel velocity(const Rule& rule, const StepKernel& W) { return VelocityOperator(rule)(W); }

MonteCarloEstimate velocity_monte_carlo(const Rule& rule, const StepGraphon& W, int i, int j,
                                        std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) throw ValidationError("Monte-Carlo velocity needs at least one sample");
  const int m = W.part_count();
  if (i < 0 || j < 0 || i >= m || j >= m) throw ValidationError("cell out of range");
  const int k = rule.order();
  std::vector<double> cumulative(m);
  std::partial_sum(W.masses().begin(), W.masses().end(), cumulative.begin());

  MonteCarloEstimate out;
  out.samples = samples;
  double variance_sum = 0.0;
  std::vector<int> phi(k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      const std::uint32_t substream =
          (static_cast<std::uint32_t>(i) << 19) ^ (static_cast<std::uint32_t>(j) << 6) ^
          static_cast<std::uint32_t>(a << 3 | b);
      RandomStream rng(seed, StreamTag::kVelocityMonteCarlo, substream);
      const int p_ab = pair_position(k, a, b);
      double sum = 0.0, sum_sq = 0.0;
      for (std::int64_t s = 0; s < samples; ++s) {
        for (int v = 0; v < k; ++v) {
          if (v == a) {
            phi[v] = i;
          } else if (v == b) {
            phi[v] = j;
          } else {
            const double u = rng.uniform();
            int part = 0;
            while (part + 1 < m && u >= cumulative[part]) ++part;
            phi[v] = part;
          }
        }
        std::uint32_t drawn = 0;
        int p = 0;
        for (int x = 0; x < k; ++x)
          for (int y = x + 1; y < k; ++y, ++p)
            if (rng.bernoulli(W.value(phi[x], phi[y]))) drawn |= std::uint32_t{1} << p;
        const std::uint32_t replaced = rule.sample(drawn, rng.uniform());
        // Centered on 1{ab in F}, whose mean is W(i,j).
        const double x = static_cast<double>((replaced >> p_ab) & 1u) -
                         static_cast<double>((drawn >> p_ab) & 1u);
        sum += x;
        sum_sq += x * x;
      }
      const double mean = sum / static_cast<double>(samples);
      out.mean += mean;
      if (samples > 1) {
        const double var = (sum_sq - sum * mean) / static_cast<double>(samples - 1);
        variance_sum += std::max(var, 0.0) / static_cast<double>(samples);
      }
    }
  out.std_error = std::sqrt(variance_sum);
  return out;
}

VelocityPoly velocity_poly(const Rule& rule) {
  const auto delta = deltas(rule);
  const int n = static_cast<int>(delta.size()) - 1;
  VelocityPoly poly;
  poly.bernstein.resize(n + 1);
  for (int l = 0; l <= n; ++l) poly.bernstein[l] = 2.0 * delta[l];
  poly.monomial.assign(n + 1, 0.0);
  // C(n,l) d^l (1-d)^(n-l) = sum_{j>=l} C(n,l) C(n-l,j-l) (-1)^(j-l) d^j
  for (int l = 0; l <= n; ++l)
    for (int j = l; j <= n; ++j) {
      const double sign = ((j - l) % 2 == 0) ? 1.0 : -1.0;
      poly.monomial[j] += poly.bernstein[l] * binomial(n, l) * binomial(n - l, j - l) * sign;
    }
  return poly;
}

double eval_poly(const VelocityPoly& p, double d) {
  std::vector<double> b = p.bernstein;
  const int n = p.degree();
  for (int r = 1; r <= n; ++r)
    for (int l = 0; l <= n - r; ++l) b[l] = (1.0 - d) * b[l] + d * b[l + 1];
  return b[0];
}

double eval_monomial(const VelocityPoly& p, double d) {
  double acc = 0.0;
  for (int j = p.degree(); j >= 0; --j) acc = acc * d + p.monomial[j];
  return acc;
}

}  // namespace flip
