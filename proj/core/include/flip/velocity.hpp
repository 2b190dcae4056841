#pragma once

// Velocity operator of a rule on step kernels: exact evaluation, a
// Monte-Carlo estimator built on the probabilistic form, and the closed-form
// polynomial on constant graphons.

#include <cstdint>
#include <vector>

#include "flip/rule.hpp"
#include "flip/step_graphon.hpp"

namespace flip {

inline constexpr double kVelocityGuard = 1e9;

// Precomputed evaluator. vel(i,j) = sum over ordered roots (a,b) and drawn
// graphs F of c[F][ab] * t_ind^{(i,j)}(F^{a,b}, W). Relabeling each F so that
// its roots become (0,1) folds the root sum into one coefficient per graph,
// g[G] = sum_{a!=b} c[sigma_ab G][ab], after which each cell is
//   sum over assignments of vertices 2..k-1 of mass * multilinear(g; pair probs).
class VelocityOperator {
 public:
  explicit VelocityOperator(const Rule& rule);

  int order() const { return k_; }
  bool vanishes() const { return vanishes_; }
  const std::vector<double>& root_coefficients() const { return root_coefficients_; }

  StepKernel operator()(const StepKernel& W) const;
  double cell(const StepKernel& W, int i, int j) const;

 private:
  int k_;
  bool vanishes_;
  std::vector<double> root_coefficients_;
};

StepKernel velocity(const Rule& rule, const StepKernel& W);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

// Sum over ordered (a,b) of E[1{ab in H} - 1{ab in F}] = P(ab in H) - W(i,j)
// where F ~ G(k,W) with vertex a in part i and b in part j, and H ~ R[F]. Each ordered root pair
// draws `samples` samples from its own substream of `seed`.
MonteCarloEstimate velocity_monte_carlo(const Rule& rule, const StepGraphon& W, int i, int j,
                                        std::int64_t samples, std::uint64_t seed);

// Velocity on constant graphons, vel(d) = sum_l beta_l C(N,l) d^l (1-d)^(N-l)
// with N = C(k,2) and beta_l = 2 Delta_l (Bernstein coefficients).
struct VelocityPoly {
  std::vector<double> bernstein;
  std::vector<double> monomial;  // vel(d) = sum_j monomial[j] d^j
  int degree() const { return static_cast<int>(bernstein.size()) - 1; }
};

VelocityPoly velocity_poly(const Rule& rule);
// De Casteljau evaluation of the Bernstein form.
double eval_poly(const VelocityPoly& p, double d);
double eval_monomial(const VelocityPoly& p, double d);

}  // namespace flip
