#include "flip/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <string>

#include "flip/csv.hpp"
#include "flip/error.hpp"

namespace flip {

namespace {

constexpr double kCrossingSlack = 1e-14;

VectorField make_field(const Rule& rule, std::span<const double> masses) {
  auto op = std::make_shared<VelocityOperator>(rule);
  std::vector<double> mu(masses.begin(), masses.end());
  return [op, mu](std::span<const double> y, std::span<double> dydt) {
    if (!std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); })) {
      std::fill(dydt.begin(), dydt.end(), std::numeric_limits<double>::quiet_NaN());
      return;
    }
    const StepKernel v = (*op)(unpack_upper(mu, y));
    const auto packed = pack_upper(v);
    std::copy(packed.begin(), packed.end(), dydt.begin());
  };
}

double band_excursion(std::span<const double> y) {
  double worst = 0.0;
  for (double v : y) worst = std::max({worst, -v, v - 1.0});
  return worst;
}

bool outside_unit(std::span<const double> y) {
  return std::any_of(y.begin(), y.end(), [](double v) {
    return !(v >= -kCrossingSlack && v <= 1.0 + kCrossingSlack);
  });
}

std::vector<double> masses_of(const StepKernel& K) {
  return {K.masses().begin(), K.masses().end()};
}

}  // namespace

std::vector<double> pack_upper(const StepKernel& K) {
  const int m = K.part_count();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m) * (m + 1) / 2);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) out.push_back(K.value(i, j));
  return out;
}

StepKernel unpack_upper(std::span<const double> masses, std::span<const double> packed) {
  const int m = static_cast<int>(masses.size());
  if (packed.size() != static_cast<std::size_t>(m) * (m + 1) / 2)
    throw ValidationError("packed state has the wrong length");
  std::vector<double> values(static_cast<std::size_t>(m) * m);
  std::size_t e = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j, ++e) {
      values[i * m + j] = packed[e];
      values[j * m + i] = packed[e];
    }
  return StepKernel(std::vector<double>(masses.begin(), masses.end()), std::move(values));
}

Trajectory integrate(const Rule& rule, const StepKernel& W0, std::span<const double> checkpoint_times,
                     const IntegratorOptions& opts) {
  validate_options(opts);
  for (std::size_t c = 0; c < checkpoint_times.size(); ++c) {
    const double t = checkpoint_times[c];
    if (!std::isfinite(t)) throw ValidationError("checkpoint times must be finite");
    if (c > 0) {
      const double prev = checkpoint_times[c - 1];
      if (prev * t < 0.0 || std::abs(t) <= std::abs(prev))
        throw ValidationError("checkpoint times must share a sign and move away from 0 strictly");
    }
  }
  const auto masses = masses_of(W0);
  const VectorField field = make_field(rule, masses);
  Trajectory traj;
  std::vector<double> y = pack_upper(W0);
  double t = 0.0;
  traj.stats.max_band_excursion = std::max(0.0, band_excursion(y));

  for (double target : checkpoint_times) {
    const bool forward = target >= 0.0;
    StepStats stats;
    StepObserver observer = [&](double, std::span<const double>, double t_end,
                                std::span<const double> y_end) {
      const double excursion = band_excursion(y_end);
      if (forward) {
        traj.stats.max_band_excursion = std::max(traj.stats.max_band_excursion, excursion);
        if (excursion > opts.band_tol)
          throw IntegrationFault("state left the [0,1] band at t=" + csv::format(t_end) +
                                 " (excursion " + csv::format(excursion) + ")");
      }
      return true;
    };
    if (target != t) integrate_ode(field, y, t, target, opts, stats, observer);
    traj.stats.accepted += stats.accepted;
    traj.stats.rejected += stats.rejected;
    t = target;
    traj.checkpoints.push_back({t, t == 0.0 ? W0 : unpack_upper(masses, y)});
  }
  return traj;
}

StepKernel flow_at(const Rule& rule, const StepKernel& W0, double t, const IntegratorOptions& opts) {
  if (t == 0.0) return W0;
  const double times[] = {t};
  return integrate(rule, W0, times, opts).checkpoints.back().state;
}

double semigroup_check(const Rule& rule, const StepKernel& W0, double t, double u,
                       const IntegratorOptions& opts) {
  if (t < 0.0 || u < 0.0) throw ValidationError("semigroup_check needs t, u >= 0");
  const StepKernel two_legs = flow_at(rule, flow_at(rule, W0, u, opts), t, opts);
  const StepKernel one_leg = flow_at(rule, W0, t + u, opts);
  return linf_dist(two_legs, one_leg);
}

AgeResult backward_age(const Rule& rule, const StepGraphon& W0, double max_age,
                       const IntegratorOptions& opts) {
  if (!(max_age > 0.0)) throw ValidationError("max_age must be positive");
  validate_options(opts);
  const auto masses = masses_of(W0);
  const VelocityOperator op(rule);
  const StepKernel v0 = op(W0);
  const int m = W0.part_count();
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const double w = W0.value(i, j), v = v0.value(i, j);
      // Going back in time moves the entry by -v; leaving [0,1] at once means age 0.
      if ((w <= 0.0 && v > 0.0) || (w >= 1.0 && v < 0.0))
        return {AgeStatus::kBoundaryReached, 0.0, W0};
    }

  const VectorField field = make_field(rule, masses);
  const double resolution = std::max(opts.atol, 1e-14);
  std::vector<double> y = pack_upper(W0);
  std::vector<double> last_valid = y;
  double last_valid_t = 0.0;
  std::optional<AgeResult> crossing;

  StepObserver observer = [&](double t_start, std::span<const double> y_start, double t_end,
                              std::span<const double> y_end) {
    if (!outside_unit(y_end)) {
      last_valid.assign(y_end.begin(), y_end.end());
      last_valid_t = t_end;
      return true;
    }
    double inside = 0.0, outside = t_end - t_start;
    std::vector<double> inside_state(y_start.begin(), y_start.end());
    while (std::abs(outside - inside) > resolution) {
      const double mid = 0.5 * (inside + outside);
      auto probe = single_step(field, y_start, mid, opts.method);
      if (outside_unit(probe)) {
        outside = mid;
      } else {
        inside = mid;
        inside_state = std::move(probe);
      }
    }
    crossing = AgeResult{AgeStatus::kBoundaryReached, -(t_start + 0.5 * (inside + outside)),
                         unpack_upper(masses, inside_state)};
    return false;
  };

  StepStats stats;
  try {
    integrate_ode(field, y, 0.0, -max_age, opts, stats, observer);
  } catch (const IntegrationFault&) {
    return {AgeStatus::kDomainExit, -last_valid_t, unpack_upper(masses, last_valid)};
  }
  if (crossing) return *crossing;
  return {AgeStatus::kExceedsMaxAge, max_age, unpack_upper(masses, y)};
}

DestinationResult find_destination(const Rule& rule, const StepGraphon& W0, double eps_vel,
                                   double eps_move, double t_max, const IntegratorOptions& opts) {
  if (!(eps_vel > 0.0) || !(eps_move > 0.0) || !(t_max > 0.0))
    throw ValidationError("destination tolerances and t_max must be positive");
  validate_options(opts);
  const auto masses = masses_of(W0);
  const VectorField field = make_field(rule, masses);
  const VelocityOperator op(rule);
  std::vector<double> y = pack_upper(W0);
  DestinationResult result;
  double t = 0.0;
  while (t < t_max) {
    const std::vector<double> before = y;
    const double next = std::min(t + 1.0, t_max);
    StepStats stats;
    integrate_ode(field, y, t, next, opts, stats,
                  [&](double, std::span<const double>, double t_end, std::span<const double> y_end) {
                    if (band_excursion(y_end) > opts.band_tol)
                      throw IntegrationFault("state left the [0,1] band at t=" + csv::format(t_end));
                    return true;
                  });
    double moved = 0.0;
    for (std::size_t e = 0; e < y.size(); ++e) moved = std::max(moved, std::abs(y[e] - before[e]));
    const double span = next - t;
    t = next;
    result.time = t;
    result.state = unpack_upper(masses, y);
    result.velocity_residual = linf_norm(op(result.state));
    if (span >= 1.0 && result.velocity_residual < eps_vel && moved < eps_move) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

std::vector<double> constant_fixed_points(const Rule& rule, int grid_n, double tol) {
  if (grid_n < 2) throw ValidationError("grid_n must be at least 2");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  const VelocityPoly poly = velocity_poly(rule);
  std::vector<double> grid(grid_n), value(grid_n);
  for (int g = 0; g < grid_n; ++g) {
    grid[g] = static_cast<double>(g) / (grid_n - 1);
    value[g] = eval_poly(poly, grid[g]);
  }
  const bool vanishes = std::all_of(poly.bernstein.begin(), poly.bernstein.end(),
                                    [](double b) { return b == 0.0; });
  if (vanishes) return grid;

  std::vector<double> roots;
  for (int g = 0; g < grid_n; ++g) {
    if (std::abs(value[g]) < tol) roots.push_back(grid[g]);
    if (g + 1 < grid_n && value[g] * value[g + 1] < 0.0) {
      double lo = grid[g], hi = grid[g + 1];
      double f_lo = value[g];
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = eval_poly(poly, mid);
        if (f_mid == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double r : roots) {
    if (!merged.empty() && r - merged.back() < 10.0 * tol) continue;
    merged.push_back(r);
  }
  return merged;
}

std::optional<double> genome_check(const Rule& rule, const StepGraphon& U0, const StepGraphon& W0,
                                   double t, const IntegratorOptions& opts) {
  const double initial = cut_norm_exact(kernel_sub(U0, W0)).value;
  if (initial == 0.0) return std::nullopt;
  const StepKernel u = flow_at(rule, U0, t, opts);
  const StepKernel w = flow_at(rule, W0, t, opts);
  return cut_norm_exact(kernel_sub(u, w)).value / initial;
}

std::string trajectory_csv_header(int parts) {
  std::string header = "t";
  for (int i = 1; i <= parts; ++i)
    for (int j = i; j <= parts; ++j)
      header += ",cell_" + std::to_string(i) + "_" + std::to_string(j);
  return header;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  if (traj.checkpoints.empty()) return;
  out << trajectory_csv_header(traj.checkpoints.front().state.part_count()) << '\n';
  for (const auto& cp : traj.checkpoints) {
    out << csv::format(cp.t);
    for (double v : pack_upper(cp.state)) out << ',' << csv::format(v);
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in, std::span<const double> masses) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty trajectory CSV");
  const int m = static_cast<int>(masses.size());
  if (line != trajectory_csv_header(m)) throw ValidationError("unexpected trajectory CSV header");
  Trajectory traj;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = csv::split(line);
    if (fields.size() != 1 + static_cast<std::size_t>(m) * (m + 1) / 2)
      throw ValidationError("trajectory CSV row has the wrong number of fields");
    std::vector<double> packed;
    for (std::size_t f = 1; f < fields.size(); ++f) packed.push_back(csv::parse_double(fields[f]));
    traj.checkpoints.push_back({csv::parse_double(fields[0]), unpack_upper(masses, packed)});
  }
  return traj;
}

}  // namespace flip
