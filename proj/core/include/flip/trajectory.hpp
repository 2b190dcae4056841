#pragma once

// Trajectories of the graphon ODE dPhi/dt = vel(Phi) on step kernels.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flip/integrator.hpp"
#include "flip/rule.hpp"
#include "flip/step_graphon.hpp"
#include "flip/velocity.hpp"

namespace flip {

// Upper-triangular cells (i <= j) in row-major order.
std::vector<double> pack_upper(const StepKernel& K);
StepKernel unpack_upper(std::span<const double> masses, std::span<const double> packed);

struct Checkpoint {
  double t;
  StepKernel state;
};

struct TrajectoryStats {
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  double max_band_excursion = 0.0;  // largest distance outside [0,1] seen
};

struct Trajectory {
  std::vector<Checkpoint> checkpoints;
  TrajectoryStats stats;
};

// Integrates from W0 at t=0 through the sorted checkpoint times (all of the
// same sign, in order of increasing |t|). Forward runs assert that every
// accepted state stays within [-band_tol, 1+band_tol] and throw
// IntegrationFault otherwise; states are never clamped.
Trajectory integrate(const Rule& rule, const StepKernel& W0, std::span<const double> checkpoint_times,
                     const IntegratorOptions& opts = {});

StepKernel flow_at(const Rule& rule, const StepKernel& W0, double t,
                   const IntegratorOptions& opts = {});

// linf distance between Phi^t(Phi^u W0) and Phi^{t+u} W0.
double semigroup_check(const Rule& rule, const StepKernel& W0, double t, double u,
                       const IntegratorOptions& opts = {});

enum class AgeStatus { kBoundaryReached, kExceedsMaxAge, kDomainExit };

struct AgeResult {
  AgeStatus status;
  double age;         // time until the boundary (or the span searched)
  StepKernel origin;  // boundary graphon, or last valid state on domain exit
};

// Integrates backward until some entry leaves [0,1], locating the crossing
// by bisection on the last step to resolution max(opts.atol, 1e-14).
AgeResult backward_age(const Rule& rule, const StepGraphon& W0, double max_age,
                       const IntegratorOptions& opts = {});

struct DestinationResult {
  bool converged = false;
  double time = 0.0;
  StepKernel state;
  double velocity_residual = 0.0;  // linf norm of the velocity at state
};

// Integrates in unit-time chunks until linf(vel) < eps_vel and the state
// moved less than eps_move over the last unit of time.
DestinationResult find_destination(const Rule& rule, const StepGraphon& W0, double eps_vel = 1e-8,
                                   double eps_move = 1e-9, double t_max = 1000.0,
                                   const IntegratorOptions& opts = {});

// Roots in [0,1] of the constant-graphon velocity polynomial: sign-change
// scan on grid_n points plus bisection to tol; endpoints and grid points
// with |vel| < tol are included; roots closer than 10 tol are merged. If the
// polynomial vanishes identically every grid point is returned.
std::vector<double> constant_fixed_points(const Rule& rule, int grid_n = 1001, double tol = 1e-12);

// cut_norm(Phi^t U0 - Phi^t W0) / cut_norm(U0 - W0); nullopt when the initial
// distance is zero.
std::optional<double> genome_check(const Rule& rule, const StepGraphon& U0, const StepGraphon& W0,
                                   double t, const IntegratorOptions& opts = {});

// Trajectory CSV: "t,cell_1_1,cell_1_2,..." one row per checkpoint.
std::string trajectory_csv_header(int parts);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& in, std::span<const double> masses);

}  // namespace flip
