#pragma once

// Explicit Runge-Kutta integration of autonomous systems y' = f(y):
// fixed-step classical RK4 and adaptive Dormand-Prince 5(4).

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace flip {

enum class IntegratorMethod { kRk4Fixed, kRk45Adaptive };

struct IntegratorOptions {
  IntegratorMethod method = IntegratorMethod::kRk45Adaptive;
  double step = 1e-3;  // RK4 step size
  double rtol = 1e-10;
  double atol = 1e-12;
  double band_tol = 1e-9;  // allowed excursion outside [0,1] in forward time
  double max_time = std::numeric_limits<double>::infinity();
  double min_step = 1e-14;
  std::int64_t max_steps = 50'000'000;
};

// Throws ValidationError on non-positive tolerances or band_tol >= 1e-6.
void validate_options(const IntegratorOptions& opts);

using VectorField = std::function<void(std::span<const double> y, std::span<double> dydt)>;

// Called after every accepted step with the step's start and end. Returning
// false stops the integration early (integrate_ode then returns the time
// reached).
using StepObserver = std::function<bool(double t_start, std::span<const double> y_start,
                                        double t_end, std::span<const double> y_end)>;

struct StepStats {
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
};

// Advances y from t0 to t1 (t1 < t0 integrates backward). The final step is
// shortened to land on t1 exactly. Throws IntegrationFault on step-size
// underflow, non-finite state or too many steps.
double integrate_ode(const VectorField& f, std::vector<double>& y, double t0, double t1,
                     const IntegratorOptions& opts, StepStats& stats,
                     const StepObserver& observer = {});

// One step of size h (may be negative) with the configured method's
// high-order solution. Used for event location inside an accepted step.
std::vector<double> single_step(const VectorField& f, std::span<const double> y, double h,
                                IntegratorMethod method);

}  // namespace flip
