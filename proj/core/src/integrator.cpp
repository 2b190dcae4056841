#include "flip/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "flip/error.hpp"

namespace flip {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Difference between the 5th and 4th order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Workspace {
  explicit Workspace(std::size_t n)
      : k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), out(n), err(n) {}
  std::vector<double> k1, k2, k3, k4, k5, k6, k7, tmp, out, err;
};

void dopri_step(const VectorField& f, std::span<const double> y, double h, Workspace& w) {
  const std::size_t n = y.size();
  f(y, w.k1);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * a21 * w.k1[i];
  f(w.tmp, w.k2);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * (a31 * w.k1[i] + a32 * w.k2[i]);
  f(w.tmp, w.k3);
  for (std::size_t i = 0; i < n; ++i)
    w.tmp[i] = y[i] + h * (a41 * w.k1[i] + a42 * w.k2[i] + a43 * w.k3[i]);
  f(w.tmp, w.k4);
  for (std::size_t i = 0; i < n; ++i)
    w.tmp[i] = y[i] + h * (a51 * w.k1[i] + a52 * w.k2[i] + a53 * w.k3[i] + a54 * w.k4[i]);
  f(w.tmp, w.k5);
  for (std::size_t i = 0; i < n; ++i)
    w.tmp[i] = y[i] + h * (a61 * w.k1[i] + a62 * w.k2[i] + a63 * w.k3[i] + a64 * w.k4[i] +
                           a65 * w.k5[i]);
  f(w.tmp, w.k6);
  for (std::size_t i = 0; i < n; ++i)
    w.out[i] = y[i] + h * (b1 * w.k1[i] + b3 * w.k3[i] + b4 * w.k4[i] + b5 * w.k5[i] +
                           b6 * w.k6[i]);
  f(w.out, w.k7);
  for (std::size_t i = 0; i < n; ++i)
    w.err[i] = h * (e1 * w.k1[i] + e3 * w.k3[i] + e4 * w.k4[i] + e5 * w.k5[i] + e6 * w.k6[i] +
                    e7 * w.k7[i]);
}

void rk4_step(const VectorField& f, std::span<const double> y, double h, Workspace& w) {
  const std::size_t n = y.size();
  f(y, w.k1);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + 0.5 * h * w.k1[i];
  f(w.tmp, w.k2);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + 0.5 * h * w.k2[i];
  f(w.tmp, w.k3);
  for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * w.k3[i];
  f(w.tmp, w.k4);
  for (std::size_t i = 0; i < n; ++i)
    w.out[i] = y[i] + h / 6.0 * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
}

bool all_finite(std::span<const double> y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

void validate_options(const IntegratorOptions& opts) {
  if (opts.method == IntegratorMethod::kRk4Fixed && !(opts.step > 0.0))
    throw ValidationError("fixed step size must be positive");
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0))
    throw ValidationError("integrator tolerances must be positive");
  if (!(opts.band_tol >= 0.0 && opts.band_tol < 1e-6))
    throw ValidationError("band tolerance must lie in [0, 1e-6)");
  if (!(opts.max_time > 0.0)) throw ValidationError("max_time must be positive");
}

double integrate_ode(const VectorField& f, std::vector<double>& y, double t0, double t1,
                     const IntegratorOptions& opts, StepStats& stats,
                     const StepObserver& observer) {
  validate_options(opts);
  if (std::abs(t1 - t0) > opts.max_time)
    throw ValidationError("requested time span exceeds max_time");
  if (t1 == t0) return t0;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  Workspace w(y.size());
  double t = t0;
  std::int64_t steps = 0;

  if (opts.method == IntegratorMethod::kRk4Fixed) {
    const auto total = static_cast<std::int64_t>(std::ceil(std::abs(t1 - t0) / opts.step - 1e-9));
    for (std::int64_t s = 1; s <= total; ++s) {
      const double t_next = s == total ? t1 : t0 + dir * static_cast<double>(s) * opts.step;
      rk4_step(f, y, t_next - t, w);
      if (!all_finite(w.out)) throw IntegrationFault("non-finite state during integration");
      ++stats.accepted;
      const bool keep = !observer || observer(t, y, t_next, w.out);
      y.swap(w.out);
      t = t_next;
      if (!keep) return t;
    }
    return t;
  }

  double h = dir * std::min(std::abs(t1 - t0), 1e-3);
  while (dir * (t1 - t) > 0.0) {
    if (++steps > opts.max_steps) throw IntegrationFault("integrator exceeded its step budget");
    bool last = false;
    if (dir * (t + h - t1) >= 0.0) {
      h = t1 - t;
      last = true;
    }
    dopri_step(f, y, h, w);
    double err = 0.0;
    bool finite = all_finite(w.out);
    if (finite) {
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double scale = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(w.out[i]));
        err = std::max(err, std::abs(w.err[i]) / scale);
      }
    }
    if (!finite || !std::isfinite(err)) {
      ++stats.rejected;
      h *= 0.25;
      if (std::abs(h) < opts.min_step) throw IntegrationFault("non-finite state during integration");
      continue;
    }
    if (err <= 1.0) {
      const double t_next = last ? t1 : t + h;
      ++stats.accepted;
      const bool keep = !observer || observer(t, y, t_next, w.out);
      y.swap(w.out);
      t = t_next;
      if (!keep) return t;
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= factor;
    } else {
      ++stats.rejected;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
      if (std::abs(h) < opts.min_step) throw IntegrationFault("step size underflow");
    }
  }
  return t;
}

std::vector<double> single_step(const VectorField& f, std::span<const double> y, double h,
                                IntegratorMethod method) {
  Workspace w(y.size());
  if (method == IntegratorMethod::kRk4Fixed)
    rk4_step(f, y, h, w);
  else
    dopri_step(f, y, h, w);
  return w.out;
}

}  // namespace flip
