#include "flip/planar.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "flip/csv.hpp"
#include "flip/error.hpp"

namespace flip {

namespace {

double radius(Vec2 p, const PlanarParams& params) {
  return std::hypot(p[0] - params.q[0], p[1] - params.q[1]);
}

double checked_radius(Vec2 p, const PlanarParams& params) {
  const double rho = radius(p, params);
  if (!(rho > 0.0)) throw ValidationError("planar field is singular at its center");
  return rho;
}

}  // namespace

void validate(const PlanarParams& params) {
  if (!(params.r > 0.0)) throw ValidationError("radius must be positive");
  if (!(params.r_inner < params.r && params.r < params.r_outer))
    throw ValidationError("need r_inner < r < r_outer");
  if (!(params.theta > 0.0 && params.theta < 1e-4))
    throw ValidationError("theta must lie in (0, 1e-4)");
}

Vec2 planar_g(Vec2 p, const PlanarParams& params) {
  const double rho = checked_radius(p, params);
  return {-(p[1] - params.q[1]) / rho, (p[0] - params.q[0]) / rho};
}

Vec2 planar_h(Vec2 p, const PlanarParams& params) {
  const double rho = checked_radius(p, params);
  const double s = params.r / rho - 1.0;
  return {s * (p[0] - params.q[0]), s * (p[1] - params.q[1])};
}

Vec2 planar_field(Vec2 p, const PlanarParams& params) {
  const Vec2 g = planar_g(p, params), h = planar_h(p, params);
  return {params.theta * (g[0] + h[0]), params.theta * (g[1] + h[1])};
}

PlanarTrace planar_demo(Vec2 p0, double t_end, int checkpoints, const PlanarParams& params,
                        const IntegratorOptions& opts) {
  validate(params);
  validate_options(opts);
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end must be positive");
  if (checkpoints < 2) throw ValidationError("need at least 2 checkpoints");
  checked_radius(p0, params);

  const VectorField field = [&params](std::span<const double> y, std::span<double> dydt) {
    const Vec2 v = planar_field({y[0], y[1]}, params);
    dydt[0] = v[0];
    dydt[1] = v[1];
  };
  PlanarTrace trace;
  std::vector<double> y{p0[0], p0[1]};
  trace.samples.push_back({0.0, p0});
  double t = 0.0;
  for (int c = 1; c < checkpoints; ++c) {
    const double next = t_end * c / (checkpoints - 1);
    StepStats stats;
    integrate_ode(field, y, t, next, opts, stats);
    t = next;
    trace.samples.push_back({t, {y[0], y[1]}});
  }
  trace.final_radius = radius(trace.samples.back().p, params);
  return trace;
}

void write_planar_csv(std::ostream& out, const PlanarTrace& trace) {
  out << "t,x,y\n";
  for (const auto& s : trace.samples)
    out << csv::format(s.t) << ',' << csv::format(s.p[0]) << ',' << csv::format(s.p[1]) << '\n';
}

PlanarTrace read_planar_csv(std::istream& in, const PlanarParams& params) {
  std::string line;
  if (!std::getline(in, line) || line != "t,x,y") throw ValidationError("unexpected planar CSV header");
  PlanarTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != 3) throw ValidationError("planar CSV row needs 3 fields");
    trace.samples.push_back(
        {csv::parse_double(f[0]), {csv::parse_double(f[1]), csv::parse_double(f[2])}});
  }
  if (!trace.samples.empty()) trace.final_radius = radius(trace.samples.back().p, params);
  return trace;
}

}  // namespace flip
