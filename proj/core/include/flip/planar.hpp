#pragma once

// Planar vector field with an attracting circle around q: a unit tangent
// field g rotating about q plus a radial field h pulling towards the circle
// of radius r, scaled by theta.

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "flip/integrator.hpp"

namespace flip {

using Vec2 = std::array<double, 2>;

struct PlanarParams {
  double r = 0.1;
  double r_inner = 0.09;
  double r_outer = 0.11;
  Vec2 q{0.2, 0.8};
  double theta = 5e-5;  // must stay below 1e-4
};

void validate(const PlanarParams& params);

// g(p) = (-(y-b), x-a) / |p-q|. Throws ValidationError at p = q.
Vec2 planar_g(Vec2 p, const PlanarParams& params = {});
// h(p) = (r/|p-q| - 1)(p - q). Throws ValidationError at p = q.
Vec2 planar_h(Vec2 p, const PlanarParams& params = {});
// theta (g + h).
Vec2 planar_field(Vec2 p, const PlanarParams& params = {});

struct PlanarSample {
  double t;
  Vec2 p;
};

struct PlanarTrace {
  std::vector<PlanarSample> samples;
  double final_radius = 0.0;  // |p(t_end) - q|
};

// Integrates p' = planar_field(p) from p0 on [0, t_end], recording
// `checkpoints` evenly spaced samples (including both ends).
PlanarTrace planar_demo(Vec2 p0, double t_end, int checkpoints, const PlanarParams& params = {},
                        const IntegratorOptions& opts = {});

// CSV "t,x,y".
void write_planar_csv(std::ostream& out, const PlanarTrace& trace);
PlanarTrace read_planar_csv(std::istream& in, const PlanarParams& params = {});

}  // namespace flip
