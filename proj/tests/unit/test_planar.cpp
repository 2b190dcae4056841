#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "flip/error.hpp"
#include "flip/planar.hpp"

using namespace flip;

TEST(Planar, FieldComponents) {
  const Vec2 g = planar_g({0.3, 0.8});
  EXPECT_NEAR(g[0], 0.0, 1e-15);
  EXPECT_NEAR(g[1], 1.0, 1e-15);
  for (double angle : {0.0, 1.0, 2.5, 4.0}) {
    const Vec2 p{0.2 + 0.1 * std::cos(angle), 0.8 + 0.1 * std::sin(angle)};
    const Vec2 h = planar_h(p);
    EXPECT_NEAR(h[0], 0.0, 1e-15);
    EXPECT_NEAR(h[1], 0.0, 1e-15);
  }
  const Vec2 f = planar_field({0.25, 0.8});
  const Vec2 gg = planar_g({0.25, 0.8}), hh = planar_h({0.25, 0.8});
  EXPECT_NEAR(f[0], 5e-5 * (gg[0] + hh[0]), 1e-20);
  EXPECT_NEAR(f[1], 5e-5 * (gg[1] + hh[1]), 1e-20);
  EXPECT_THROW(planar_field({0.2, 0.8}), ValidationError);
  PlanarParams bad;
  bad.theta = 2e-4;
  EXPECT_THROW(planar_demo({0.25, 0.8}, 10, 2, bad), ValidationError);
}

TEST(Planar, DemoConvergesToCircle) {
  const auto trace = planar_demo({0.25, 0.8}, 1e5, 11);
  EXPECT_NEAR(trace.final_radius, 0.1, 1e-3);
  std::stringstream ss;
  write_planar_csv(ss, trace);
  const auto back = read_planar_csv(ss);
  ASSERT_EQ(back.samples.size(), trace.samples.size());
  for (std::size_t i = 0; i < back.samples.size(); ++i) {
    EXPECT_EQ(back.samples[i].t, trace.samples[i].t);
    EXPECT_EQ(back.samples[i].p, trace.samples[i].p);
  }
}
