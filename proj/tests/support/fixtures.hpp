#pragma once

#include <cstdint>
#include <vector>

#include "flip/random.hpp"
#include "flip/step_graphon.hpp"

namespace fixture {

inline flip::RandomStream stream(std::uint32_t replicate = 0, std::uint64_t seed = 20240611) {
  return flip::RandomStream(seed, flip::StreamTag::kTestFixture, replicate);
}

inline std::vector<double> random_masses(int m, flip::RandomStream& rng) {
  std::vector<double> w(m);
  double sum = 0.0;
  for (double& x : w) sum += (x = 0.2 + rng.uniform());
  for (double& x : w) x /= sum;
  return w;
}

inline std::vector<double> random_symmetric(int m, flip::RandomStream& rng, double lo, double hi) {
  std::vector<double> v(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) v[i * m + j] = v[j * m + i] = lo + (hi - lo) * rng.uniform();
  return v;
}

inline flip::StepGraphon random_graphon(int m, flip::RandomStream& rng, double lo = 0.0,
                                        double hi = 1.0) {
  return {random_masses(m, rng), random_symmetric(m, rng, lo, hi)};
}

inline flip::StepGraphon with_values(const flip::StepKernel& like, std::vector<double> values) {
  return {std::vector<double>(like.masses().begin(), like.masses().end()), std::move(values)};
}

inline flip::StepKernel random_kernel(int m, flip::RandomStream& rng) {
  return {random_masses(m, rng), random_symmetric(m, rng, -1.0, 1.0)};
}

}  // namespace fixture
