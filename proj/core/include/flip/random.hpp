#pragma once

// Counter-based random streams built on Philox4x32-10. A stream is identified
// by (seed, tag, replicate); its i-th 128-bit block is
//   philox4x32_10(counter = {i_lo, i_hi, tag, replicate}, key = {seed_lo, seed_hi}).
// Output depends only on these integers, never on the platform or on the
// standard library's distribution implementations.

#include <array>
#include <cstdint>
#include <limits>

namespace flip {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

enum class StreamTag : std::uint32_t {
  kGeneric = 0,
  kGraphSample = 1,
  kProcess = 2,
  kVelocityMonteCarlo = 3,
  kOneStepCheck = 4,
  kCutNormSearch = 5,
  kTestFixture = 6,
};

class RandomStream {
 public:
  using result_type = std::uint32_t;

  RandomStream(std::uint64_t seed, StreamTag tag, std::uint32_t replicate = 0)
      : seed_(seed), tag_(static_cast<std::uint32_t>(tag)), replicate_(replicate) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  std::uint64_t next_u64();
  // Uniform in [0,1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, bound), bound >= 1; exact (rejection sampling).
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p) { return uniform() < p; }

  // Deterministic child stream for a sub-task.
  RandomStream derive(StreamTag tag, std::uint32_t replicate) const {
    return RandomStream(seed_, tag, replicate);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint32_t tag_;
  std::uint32_t replicate_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
};

}  // namespace flip
