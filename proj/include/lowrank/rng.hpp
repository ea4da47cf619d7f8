#pragma once

#include <cstdint>
#include <random>

namespace lowrank {

// Deterministic uniform generator. mt19937_64 output is fully specified by
// the standard, so identical seeds give identical streams on any platform.
class UniformRng {
 public:
  explicit UniformRng(std::uint64_t seed) : gen_(seed) {}

  // 53-bit uniform in [0, 1).
  double next() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return gen_(); }

  // Integer in [0, bound) by rejection, bias-free.
  std::uint64_t next_below(std::uint64_t bound);

  // Independent stream for one sample index, derived from a master seed by
  // a splitmix64 counter scheme.
  static UniformRng for_stream(std::uint64_t master_seed, std::uint64_t stream);

 private:
  std::mt19937_64 gen_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace lowrank
