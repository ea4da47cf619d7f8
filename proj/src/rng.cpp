#include "lowrank/rng.hpp"

namespace lowrank {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t UniformRng::next_below(std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return x % bound;
}

UniformRng UniformRng::for_stream(std::uint64_t master_seed,
                                  std::uint64_t stream) {
  return UniformRng(splitmix64(splitmix64(master_seed) + stream));
}

}  // namespace lowrank
