#pragma once

#include <cstdint>
#include <ostream>

namespace lowrank {

struct SelftestOptions {
  bool quick = false;
  std::uint64_t seed = 12345;
};

// Seeded property sweeps: the golden rank-1 example, bound match over random
// instances, enumeration-vs-closed-form equivalence, and the per-realization
// shifted-error identity. Prints one line per suite; returns true when all
// pass.
bool run_selftest(const SelftestOptions& opts, std::ostream& out);

}  // namespace lowrank
