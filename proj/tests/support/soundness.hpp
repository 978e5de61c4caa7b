#pragma once

#include <map>
#include <string>
#include <vector>

#include "support/random_instances.hpp"

namespace prox::testing {

enum class FuzzClass { Ellipsoid, Paraboloid, HyperboloidBranch, ConeBranch, TwoSphere };
const char* to_string(FuzzClass c);

struct SoundnessStats {
  int instances = 0;
  int bounds_checked = 0;
  int violations = 0;
  std::map<std::string, int> checks_per_formula;
  std::vector<std::string> messages;  // first few violations
  // Two-sphere only: the ceiling form is not counted as a violation but tracked
  // here; the shortfall is in units of |α_j*|.
  int ceiling_shortfalls = 0;
  double worst_ceiling_shortfall = 0;
};

// Random integer SOC data in [−5,5], n alternating 2 and 3. An instance is kept
// when its relaxation is solvable and the oracle certifies an integer optimum;
// every applicable bound is then compared with oracle proximity and oracle IG.
// Two-sphere instances check the corrected bound.
SoundnessStats fuzz_bound_soundness(FuzzClass cls, int count, std::uint64_t seed);

}  // namespace prox::testing
