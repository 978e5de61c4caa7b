#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prox/instance.hpp"

namespace prox {

struct FamilyOptions {
  Rational epsilon{1, 2};  // ex2 only
};

// ex0 ex10 ex11 ex7 case1 case2 ex1 ex2 ex3 ex4 ex5 ex6 ex8 ex9.
const std::vector<std::string>& family_names();
// Accepts "appendix:exK" as an alias of "exK"; throws InvalidInput otherwise.
std::string canonical_family(const std::string& name);
// Parameter range used by the regression sweeps.
std::pair<int, int> family_range(const std::string& family);
Instance make_family_instance(const std::string& family, int N, const FamilyOptions& options = {});

// min of sign·x₂ over a planar intersection, scanning x₁ on lo, lo+step, …, hi
// and solving each member's inequality in x₂ exactly on every line.
struct SliceScan {
  double value = 0;
  double x1 = 0;
  double x2 = 0;
};
std::optional<SliceScan> scan_planar_relaxation(const std::vector<QuadricSet>& sets, int sign, double lo, double hi,
                                                double step);

}  // namespace prox
