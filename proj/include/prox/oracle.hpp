#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prox/bounds.hpp"
#include "prox/quadric.hpp"

namespace prox {

struct IntBox {
  IntVec lo;
  IntVec hi;
  IntBox inflated(long long margin) const;
};

// The feasible set is the intersection of `sets`. Without a box the oracle
// enumerates a bounded member, or scans objective levels upward along a member
// whose level sets are bounded.
struct IpProblem {
  std::vector<QuadricSet> sets;
  IntVec alpha;
  std::optional<IntBox> box;
};

IpProblem make_problem(const std::vector<QuadricSet>& sets, const IntVec& alpha);
IpProblem make_problem(const TwoSphereInstance& t, const IntVec& alpha);
IpProblem make_problem(const Ellipsoid& e, const IntVec& alpha);

enum class IpStatus { Optimal, Infeasible, BoxTruncated };
const char* to_string(IpStatus status);

struct IpSolution {
  IpStatus status = IpStatus::Infeasible;
  std::optional<Integer> value;  // αᵀx*, exact
  std::optional<IntVec> optimizer;
  std::uint64_t points_enumerated = 0;
  std::optional<IntBox> box;
  std::string certificate;
};

// Enumeration cap: 10⁷ points unless PROX_ORACLE_BUDGET is set.
std::uint64_t oracle_budget();

IpSolution solve_ip_exact(const IpProblem& problem, std::uint64_t budget = oracle_budget());

struct ProximityResult {
  IpStatus status = IpStatus::Infeasible;
  std::optional<IntVec> point;
  double distance = 0;
  std::uint64_t points_enumerated = 0;
};

// Nearest feasible integer point to x̂ in ‖·‖₂; ties broken lexicographically.
ProximityResult proximity_exact(const std::vector<QuadricSet>& sets, const Vec& xhat,
                                std::uint64_t budget = oracle_budget());

bool contains_integer(const std::vector<QuadricSet>& sets, const IntVec& z);

}  // namespace prox
