#pragma once

#include <optional>
#include <string>

#include "prox/quadric.hpp"
#include "prox/rational.hpp"

namespace prox {

enum class RelaxStatus { Solvable, BoundedNotSolvable, MultipleOptima, Unbounded };
const char* to_string(RelaxStatus status);

// inf{αᵀx : x ∈ S}.
struct RelaxationResult {
  RelaxStatus status = RelaxStatus::Unbounded;
  std::optional<double> value;
  std::optional<Vec> optimizer;
  bool unique = false;
  // Filled when the data are rational and the closed form stays rational.
  std::optional<Rational> exact_value;
  std::optional<RatVec> exact_optimizer;
};

RelaxationResult solve_relaxation(const QuadricSet& q, const Vec& alpha);
RelaxationResult solve_relaxation(const Ellipsoid& e, const Vec& alpha);

// x = U y with Uᵀα = scale·eₙ, so αᵀx = scale·yₙ.
struct NormalizedInstance {
  IntMat U;
  QuadricSet set;
  Rational scale;
};

NormalizedInstance normalize_objective(const QuadricSet& q, const RatVec& alpha);
NormalizedInstance normalize_objective(const QuadricSet& q, const IntVec& alpha);
QuadricSet transform_set(const QuadricSet& q, const IntMat& U);

// r²(δ) = q₂δ² + q₁δ + q₀ for the slice {x̄ : (x̄, δ) ∈ S}, from the blocks
// M = [M̄ a; aᵀ a₀], β = (β̄, βₙ).
struct SliceQuadratic {
  double q2 = 0, q1 = 0, q0 = 0;
  std::optional<Rational> q2_exact, q1_exact, q0_exact;
  Mat Mbar;
  Vec a;
  Vec beta_bar;
  std::optional<RatMat> Mbar_exact;
  std::optional<RatVec> a_exact, beta_bar_exact;
  // Center of the slice ellipsoid, M̄⁻¹(β̄ − δa).
  Vec center(double delta) const;
  std::optional<RatVec> center_exact(const Rational& delta) const;
  double radius2(double delta) const { return (q2 * delta + q1) * delta + q0; }
};

// Throws AssumptionViolated unless M̄ ≻ 0.
SliceQuadratic slice_quadratic(const QuadricSet& normalized);

struct DeltaInf {
  double value = 0;
  bool unique = true;
  std::optional<Rational> exact;
};

DeltaInf delta_inf(const QuadricSet& normalized);

}  // namespace prox
