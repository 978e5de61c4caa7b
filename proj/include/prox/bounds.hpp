#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prox/lattice.hpp"
#include "prox/quadric.hpp"
#include "prox/relax.hpp"

namespace prox {

enum class BoundKind { Proximity, IntegralityGap };
const char* to_string(BoundKind kind);

struct BoundReport {
  BoundKind kind = BoundKind::Proximity;
  double value = 0;
  std::string formula;
  bool rhs_independent = true;
  std::optional<CoveringRadius> mu_used;
  std::vector<std::string> assumptions;
  std::optional<double> kappa;
  std::optional<int> j_star;  // 1-based
};

// Ceiling that ignores a 1e-9 excess over an integer.
double ceil_nudged(double x);

// Recession-cone bounds, (√n/2)(1 + 1/Ψ). IG variants scale by ‖α‖₂.
BoundReport prox_bound_full_dim_cone(const QuadricSet& q);
BoundReport ig_bound_full_dim_cone(const QuadricSet& q, const Vec& alpha);
BoundReport prox_bound_hyperboloid(const QuadricSet& q);
BoundReport ig_bound_hyperboloid(const QuadricSet& q, const Vec& alpha);

// 2‖Q(QᵀQ)⁻¹‖₂·μ(Q) and 2‖Q(QᵀQ)⁻¹α‖₂·μ(Q). A supplied μ replaces the
// computed covering radius.
BoundReport prox_bound_ellipsoid(const Ellipsoid& e, std::optional<CoveringRadius> mu = std::nullopt);
BoundReport ig_bound_ellipsoid(const Ellipsoid& e, const Vec& alpha, std::optional<CoveringRadius> mu = std::nullopt);
BoundReport prox_bound_ellipsoid(const QuadricSet& q, std::optional<CoveringRadius> mu = std::nullopt);
BoundReport ig_bound_ellipsoid(const QuadricSet& q, const Vec& alpha, std::optional<CoveringRadius> mu = std::nullopt);

// √n/2 + Θ₀(x̂, √n/2), or √n when ‖Mx̂ − β‖₂ ≥ λ₁√n/2.
BoundReport prox_bound_paraboloid(const QuadricSet& q, const Vec& xhat);
// ‖α‖₂ times the proximity bound at the relaxation optimizer.
BoundReport ig_bound_paraboloid(const QuadricSet& q, const Vec& alpha);
std::optional<BoundReport> ig_bound_paraboloid_large_angle(const QuadricSet& q, const Vec& alpha);

struct SliceCoefficients {
  SliceQuadratic quad;
  Mat barQ;  // upper triangular, barQᵀbarQ = M̄
  CoveringRadius mu_barQ;
};

SliceCoefficients slice_coefficients(const QuadricSet& normalized);

// Sharp and weak slice bounds for objective eₙ, in normalized units.
std::vector<BoundReport> ig_bound_slice(const QuadricSet& normalized, std::optional<CoveringRadius> mu = std::nullopt);
BoundReport ig_bound_multiple_optima(const QuadricSet& normalized);

// Slice bounds for an integer objective: normalizes, then rescales.
std::vector<BoundReport> ig_bound_slice(const QuadricSet& q, const IntVec& alpha);

// {x : ‖x‖ ≤ r1, ‖x − p e₁‖ ≤ r2} in dimension n.
struct TwoSphereInstance {
  double r1 = 0, r2 = 0, p = 0;
  int n = 2;
  Vec alpha;
  double kappa() const { return (r1 + r2) / p; }
};

struct TwoSphereGeometry {
  double W = 0;
  double H = 0;
  std::optional<double> h;  // needs r1 + r2 ≥ p + √(n−1)
};

TwoSphereGeometry two_sphere_geometry(const TwoSphereInstance& t);
double two_sphere_lemma_max(double kappa, double nu);
// The κ-only ceiling form; it can undercount when h is fractional.
BoundReport ig_bound_two_sphere(const TwoSphereInstance& t);
// Same, with the ceiling replaced by lemma + 1.
BoundReport ig_bound_two_sphere_corrected(const TwoSphereInstance& t);
RelaxationResult solve_two_sphere_relaxation(const TwoSphereInstance& t);
std::vector<QuadricSet> two_sphere_sets(const TwoSphereInstance& t);

// Every bound that applies to the single set q under objective α.
std::vector<BoundReport> all_bounds(const QuadricSet& q, const IntVec& alpha);

}  // namespace prox
