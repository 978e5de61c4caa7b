#pragma once

#include <functional>
#include <optional>

#include "prox/rational.hpp"
#include "prox/types.hpp"

namespace prox {

// Points E z + F y with z integer and y real. The rational copy, when
// present, is used for orthogonalization and Gram matrices.
struct MixedLattice {
  Mat E;
  Mat F;
  std::optional<RatMat> E_exact;
  std::optional<RatMat> F_exact;

  static MixedLattice rational(const RatMat& E, const RatMat& F);
  static MixedLattice rational(const RatMat& E);
  static MixedLattice real(const Mat& E, const Mat& F);
  static MixedLattice real(const Mat& E);

  Eigen::Index ambient_dim() const { return E.rows(); }
  Eigen::Index integer_rank() const { return E.cols(); }
  Eigen::Index real_rank() const { return F.cols(); }
  bool full_dimensional() const;
};

enum class CoveringMethod { OrthogonalBox, ObtuseSuperbase2d, NearestPlaneUpper };
const char* to_string(CoveringMethod method);

struct CoveringRadius {
  double lower = 0;
  double upper = 0;
  bool exact = false;
  CoveringMethod method = CoveringMethod::OrthogonalBox;
};

struct ClosestPoint {
  Vec point;
  double distance = 0;
  IntVec z;
  Vec y;
};

struct LatticeQuery {
  bool contains = false;
  std::optional<ClosestPoint> witness;
};

MixedLattice orthogonal_representation(const MixedLattice& lat);
CoveringRadius covering_radius(const MixedLattice& lat);
ClosestPoint closest_lattice_point(const MixedLattice& lat, const Vec& target);
LatticeQuery ellipsoid_contains_lattice_point(const MixedLattice& lat, const Vec& center, double r);

// Covering radius of the lattice with Gram matrix G (full rank).
CoveringRadius covering_radius_gram(const Mat& G);
CoveringRadius covering_radius_gram(const RatMat& G);

// Visits every integer z with (z-c)ᵀG(z-c) <= bound2, G positive definite.
// The visitor returns false to stop; the call then returns false.
bool enumerate_ellipsoid(const Mat& G, const Vec& c, double bound2,
                         const std::function<bool(const IntVec&)>& visit);

bool lex_less(const IntVec& a, const IntVec& b);

}  // namespace prox
