#pragma once

#include <optional>
#include <string>

#include "prox/rational.hpp"
#include "prox/types.hpp"

namespace prox {

// Rational copy of a quadric's data; used for exact membership and exact
// closed forms whenever the input was rational.
struct ExactQuadric {
  RatMat M;
  RatVec beta;
  Rational gamma;
  std::optional<RatVec> g;
  Rational h;
  // Same data scaled to a common integer denominator, when it fits in 64 bits.
  bool has_int = false;
  IntMat M_int;
  IntVec beta_int;
  long long gamma_int = 0;
  IntVec g_int;
  long long h_int = 0;
};

struct Branch {
  Vec g;
  double h = 0;
};

// {x : xᵀMx − 2βᵀx + γ ≤ 0}, optionally cut by gᵀx ≥ h.
struct QuadricSet {
  Mat M;
  Vec beta;
  double gamma = 0;
  std::optional<Branch> branch;
  std::optional<ExactQuadric> exact;

  static QuadricSet from_rational(const RatMat& M, const RatVec& beta, const Rational& gamma);
  static QuadricSet from_rational(const RatMat& M, const RatVec& beta, const Rational& gamma,
                                  const RatVec& g, const Rational& h);
  static QuadricSet from_real(const Mat& M, const Vec& beta, double gamma);
  static QuadricSet from_real(const Mat& M, const Vec& beta, double gamma, const Vec& g, double h);
  // gᵀx ≥ h as a degenerate quadric.
  static QuadricSet halfspace(const RatVec& g, const Rational& h);
  static QuadricSet halfspace_real(const Vec& g, double h);

  Eigen::Index dim() const { return M.rows(); }
  double form(const Vec& x) const;
  double residual(const Vec& x) const;  // max violation of all inequalities
  bool contains(const Vec& x, double tol = 1e-9) const;
  bool contains_integer(const IntVec& z) const;  // exact when rational data present
};

// {x : ‖Ax − b‖ ≤ cᵀx − d}.
struct SocrSet {
  Mat A;
  Vec b;
  Vec c;
  double d = 0;
  std::optional<RatMat> A_exact;
  std::optional<RatVec> b_exact;
  std::optional<RatVec> c_exact;
  std::optional<Rational> d_exact;

  static SocrSet from_rational(const RatMat& A, const RatVec& b, const RatVec& c, const Rational& d);
  static SocrSet from_real(const Mat& A, const Vec& b, const Vec& c, double d);
  bool is_exact() const { return A_exact.has_value(); }
  double residual(const Vec& x) const;
};

// {x : ‖Qx − p‖ ≤ r}.
struct Ellipsoid {
  Mat Q;
  Vec p;
  double r = 0;
  double residual(const Vec& x) const { return (Q * x - p).norm() - r; }
  Vec center() const { return Q.lu().solve(p); }
};

enum class QuadricKind {
  Ellipsoid,
  Singleton,
  Empty,
  Paraboloid,
  Cylinder,
  Line,
  OneSheetHyperboloid,
  TranslatedCone,
  TwoSheetHyperboloid,
};
const char* to_string(QuadricKind kind);

struct QuadricClass {
  QuadricKind kind = QuadricKind::Empty;
  std::optional<double> qstar;
  std::optional<double> qhat;
  std::optional<Vec> center;
  double tau = 0;           // eigenvalue band
  Vec eigenvalues;          // descending, λ₁ ≥ … ≥ λₙ
  Mat eigenvectors;         // matching columns; last column uₙ oriented per class
  Vec u_n() const { return eigenvectors.col(eigenvectors.cols() - 1); }
  double lambda_1() const { return eigenvalues(0); }
  double lambda_n() const { return eigenvalues(eigenvalues.size() - 1); }
  bool is_branch_class() const {
    return kind == QuadricKind::TwoSheetHyperboloid || kind == QuadricKind::TranslatedCone;
  }
};

enum class BranchRegime { Asymptotic, BoundedBelowOnPlus, BoundedBelowOnMinus, UnboundedBoth };
const char* to_string(BranchRegime regime);

struct BranchBounds {
  BranchRegime regime = BranchRegime::UnboundedBoth;
  double g_Minv_g = 0;
  std::optional<double> h_minus;
  std::optional<double> h_plus;
  std::optional<bool> separates;  // answer for the queried h
};

struct BallShift {
  double theta = 0;
  Vec direction;
};

QuadricClass classify(const QuadricSet& q);
BranchBounds branch_bounds(const QuadricSet& q, const Vec& g, std::optional<double> h_query = std::nullopt);
double psi_constant(const QuadricSet& q);
BallShift ball_shift(const QuadricSet& q, const Vec& x0, double r);
Ellipsoid inner_ellipsoid(const QuadricSet& q, const Vec& xhat, const Mat& D);
QuadricSet socr_to_qr(const SocrSet& s);
Ellipsoid qr_to_er(const QuadricSet& q);
Ellipsoid socr_to_er(const SocrSet& s);
bool check_lineality_trivial(const QuadricSet& q);

QuadricSet er_to_qr(const Ellipsoid& e);

// Eigenvalue tolerance τ = 1e-9·(1 + ‖M‖₂).
double eigen_tolerance(const Mat& M);

}  // namespace prox
