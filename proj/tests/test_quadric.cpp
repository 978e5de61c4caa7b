#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "prox/quadric.hpp"
#include "support/random_instances.hpp"

using namespace prox;
using namespace prox::testing;

namespace {

Mat diag(std::initializer_list<double> v) {
  Vec d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

RatMat rdiag(std::initializer_list<Rational> v) {
  RatMat m = RatMat::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const Rational& x : v) m(i, i) = x, ++i;
  return m;
}

RatVec rvec(std::initializer_list<Rational> v) {
  RatVec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const Rational& x : v) out(i++) = x;
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidInput;
}

QuadricSet parabola() { return QuadricSet::from_rational(rdiag({1, 0}), rvec({0, Rational(1, 2)}), 0); }
QuadricSet unit_disk() { return QuadricSet::from_rational(rdiag({1, 1}), rvec({0, 0}), -1); }
QuadricSet hyperbola() { return QuadricSet::from_rational(rdiag({1, -1}), rvec({0, 0}), 1); }

}  // namespace

TEST(Classify, UnitDisk) {
  QuadricClass c = classify(unit_disk());
  EXPECT_EQ(c.kind, QuadricKind::Ellipsoid);
  EXPECT_DOUBLE_EQ(*c.qstar, 1.0);
  EXPECT_NEAR(c.center->norm(), 0.0, 1e-15);
}

TEST(Classify, Parabola) { EXPECT_EQ(classify(parabola()).kind, QuadricKind::Paraboloid); }

TEST(Classify, TwoSheetHyperbola) {
  QuadricClass c = classify(hyperbola());
  EXPECT_EQ(c.kind, QuadricKind::TwoSheetHyperboloid);
  EXPECT_DOUBLE_EQ(*c.qstar, -1.0);
}

TEST(Classify, SingletonEmptyConeOneSheet) {
  EXPECT_EQ(classify(QuadricSet::from_rational(rdiag({1, 1}), rvec({0, 0}), 0)).kind, QuadricKind::Singleton);
  EXPECT_EQ(classify(QuadricSet::from_rational(rdiag({1, 1}), rvec({0, 0}), 1)).kind, QuadricKind::Empty);
  EXPECT_EQ(classify(QuadricSet::from_rational(rdiag({1, -1}), rvec({0, 0}), 0)).kind, QuadricKind::TranslatedCone);
  EXPECT_EQ(classify(QuadricSet::from_rational(rdiag({1, -1}), rvec({0, 0}), -1)).kind,
            QuadricKind::OneSheetHyperboloid);
}

TEST(Classify, TwoNegativeEigenvaluesRejected) {
  auto q = QuadricSet::from_rational(rdiag({1, -1, -1}), rvec({0, 0, 0}), 1);
  EXPECT_EQ(code_of([&] { classify(q); }), ErrorCode::NotAQuadricOfInterest);
}

TEST(Classify, NontrivialLinealityRejected) {
  auto q = QuadricSet::from_rational(rdiag({1, 0}), rvec({1, 0}), -1);
  EXPECT_EQ(code_of([&] { classify(q); }), ErrorCode::AssumptionViolated);
}

TEST(Classify, NonSeparatingBranchRejected) {
  auto q = QuadricSet::from_rational(rdiag({1, -1}), rvec({0, 0}), 1, rvec({0, 1}), 2);
  EXPECT_EQ(code_of([&] { classify(q); }), ErrorCode::AssumptionViolated);
}

TEST(Classify, UpperBranchOrientsRecessionDirection) {
  auto up = QuadricSet::from_rational(rdiag({1, -1}), rvec({0, 0}), 1, rvec({0, 1}), 0);
  auto down = QuadricSet::from_rational(rdiag({1, -1}), rvec({0, 0}), 1, rvec({0, -1}), 0);
  EXPECT_NEAR(classify(up).u_n()(1), 1.0, 1e-12);
  EXPECT_NEAR(classify(down).u_n()(1), -1.0, 1e-12);
}

TEST(BranchBounds, HyperbolaHorizontalCut) {
  BranchBounds b = branch_bounds(hyperbola(), vec({0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(b.g_Minv_g, -1.0);
  EXPECT_DOUBLE_EQ(*b.h_minus, -1.0);
  EXPECT_DOUBLE_EQ(*b.h_plus, 1.0);
  EXPECT_TRUE(*b.separates);
  EXPECT_FALSE(*branch_bounds(hyperbola(), vec({0, 1}), 1.5).separates);
}

TEST(BranchBounds, AsymptoticNormal) {
  BranchBounds b = branch_bounds(hyperbola(), vec({1, 1}));
  EXPECT_EQ(b.regime, BranchRegime::Asymptotic);
  EXPECT_DOUBLE_EQ(b.g_Minv_g, 0.0);
  EXPECT_FALSE(b.h_minus.has_value());
}

TEST(BranchBounds, UnboundedNormal) {
  EXPECT_EQ(branch_bounds(hyperbola(), vec({1, 0})).regime, BranchRegime::UnboundedBoth);
}

TEST(BranchBounds, ConeSeparatesAtApexOnly) {
  auto cone = QuadricSet::from_rational(rdiag({1, -1}), rvec({0, 0}), 0);
  EXPECT_TRUE(*branch_bounds(cone, vec({0, 1}), 0.0).separates);
  EXPECT_FALSE(*branch_bounds(cone, vec({0, 1}), 0.5).separates);
}

TEST(BranchBounds, WrongClass) {
  EXPECT_EQ(code_of([] { branch_bounds(unit_disk(), vec({0, 1})); }), ErrorCode::WrongQuadricClass);
}

TEST(PsiConstant, Lorentz) {
  for (int n = 2; n <= 6; ++n) {
    Mat M = Mat::Identity(n, n);
    M(n - 1, n - 1) = -1;
    auto q = QuadricSet::from_real(M, Vec::Zero(n), 0);
    EXPECT_NEAR(psi_constant(q), 1 / std::sqrt(2.0), 1e-12) << n;
  }
}

TEST(PsiConstant, StretchedCone) {
  auto q = QuadricSet::from_real(diag({1, -4}), Vec::Zero(2), 0);
  EXPECT_NEAR(psi_constant(q), std::sqrt(4.0 / 5.0), 1e-12);
}

TEST(PsiConstant, ScaleInvariant) {
  auto a = QuadricSet::from_real(diag({2, 3, -1}), Vec::Zero(3), 0);
  auto b = QuadricSet::from_real(diag({2000, 3000, -1000}), Vec::Zero(3), 0);
  EXPECT_NEAR(psi_constant(a), psi_constant(b), 1e-12);
}

TEST(PsiConstant, NeedsNegativeEigenvalue) {
  EXPECT_EQ(code_of([] { psi_constant(parabola()); }), ErrorCode::NoFullDimRecessionCone);
}

TEST(PsiConstant, MatchesPlanarMaxMin) {
  for (auto M : {diag({1, -1}), diag({1, -4}), diag({5, -0.2})}) {
    auto q = QuadricSet::from_real(M, Vec::Zero(2), 0, vec({0, 1}), 0);
    EXPECT_NEAR(psi_constant(q), psi_grid_2d(q, 10000), 1e-3);
  }
}

TEST(BallShift, Parabola) {
  BallShift s = ball_shift(parabola(), vec({0, 0}), 0.5);
  EXPECT_NEAR(s.theta, 0.75, 1e-12);
  EXPECT_NEAR(s.direction(0), 0.0, 1e-12);
  EXPECT_NEAR(s.direction(1), 1.0, 1e-12);
  Rng rng(11);
  EXPECT_LE(worst_sphere_residual(rng, parabola(), s.theta * s.direction, 0.5, 10000), 1e-12);
}

TEST(BallShift, VanishingRadius) {
  EXPECT_NEAR(ball_shift(parabola(), vec({0, 0}), 1e-9).theta, 0.0, 1e-8);
}

TEST(BallShift, Cone) {
  auto cone = QuadricSet::from_rational(rdiag({1, -1}), rvec({0, 0}), 0);
  BallShift s = ball_shift(cone, vec({0, 0}), 1.0);
  EXPECT_NEAR(s.theta, 1 + std::sqrt(2.0), 1e-12);
  Rng rng(12);
  EXPECT_LE(worst_sphere_residual(rng, cone, s.theta * s.direction, 1.0, 10000), 1e-9);
}

TEST(BallShift, Errors) {
  EXPECT_EQ(code_of([] { ball_shift(unit_disk(), vec({0, 0}), 0.1); }), ErrorCode::NoLargeBalls);
  EXPECT_EQ(code_of([] { ball_shift(parabola(), vec({0, -1}), 0.1); }), ErrorCode::InfeasibleAnchor);
}

TEST(InnerEllipsoid, UnitDiskIsItself) {
  Ellipsoid e = inner_ellipsoid(unit_disk(), vec({1, 0}), Mat::Identity(2, 2));
  EXPECT_NEAR(e.p.norm(), 0.0, 1e-15);
  EXPECT_NEAR(e.r, 1.0, 1e-15);
}

TEST(InnerEllipsoid, ParabolaBall) {
  Ellipsoid e = inner_ellipsoid(parabola(), vec({1, 1}), Mat::Identity(2, 2));
  EXPECT_NEAR(e.p(0), 0.0, 1e-15);
  EXPECT_NEAR(e.p(1), 1.5, 1e-15);
  EXPECT_NEAR(e.r, std::sqrt(5.0) / 2, 1e-15);
  Rng rng(13);
  EXPECT_LE(worst_ellipsoid_residual(rng, parabola(), e, 10000), 1e-12);
}

TEST(InnerEllipsoid, InteriorAnchorGivesPositiveRadius) {
  Vec xhat = vec({0.2, 1});
  Ellipsoid e = inner_ellipsoid(parabola(), xhat, Mat::Identity(2, 2));
  EXPECT_GT(e.r, 0);
  // The anchor always sits on the boundary of the returned ellipsoid.
  EXPECT_NEAR(e.residual(xhat), 0.0, 1e-15);
}

TEST(InnerEllipsoid, RegularizerTooSmall) {
  EXPECT_EQ(code_of([] { inner_ellipsoid(unit_disk(), vec({0, 0}), 0.5 * Mat::Identity(2, 2)); }),
            ErrorCode::InvalidRegularizer);
}

TEST(SocrToQr, UnitDisk) {
  auto q = socr_to_qr(SocrSet::from_rational(rdiag({1, 1}), rvec({0, 0}), rvec({0, 0}), -1));
  EXPECT_EQ(q.M, Mat::Identity(2, 2));
  EXPECT_EQ(q.beta, Vec::Zero(2));
  EXPECT_EQ(q.gamma, -1);
  EXPECT_FALSE(q.branch);
}

TEST(SocrToQr, ParabolaEncoding) {
  // ‖(2x₁, x₂ − 1)‖ ≤ x₂ + 1  ⇔  x₁² ≤ x₂
  auto q = socr_to_qr(SocrSet::from_rational(rdiag({2, 1}), rvec({0, 1}), rvec({0, 1}), -1));
  EXPECT_EQ(q.M, diag({4, 0}));
  EXPECT_EQ(q.beta, vec({0, 2}));
  EXPECT_EQ(q.gamma, 0);
  EXPECT_FALSE(q.branch);
  EXPECT_EQ(classify(q).kind, QuadricKind::Paraboloid);
}

TEST(SocrToQr, ShiftedParabola) {
  // ‖x − (1,3)‖ ≤ x₂ − 1  ⇔  (x₁−1)² + 3² − 1² ≤ 2(3 − 1)x₂
  auto q = socr_to_qr(SocrSet::from_rational(rdiag({1, 1}), rvec({1, 3}), rvec({0, 1}), 1));
  EXPECT_EQ(q.M, diag({1, 0}));
  EXPECT_EQ(q.beta, vec({1, 2}));
  EXPECT_EQ(q.gamma, 9);
  EXPECT_FALSE(q.branch);
}

TEST(SocrToQr, EmptyConeKeepsCut) {
  // ‖x − (0,−3)‖ ≤ x₂ + 1 has the quadric of its mirror set ‖x − (0,−3)‖ ≤ −x₂ − 1.
  auto q = socr_to_qr(SocrSet::from_rational(rdiag({1, 1}), rvec({0, -3}), rvec({0, 1}), -1));
  EXPECT_TRUE(q.branch);
}

TEST(SocrToQr, LorentzKeepsBranch) {
  RatMat A(1, 2);
  A << 1, 0;
  auto q = socr_to_qr(SocrSet::from_rational(A, rvec({0}), rvec({0, 1}), 0));
  ASSERT_TRUE(q.branch);
  EXPECT_EQ(classify(q).kind, QuadricKind::TranslatedCone);
}

TEST(SocrToQr, ZeroNormalNegativeBound) {
  EXPECT_EQ(code_of([] { socr_to_qr(SocrSet::from_rational(rdiag({1, 1}), rvec({0, 0}), rvec({0, 0}), 1)); }),
            ErrorCode::Empty);
}

TEST(QrToEr, UnitDisk) {
  Ellipsoid e = qr_to_er(unit_disk());
  EXPECT_EQ(e.Q, Mat::Identity(2, 2));
  EXPECT_EQ(e.p, Vec::Zero(2));
  EXPECT_EQ(e.r, 1);
}

TEST(QrToEr, StretchedEllipse) {
  const long long N = 10;
  Rational b2 = Rational(N * N) * (Rational(1, 2) + Rational(1, N));
  Rational r = Rational(N) * (Rational(1, 2) - Rational(1, N));
  Rational gamma = b2 * b2 / (N * N) - r * r;
  Ellipsoid e = qr_to_er(QuadricSet::from_rational(rdiag({1, N * N}), rvec({0, b2}), gamma));
  EXPECT_NEAR(e.r, to_double(r), 1e-12);
  EXPECT_NEAR(e.Q(1, 1), double(N), 1e-12);
}

TEST(QrToEr, RandomSpdRadiusTwo) {
  Rng rng(14);
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 3;
    Mat M = random_spd(rng, n);
    Vec beta = Vec::NullaryExpr(n, [&] { return uniform_real(rng, -3, 3); });
    auto q = QuadricSet::from_real(M, beta, beta.dot(M.ldlt().solve(beta)) - 4);
    Ellipsoid e = qr_to_er(q);
    EXPECT_NEAR(e.r, 2.0, 1e-9);
    for (int i = 0; i < 1000; ++i) {
      Vec x = e.center() + uniform_real(rng, 0, 3) * random_unit(rng, n);
      double a = q.form(x), b = e.residual(x);
      if (std::abs(a) > 1e-8 && std::abs(b) > 1e-8) EXPECT_EQ(a <= 0, b <= 0);
    }
  }
}

TEST(QrToEr, Errors) {
  EXPECT_EQ(code_of([] { qr_to_er(parabola()); }), ErrorCode::WrongQuadricClass);
  EXPECT_EQ(code_of([] { qr_to_er(QuadricSet::from_rational(rdiag({1, 1}), rvec({0, 0}), 1)); }),
            ErrorCode::Empty);
}

TEST(SocrToEr, UnitDisk) {
  Ellipsoid e = socr_to_er(SocrSet::from_rational(rdiag({1, 1}), rvec({0, 0}), rvec({0, 0}), -1));
  EXPECT_EQ(e.r, 1);
  EXPECT_EQ(code_of([] { socr_to_er(SocrSet::from_rational(rdiag({2, 1}), rvec({0, 1}), rvec({0, 1}), -1)); }),
            ErrorCode::WrongQuadricClass);
}

TEST(Lineality, Examples) {
  EXPECT_TRUE(check_lineality_trivial(parabola()));
  EXPECT_FALSE(check_lineality_trivial(QuadricSet::from_rational(rdiag({1, 0}), rvec({1, 0}), -1)));
  EXPECT_TRUE(check_lineality_trivial(unit_disk()));
  EXPECT_FALSE(check_lineality_trivial(QuadricSet::from_real(diag({1, 0}), vec({1, 0}), -1)));
}

TEST(Lineality, CylinderIsInvariantAlongFreeAxis) {
  auto q = QuadricSet::from_real(diag({1, 0}), vec({1, 0}), -1);
  for (double t : {-100.0, 0.0, 3.5, 1e6}) EXPECT_DOUBLE_EQ(q.form(vec({0.5, t})), q.form(vec({0.5, 0})));
}

TEST(Membership, ExactIntegerAgreesWithFloat) {
  auto q = QuadricSet::from_rational(rdiag({1, 0}), rvec({0, Rational(1, 2)}), 0);
  IntVec z(2);
  z << 3, 9;
  EXPECT_TRUE(q.contains_integer(z));
  z << 3, 8;
  EXPECT_FALSE(q.contains_integer(z));
}

// Properties

TEST(QuadricProperty, MembershipRoundTrip) {
  Rng rng(101);
  int compared = 0;
  for (int k = 0; k < 500; ++k) {
    const int n = 2 + k % 3;
    SocrSet s = ellipsoid_socr(rng, n);
    QuadricSet q = socr_to_qr(s);
    Ellipsoid e = qr_to_er(q);
    Vec c = e.center();
    for (int i = 0; i < 1000; ++i) {
      Vec y = e.p + e.r * uniform_real(rng, 0, 2) * random_unit(rng, n);
      Vec x = e.Q.lu().solve(y);
      double rs = s.residual(x), rq = q.residual(x), re = e.residual(x);
      const double tol = 1e-8 * (1 + x.norm() + c.norm());
      if (std::abs(rs) <= tol || std::abs(rq) <= tol * (1 + q.M.norm() * (1 + x.squaredNorm())) ||
          std::abs(re) <= tol)
        continue;
      ++compared;
      ASSERT_EQ(rs <= 0, rq <= 0) << k;
      ASSERT_EQ(rs <= 0, re <= 0) << k;
    }
  }
  EXPECT_GT(compared, 490000);
}

TEST(QuadricProperty, ClassifyScaleConsistent) {
  Rng rng(102);
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + k % 3;
    QuadricSet q;
    switch (k % 4) {
      case 0: q = socr_to_qr(ellipsoid_socr(rng, n)); break;
      case 1: q = socr_to_qr(paraboloid_socr(rng, n)); break;
      case 2: q = real_branch(rng, n, false); break;
      default: q = real_branch(rng, n, true); break;
    }
    QuadricKind base = classify(q).kind;
    for (double t : {1e-3, 1e3}) {
      QuadricSet s = q.branch ? QuadricSet::from_real(t * q.M, t * q.beta, t * q.gamma, q.branch->g, q.branch->h)
                              : QuadricSet::from_real(t * q.M, t * q.beta, t * q.gamma);
      EXPECT_EQ(classify(s).kind, base) << k << " t=" << t;
    }
  }
}

TEST(QuadricProperty, BranchSeparation) {
  Rng rng(103);
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + k % 2;
    QuadricSet q = real_branch(rng, n, false);
    QuadricSet bare = QuadricSet::from_real(q.M, q.beta, q.gamma);
    const Vec& g = q.branch->g;
    BranchBounds bb = branch_bounds(bare, g);
    ASSERT_LT(bb.g_Minv_g, 0);
    const double h = 0.5 * (*bb.h_minus + *bb.h_plus);
    EXPECT_TRUE(*branch_bounds(bare, g, h).separates);
    Vec c = *classify(bare).center;
    double qstar = *classify(bare).qstar;
    int above = 0, below = 0;
    for (int i = 0; i < 2000; ++i) {
      Vec w = random_unit(rng, n);
      double wMw = w.dot(q.M * w);
      if (wMw >= -1e-3) continue;
      Vec x = c + std::sqrt(qstar / wMw) * (1 + uniform_real(rng, 0, 2)) * w;
      if (!bare.contains(x)) continue;
      double gap = g.dot(x) - h;
      ASSERT_GT(std::abs(gap), 1e-6) << k;
      (gap > 0 ? above : below)++;
    }
    EXPECT_GT(above, 0) << k;
    EXPECT_GT(below, 0) << k;
  }
}

TEST(QuadricProperty, BallShiftParaboloids) {
  Rng rng(104);
  for (int k = 0; k < 100; ++k) {
    QuadricSet q = real_paraboloid(rng, 2 + k % 3);
    Vec x0 = feasible_point(rng, q);
    double r = uniform_real(rng, 0.05, 3);
    BallShift s = ball_shift(q, x0, r);
    EXPECT_LE(worst_sphere_residual(rng, q, x0 + s.theta * s.direction, r, 10000), 1e-6) << k;
  }
}

TEST(QuadricProperty, BallShiftBranches) {
  Rng rng(105);
  for (int k = 0; k < 100; ++k) {
    QuadricSet q = real_branch(rng, 2 + k % 3, k % 2 == 0);
    Vec x0 = feasible_point(rng, q);
    double r = uniform_real(rng, 0.05, 3);
    BallShift s = ball_shift(q, x0, r);
    EXPECT_LE(worst_sphere_residual(rng, q, x0 + s.theta * s.direction, r, 10000), 1e-6) << k;
  }
}

TEST(QuadricProperty, InnerEllipsoidInside) {
  Rng rng(106);
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 3;
    QuadricSet q;
    switch (k % 3) {
      case 0: q = real_ellipsoid(rng, n); break;
      case 1: q = real_paraboloid(rng, n); break;
      default: q = real_branch(rng, n, false); break;
    }
    Vec xhat = feasible_point(rng, q);
    Eigen::SelfAdjointEigenSolver<Mat> es(q.M);
    double lmax = es.eigenvalues().maxCoeff();
    Mat D = std::sqrt(lmax * uniform_real(rng, 1, 2) + 0.1) * Mat::Identity(n, n);
    Ellipsoid e = inner_ellipsoid(q, xhat, D);
    EXPECT_LE(worst_ellipsoid_residual(rng, q, e, 2000), 1e-6) << k;
  }
}

TEST(QuadricProperty, PsiMatchesPlanarMaxMin) {
  Rng rng(107);
  for (int k = 0; k < 20; ++k) {
    QuadricSet q = real_branch(rng, 2, k % 2 == 0);
    EXPECT_NEAR(psi_constant(q), psi_grid_2d(q, 10000), 1e-3) << k;
  }
}
