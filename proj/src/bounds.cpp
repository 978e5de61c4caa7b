#include "prox/bounds.hpp"

#include <cmath>

namespace prox {

namespace {

constexpr double kCeilNudge = 1e-9;

BoundReport report(BoundKind kind, double value, std::string formula, bool rhs_independent) {
  BoundReport r;
  r.kind = kind;
  r.value = value;
  r.formula = std::move(formula);
  r.rhs_independent = rhs_independent;
  return r;
}

double recession_factor(const QuadricSet& q) {
  const double n = static_cast<double>(q.dim());
  return std::sqrt(n) / 2 * (1 + 1 / psi_constant(q));
}

void require_branch(const QuadricSet& q) {
  if (!q.branch) throw Error(ErrorCode::NoFullDimRecessionCone, "no branch selected; recession cone is not convex");
}

CoveringRadius gram_mu(const QuadricSet& q) {
  if (q.exact) return covering_radius_gram(q.exact->M);
  return covering_radius_gram(q.M);
}

BoundReport ellipsoid_prox(const Mat& gram, const CoveringRadius& mu) {
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  BoundReport r = report(BoundKind::Proximity, 2 * mu.upper / std::sqrt(es.eigenvalues()(0)), "prox.ellipsoid", true);
  r.mu_used = mu;
  r.assumptions.push_back("S contains an integer point");
  return r;
}

BoundReport ellipsoid_ig(const Mat& gram, const Vec& alpha, const CoveringRadius& mu) {
  const double w = std::sqrt(std::max(0.0, alpha.dot(gram.ldlt().solve(alpha))));
  BoundReport r = report(BoundKind::IntegralityGap, 2 * w * mu.upper, "ig.ellipsoid", true);
  r.mu_used = mu;
  r.assumptions.push_back("S contains an integer point");
  return r;
}

QuadricClass classify_kind(const QuadricSet& q, std::initializer_list<QuadricKind> allowed, const char* op) {
  QuadricClass cls = classify(q);
  for (QuadricKind k : allowed)
    if (cls.kind == k) return cls;
  throw Error(ErrorCode::WrongQuadricClass, std::string(op) + " undefined for " + to_string(cls.kind));
}

// Roots of q₂δ² + q₁δ + (q₀ − μ²) = 0, (−q₁ + √D)/(2q₂): the smaller one for
// q₂ < 0, the larger one for q₂ > 0.
std::optional<double> level_root(const SliceQuadratic& s, double mu) {
  const double D = s.q1 * s.q1 - 4 * s.q2 * (s.q0 - mu * mu);
  if (D < 0) return std::nullopt;
  return (-s.q1 + std::sqrt(D)) / (2 * s.q2);
}

struct EllipsoidSliceCase {
  bool case1 = false;
  BoundReport sharp, weak;
  std::optional<BoundReport> unrounded;
};

EllipsoidSliceCase ellipsoid_slice_at(const SliceQuadratic& s, double dinf, double mu_case, double mu) {
  const double disc = s.q1 * s.q1 - 4 * s.q2 * s.q0;
  const double peak = disc / (-4 * s.q2);
  EllipsoidSliceCase out;
  out.case1 = peak < mu_case * mu_case - s.q2 / 4;
  if (out.case1) {
    out.sharp = report(BoundKind::IntegralityGap, std::sqrt(std::max(0.0, disc)) / (-s.q2), "ig.slice.ellipsoid.case1",
                       false);
    out.weak = report(BoundKind::IntegralityGap, 2 * std::sqrt(mu * mu / (-s.q2) + 0.25),
                      "ig.slice.ellipsoid.case1.weak", true);
    return out;
  }
  const double d1 = *level_root(s, mu);
  out.sharp = report(BoundKind::IntegralityGap, ceil_nudged(d1) - dinf, "ig.slice.ellipsoid.case2", false);
  out.unrounded = report(BoundKind::IntegralityGap, d1 + 1 - dinf, "ig.slice.ellipsoid.case2.unrounded", false);
  out.weak = report(BoundKind::IntegralityGap, mu / std::sqrt(-s.q2) + 1, "ig.slice.ellipsoid.case2.weak", true);
  return out;
}

void attach_mu(std::vector<BoundReport>& reports, const CoveringRadius& mu) {
  for (auto& r : reports) {
    r.mu_used = mu;
    r.assumptions.push_back("objective e_n; unique relaxation optimum");
  }
}

}  // namespace

const char* to_string(BoundKind kind) {
  return kind == BoundKind::Proximity ? "Proximity" : "IntegralityGap";
}

double ceil_nudged(double x) { return std::ceil(x - kCeilNudge); }

BoundReport prox_bound_full_dim_cone(const QuadricSet& q) {
  require_branch(q);
  BoundReport r = report(BoundKind::Proximity, recession_factor(q), "prox.cone", true);
  r.assumptions.push_back("recession cone full-dimensional");
  return r;
}

BoundReport ig_bound_full_dim_cone(const QuadricSet& q, const Vec& alpha) {
  BoundReport r = prox_bound_full_dim_cone(q);
  r.kind = BoundKind::IntegralityGap;
  r.value *= alpha.norm();
  r.formula = "ig.cone";
  return r;
}

BoundReport prox_bound_hyperboloid(const QuadricSet& q) {
  classify_kind(q, {QuadricKind::TwoSheetHyperboloid, QuadricKind::TranslatedCone}, "hyperboloid bound");
  require_branch(q);
  return report(BoundKind::Proximity, recession_factor(q), "prox.hyperboloid", true);
}

BoundReport ig_bound_hyperboloid(const QuadricSet& q, const Vec& alpha) {
  BoundReport r = prox_bound_hyperboloid(q);
  r.kind = BoundKind::IntegralityGap;
  r.value *= alpha.norm();
  r.formula = "ig.hyperboloid";
  return r;
}

BoundReport prox_bound_ellipsoid(const Ellipsoid& e, std::optional<CoveringRadius> mu) {
  Mat G = e.Q.transpose() * e.Q;
  return ellipsoid_prox(G, mu ? *mu : covering_radius_gram(G));
}

BoundReport ig_bound_ellipsoid(const Ellipsoid& e, const Vec& alpha, std::optional<CoveringRadius> mu) {
  Mat G = e.Q.transpose() * e.Q;
  return ellipsoid_ig(G, alpha, mu ? *mu : covering_radius_gram(G));
}

BoundReport prox_bound_ellipsoid(const QuadricSet& q, std::optional<CoveringRadius> mu) {
  classify_kind(q, {QuadricKind::Ellipsoid, QuadricKind::Singleton}, "ellipsoid bound");
  return ellipsoid_prox(q.M, mu ? *mu : gram_mu(q));
}

BoundReport ig_bound_ellipsoid(const QuadricSet& q, const Vec& alpha, std::optional<CoveringRadius> mu) {
  classify_kind(q, {QuadricKind::Ellipsoid, QuadricKind::Singleton}, "ellipsoid bound");
  return ellipsoid_ig(q.M, alpha, mu ? *mu : gram_mu(q));
}

BoundReport prox_bound_paraboloid(const QuadricSet& q, const Vec& xhat) {
  QuadricClass cls = classify_kind(q, {QuadricKind::Paraboloid}, "paraboloid bound");
  const double half = std::sqrt(static_cast<double>(q.dim())) / 2;
  const double tangent = (q.M * xhat - q.beta).norm();
  if (tangent >= cls.lambda_1() * half) return report(BoundKind::Proximity, 2 * half, "prox.paraboloid.tangent", true);
  BallShift shift = ball_shift(q, xhat, half);
  BoundReport r = report(BoundKind::Proximity, half + shift.theta, "prox.paraboloid.theta-relaxed", false);
  r.assumptions.push_back("anchor on the boundary");
  return r;
}

BoundReport ig_bound_paraboloid(const QuadricSet& q, const Vec& alpha) {
  RelaxationResult rel = solve_relaxation(q, alpha);
  if (rel.status != RelaxStatus::Solvable) throw Error(ErrorCode::Unbounded, "relaxation has no optimizer");
  BoundReport r = prox_bound_paraboloid(q, *rel.optimizer);
  r.kind = BoundKind::IntegralityGap;
  r.value *= alpha.norm();
  r.formula = r.formula == "prox.paraboloid.tangent" ? "ig.paraboloid.tangent" : "ig.paraboloid.theta-relaxed";
  return r;
}

std::optional<BoundReport> ig_bound_paraboloid_large_angle(const QuadricSet& q, const Vec& alpha) {
  QuadricClass cls = classify_kind(q, {QuadricKind::Paraboloid}, "large-angle bound");
  const Vec u = cls.u_n();
  const double ua = u.dot(alpha);
  if (ua <= 0) return std::nullopt;
  RelaxationResult rel = solve_relaxation(q, alpha);
  if (rel.status != RelaxStatus::Solvable || !rel.unique) return std::nullopt;
  const double n = static_cast<double>(q.dim());
  if (ua / alpha.norm() > u.dot(q.beta) / (cls.lambda_1() * std::sqrt(n) / 2)) return std::nullopt;
  return report(BoundKind::IntegralityGap, alpha.norm() * std::sqrt(n), "ig.paraboloid.large-angle", true);
}

SliceCoefficients slice_coefficients(const QuadricSet& normalized) {
  SliceCoefficients out;
  out.quad = slice_quadratic(normalized);
  const auto m = out.quad.Mbar.rows();
  if (m == 0) {
    out.barQ = Mat(0, 0);
    out.mu_barQ = CoveringRadius{0, 0, true, CoveringMethod::OrthogonalBox};
    return out;
  }
  out.barQ = out.quad.Mbar.llt().matrixU();
  out.mu_barQ = out.quad.Mbar_exact ? covering_radius_gram(*out.quad.Mbar_exact) : covering_radius_gram(out.quad.Mbar);
  return out;
}

std::vector<BoundReport> ig_bound_slice(const QuadricSet& normalized, std::optional<CoveringRadius> mu_in) {
  QuadricClass cls = classify(normalized);
  DeltaInf dinf = delta_inf(normalized);
  if (!dinf.unique) throw Error(ErrorCode::AssumptionViolated, "relaxation optimum is not unique");
  SliceCoefficients sc = slice_coefficients(normalized);
  const CoveringRadius mu = mu_in ? *mu_in : sc.mu_barQ;
  const SliceQuadratic& s = sc.quad;
  const double m = mu.upper;
  std::vector<BoundReport> out;
  switch (cls.kind) {
    case QuadricKind::Ellipsoid:
    case QuadricKind::Singleton: {
      EllipsoidSliceCase hi = ellipsoid_slice_at(s, dinf.value, mu.upper, m);
      EllipsoidSliceCase lo = ellipsoid_slice_at(s, dinf.value, mu.lower, m);
      if (hi.case1 == lo.case1) {
        out = {hi.sharp, hi.weak};
        if (hi.unrounded) out.push_back(*hi.unrounded);
      } else {
        // Dispatch is ambiguous inside the bracket: report the larger of each form.
        EllipsoidSliceCase c1 = hi.case1 ? hi : lo;
        out = {c1.sharp, c1.weak};
        if (level_root(s, m)) {
          const double d1 = *level_root(s, m);
          BoundReport sharp2 = report(BoundKind::IntegralityGap, ceil_nudged(d1) - dinf.value,
                                      "ig.slice.ellipsoid.case2", false);
          BoundReport weak2 =
              report(BoundKind::IntegralityGap, m / std::sqrt(-s.q2) + 1, "ig.slice.ellipsoid.case2.weak", true);
          if (sharp2.value > out[0].value) out[0] = sharp2;
          if (weak2.value > out[1].value) out[1] = weak2;
        }
      }
      break;
    }
    case QuadricKind::Paraboloid:
      if (s.q1_exact) {
        const Rational mu2 = exact_from_double(m) * exact_from_double(m);
        const Rational q0q1 = *s.q0_exact / *s.q1_exact;
        out.push_back(report(BoundKind::IntegralityGap, to_double(Rational(ceil_div(mu2 / *s.q1_exact - q0q1)) + q0q1),
                             "ig.slice.paraboloid", false));
        out.push_back(
            report(BoundKind::IntegralityGap, to_double(mu2 / *s.q1_exact + 1), "ig.slice.paraboloid.weak", false));
      } else {
        out.push_back(report(BoundKind::IntegralityGap, ceil_nudged((m * m - s.q0) / s.q1) + s.q0 / s.q1,
                             "ig.slice.paraboloid", false));
        out.push_back(report(BoundKind::IntegralityGap, m * m / s.q1 + 1, "ig.slice.paraboloid.weak", false));
      }
      break;
    case QuadricKind::TwoSheetHyperboloid:
    case QuadricKind::TranslatedCone: {
      const double d2 = *level_root(s, m);
      out.push_back(report(BoundKind::IntegralityGap, ceil_nudged(d2) - dinf.value, "ig.slice.hyperboloid", false));
      out.push_back(report(BoundKind::IntegralityGap, m / std::sqrt(s.q2) + 1, "ig.slice.hyperboloid.weak", true));
      break;
    }
    default:
      throw Error(ErrorCode::WrongQuadricClass, std::string("slice bound undefined for ") + to_string(cls.kind));
  }
  attach_mu(out, mu);
  return out;
}

BoundReport ig_bound_multiple_optima(const QuadricSet& normalized) {
  QuadricClass cls = classify(normalized);
  if (!cls.is_branch_class() || !normalized.branch)
    throw Error(ErrorCode::WrongQuadricClass, std::string("multiple-optima bound undefined for ") + to_string(cls.kind));
  if (delta_inf(normalized).unique) throw Error(ErrorCode::PreconditionViolated, "relaxation optimum is unique");
  BoundReport r = report(BoundKind::IntegralityGap, 1, "ig.multiple-optima", true);
  r.assumptions.push_back("objective e_n along the asymptotic boundary");
  return r;
}

std::vector<BoundReport> ig_bound_slice(const QuadricSet& q, const IntVec& alpha) {
  NormalizedInstance ni = normalize_objective(q, alpha);
  std::vector<BoundReport> out = ig_bound_slice(ni.set);
  const double scale = to_double(ni.scale);
  for (auto& r : out) r.value *= scale;
  return out;
}

TwoSphereGeometry two_sphere_geometry(const TwoSphereInstance& t) {
  if (!(t.p > 0) || t.r1 < 0 || t.r2 < 0 || t.r1 + t.r2 < t.p)
    throw Error(ErrorCode::InfeasibleSet, "two-sphere geometry needs r1 + r2 >= p > 0");
  auto lens_height = [&](double c) {
    const double s = t.r1 + t.r2;
    const double d = t.r1 - t.r2;
    return std::sqrt(std::max(0.0, (s * s - c * c) * (c * c - d * d))) / (2 * c);
  };
  TwoSphereGeometry g;
  g.W = (t.r1 * t.r1 - t.r2 * t.r2 + t.p * t.p) / (2 * t.p);
  // The rim bounds |xⱼ| only when it lies between the centers; otherwise the
  // equator of the smaller ball is inside the other one.
  g.H = g.W > t.p ? t.r2 : (g.W < 0 ? t.r1 : lens_height(t.p));
  const double nu = std::sqrt(static_cast<double>(t.n - 1));
  if (t.r1 + t.r2 >= t.p + nu) g.h = lens_height(t.p + nu);
  return g;
}

double two_sphere_lemma_max(double kappa, double nu) {
  if (!(kappa > nu) || !(nu > 0)) throw Error(ErrorCode::BoundNotApplicable, "needs kappa > nu > 0");
  return nu / 2 * std::sqrt((kappa + 1) / (kappa - 1));
}

namespace {

// min over j* ≥ 2 of ‖α without j*‖·ν + |α_j*|·height.
BoundReport two_sphere_min(const TwoSphereInstance& t, double height, const char* formula) {
  const double nu = std::sqrt(static_cast<double>(t.n - 1));
  BoundReport best;
  for (int j = 1; j < t.n; ++j) {
    const double rest = std::sqrt(std::max(0.0, t.alpha.squaredNorm() - t.alpha(j) * t.alpha(j)));
    const double value = rest * nu + std::abs(t.alpha(j)) * height;
    if (j == 1 || value < best.value) {
      best = report(BoundKind::IntegralityGap, value, formula, false);
      best.j_star = j + 1;
    }
  }
  best.kappa = t.kappa();
  return best;
}

double two_sphere_lemma_checked(const TwoSphereInstance& t) {
  two_sphere_geometry(t);
  if (t.alpha.size() != t.n) throw Error(ErrorCode::InvalidObjective, "objective dimension mismatch");
  const double nu = std::sqrt(static_cast<double>(t.n - 1));
  if (t.r1 + t.r2 - t.p < nu) throw Error(ErrorCode::BoundNotApplicable, "needs r1 + r2 - p >= sqrt(n-1)");
  if (!(t.kappa() > nu)) throw Error(ErrorCode::BoundNotApplicable, "needs kappa > sqrt(n-1)");
  return two_sphere_lemma_max(t.kappa(), nu);
}

}  // namespace

BoundReport ig_bound_two_sphere(const TwoSphereInstance& t) {
  return two_sphere_min(t, ceil_nudged(two_sphere_lemma_checked(t)), "ig.two-sphere");
}

BoundReport ig_bound_two_sphere_corrected(const TwoSphereInstance& t) {
  BoundReport r = two_sphere_min(t, two_sphere_lemma_checked(t) + 1, "ig.two-sphere.corrected");
  r.assumptions.push_back("height step from the relaxed optimum to the rounded-down level h is below H - h + 1");
  return r;
}

RelaxationResult solve_two_sphere_relaxation(const TwoSphereInstance& t) {
  TwoSphereGeometry g = two_sphere_geometry(t);
  if (t.alpha.size() != t.n || t.alpha.squaredNorm() == 0) throw Error(ErrorCode::InvalidObjective, "bad objective");
  const Vec a = t.alpha.normalized();
  const Vec e1 = Vec::Unit(t.n, 0);
  const double slack = 1e-12 * (1 + t.r1 + t.r2 + t.p);
  std::optional<Vec> best;
  auto offer = [&](const Vec& x) {
    if (!best || t.alpha.dot(x) < t.alpha.dot(*best)) best = x;
  };
  Vec x1 = -t.r1 * a;
  if ((x1 - t.p * e1).norm() <= t.r2 + slack) offer(x1);
  Vec x2 = t.p * e1 - t.r2 * a;
  if (x2.norm() <= t.r1 + slack) offer(x2);
  if (std::abs(t.r1 - t.r2) <= t.p) {
    Vec rim = Vec::Zero(t.n);
    rim(0) = g.W;
    Vec tail = t.alpha.tail(t.n - 1);
    if (tail.squaredNorm() > 0) rim.tail(t.n - 1) = -g.H * tail.normalized();
    offer(rim);
  }
  RelaxationResult r;
  r.status = RelaxStatus::Solvable;
  r.value = t.alpha.dot(*best);
  r.optimizer = *best;
  r.unique = true;
  return r;
}

std::vector<QuadricSet> two_sphere_sets(const TwoSphereInstance& t) {
  const auto n = static_cast<Eigen::Index>(t.n);
  RatVec zero = RatVec::Zero(n);
  RatVec shift = RatVec::Zero(n);
  const Rational p = exact_from_double(t.p);
  const Rational r1 = exact_from_double(t.r1);
  const Rational r2 = exact_from_double(t.r2);
  shift(0) = p;
  return {QuadricSet::from_rational(RatMat::Identity(n, n), zero, -r1 * r1),
          QuadricSet::from_rational(RatMat::Identity(n, n), shift, p * p - r2 * r2)};
}

std::vector<BoundReport> all_bounds(const QuadricSet& q, const IntVec& alpha) {
  const Vec a = alpha.cast<double>();
  QuadricClass cls = classify(q);
  std::vector<BoundReport> out;
  auto attempt = [&](auto&& f) {
    try {
      f();
    } catch (const Error&) {
    }
  };
  switch (cls.kind) {
    case QuadricKind::Ellipsoid:
    case QuadricKind::Singleton:
      out.push_back(prox_bound_ellipsoid(q));
      out.push_back(ig_bound_ellipsoid(q, a));
      attempt([&] { for (auto& r : ig_bound_slice(q, alpha)) out.push_back(r); });
      break;
    case QuadricKind::Paraboloid:
      attempt([&] {
        RelaxationResult rel = solve_relaxation(q, a);
        if (rel.status == RelaxStatus::Solvable) out.push_back(prox_bound_paraboloid(q, *rel.optimizer));
      });
      attempt([&] { out.push_back(ig_bound_paraboloid(q, a)); });
      attempt([&] {
        if (auto r = ig_bound_paraboloid_large_angle(q, a)) out.push_back(*r);
      });
      attempt([&] { for (auto& r : ig_bound_slice(q, alpha)) out.push_back(r); });
      break;
    case QuadricKind::TwoSheetHyperboloid:
    case QuadricKind::TranslatedCone:
      attempt([&] { out.push_back(prox_bound_full_dim_cone(q)); });
      attempt([&] { out.push_back(ig_bound_full_dim_cone(q, a)); });
      attempt([&] { out.push_back(prox_bound_hyperboloid(q)); });
      attempt([&] { out.push_back(ig_bound_hyperboloid(q, a)); });
      attempt([&] {
        NormalizedInstance ni = normalize_objective(q, alpha);
        if (delta_inf(ni.set).unique) {
          for (auto& r : ig_bound_slice(ni.set)) {
            r.value *= to_double(ni.scale);
            out.push_back(r);
          }
        } else {
          BoundReport r = ig_bound_multiple_optima(ni.set);
          r.value *= to_double(ni.scale);
          out.push_back(r);
        }
      });
      break;
    default:
      throw Error(ErrorCode::WrongQuadricClass, std::string("no bounds for ") + to_string(cls.kind));
  }
  return out;
}

}  // namespace prox
