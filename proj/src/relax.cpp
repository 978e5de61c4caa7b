#include "prox/relax.hpp"

#include <boost/multiprecision/integer.hpp>
#include <cmath>

namespace prox {

namespace {

Rational rdot(const RatVec& a, const RatVec& b) {
  Rational s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

int sign_of(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

void check_objective(const QuadricSet& q, const Vec& alpha) {
  if (alpha.size() != q.dim()) throw Error(ErrorCode::InvalidObjective, "objective dimension mismatch");
  if (alpha.squaredNorm() == 0) throw Error(ErrorCode::InvalidObjective, "zero objective");
}

RelaxationResult unbounded() {
  RelaxationResult r;
  r.status = RelaxStatus::Unbounded;
  return r;
}

RelaxationResult solvable(double value, Vec x) {
  RelaxationResult r;
  r.status = RelaxStatus::Solvable;
  r.value = value;
  r.optimizer = std::move(x);
  r.unique = true;
  return r;
}

// Minimum of αᵀx over the ellipsoid or the kept branch, whose critical point is
// c − √(q*/s)·M⁻¹α with s = αᵀM⁻¹α.
RelaxationResult centered_optimum(const QuadricSet& q, const QuadricClass& cls, const Vec& alpha, double s) {
  if (q.exact) {
    RatVec ae = exact_from_double(alpha);
    auto ce = solve_exact(q.exact->M, q.exact->beta);
    auto we = solve_exact(q.exact->M, ae);
    if (ce && we) {
      Rational se = rdot(ae, *we);
      Rational qs = rdot(q.exact->beta, *ce) - q.exact->gamma;
      Rational ac = rdot(ae, *ce);
      double root = std::sqrt(std::max(0.0, to_double(qs * se)));
      double k = se != 0 ? std::sqrt(std::max(0.0, to_double(qs / se))) : 0.0;
      RelaxationResult r = solvable(to_double(ac) + (se < 0 ? root : -root), to_double(*ce) - k * to_double(*we));
      if (auto rt = sqrt_exact(qs * se)) {
        r.exact_value = ac + (se < 0 ? *rt : Rational(-*rt));
        r.value = to_double(*r.exact_value);
      }
      if (se != 0)
        if (auto ke = sqrt_exact(qs / se)) {
          r.exact_optimizer = RatVec(*ce - *ke * *we);
          r.optimizer = to_double(*r.exact_optimizer);
        }
      return r;
    }
  }
  const Vec& c = *cls.center;
  Vec w = q.M.ldlt().solve(alpha);
  double root = std::sqrt(std::max(0.0, *cls.qstar * s));
  double value = alpha.dot(c) + (s < 0 ? root : -root);
  return solvable(value, c - std::sqrt(std::max(0.0, *cls.qstar / s)) * w);
}

RelaxationResult paraboloid_optimum(const QuadricSet& q, const QuadricClass& cls, const Vec& alpha) {
  const auto n = q.dim();
  if (q.exact) {
    RatVec ae = exact_from_double(alpha);
    RatMat N = nullspace_exact(q.exact->M);
    RatVec u = N.col(0);
    Rational bu = rdot(q.exact->beta, u);
    if (bu < 0) {
      u = -u;
      bu = -bu;
    }
    Rational au = rdot(ae, u);
    if (au <= 0) return unbounded();
    Rational phi = -bu / au;
    auto x0 = solve_exact(q.exact->M, RatVec(q.exact->beta + phi * ae));
    if (!x0) throw Error(ErrorCode::AssumptionViolated, "stationarity system inconsistent");
    Rational f0 = rdot(*x0, RatVec(q.exact->M * *x0)) - 2 * rdot(q.exact->beta, *x0) + q.exact->gamma;
    RatVec x = *x0 + (f0 / (2 * bu)) * u;
    RelaxationResult r = solvable(to_double(rdot(ae, x)), to_double(x));
    r.exact_value = rdot(ae, x);
    r.exact_optimizer = x;
    return r;
  }
  Vec u = cls.u_n();
  const double au = alpha.dot(u);
  if (au <= 1e-9 * alpha.norm()) return unbounded();
  const double bu = q.beta.dot(u);
  const double phi = -bu / au;
  Vec rhs = q.beta + phi * alpha;
  Vec x0 = Vec::Zero(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    x0 += (cls.eigenvectors.col(i).dot(rhs) / cls.eigenvalues(i)) * cls.eigenvectors.col(i);
  Vec x = x0 + (q.form(x0) / (2 * bu)) * u;
  return solvable(alpha.dot(x), x);
}

RelaxationResult branch_optimum(const QuadricSet& q, const QuadricClass& cls, const Vec& alpha) {
  int s_sign;
  double s;
  if (q.exact) {
    RatVec ae = exact_from_double(alpha);
    Rational se = rdot(ae, *solve_exact(q.exact->M, ae));
    s_sign = sign_of(se);
    s = to_double(se);
  } else {
    s = alpha.dot(q.M.ldlt().solve(alpha));
    double band = 1e-9 * (1 + alpha.squaredNorm() / std::abs(cls.lambda_n()));
    s_sign = s > band ? 1 : (s < -band ? -1 : 0);
  }
  if (s_sign > 0 || !q.branch || alpha.dot(cls.u_n()) <= 0) return unbounded();
  if (s_sign < 0) return centered_optimum(q, cls, alpha, s);
  RelaxationResult r;
  const Vec& c = *cls.center;
  r.value = alpha.dot(c);
  r.unique = false;
  if (q.exact)
    if (auto ce = solve_exact(q.exact->M, q.exact->beta)) r.exact_value = rdot(exact_from_double(alpha), *ce);
  if (cls.kind == QuadricKind::TranslatedCone) {
    r.status = RelaxStatus::MultipleOptima;
    r.optimizer = c;
  } else {
    r.status = RelaxStatus::BoundedNotSolvable;
  }
  return r;
}

Integer to_integer(const Rational& v) { return boost::multiprecision::numerator(v); }

long long narrow(const Integer& v) {
  if (boost::multiprecision::abs(v) > Integer(std::numeric_limits<long long>::max()))
    throw Error(ErrorCode::InvalidObjective, "unimodular transform overflows 64 bits");
  return static_cast<long long>(v);
}

bool positive_definite(const RatMat& m) {
  for (Eigen::Index k = 1; k <= m.rows(); ++k)
    if (det_exact(m.topLeftCorner(k, k)) <= 0) return false;
  return true;
}

}  // namespace

const char* to_string(RelaxStatus status) {
  switch (status) {
    case RelaxStatus::Solvable: return "Solvable";
    case RelaxStatus::BoundedNotSolvable: return "BoundedNotSolvable";
    case RelaxStatus::MultipleOptima: return "MultipleOptima";
    case RelaxStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

RelaxationResult solve_relaxation(const QuadricSet& q, const Vec& alpha) {
  check_objective(q, alpha);
  QuadricClass cls = classify(q);
  switch (cls.kind) {
    case QuadricKind::Empty: throw Error(ErrorCode::InfeasibleSet, "empty set");
    case QuadricKind::Ellipsoid:
    case QuadricKind::Singleton: return centered_optimum(q, cls, alpha, alpha.dot(q.M.ldlt().solve(alpha)));
    case QuadricKind::Paraboloid: return paraboloid_optimum(q, cls, alpha);
    case QuadricKind::TranslatedCone:
    case QuadricKind::TwoSheetHyperboloid: return branch_optimum(q, cls, alpha);
    default:
      throw Error(ErrorCode::WrongQuadricClass, std::string("no closed-form relaxation for ") + to_string(cls.kind));
  }
}

RelaxationResult solve_relaxation(const Ellipsoid& e, const Vec& alpha) {
  if (alpha.size() != e.Q.cols()) throw Error(ErrorCode::InvalidObjective, "objective dimension mismatch");
  if (alpha.squaredNorm() == 0) throw Error(ErrorCode::InvalidObjective, "zero objective");
  if (e.r < 0) throw Error(ErrorCode::InfeasibleSet, "negative radius");
  auto lu = e.Q.fullPivLu();
  if (!lu.isInvertible()) throw Error(ErrorCode::WrongQuadricClass, "Q is singular");
  Vec w = e.Q.transpose().fullPivLu().solve(alpha);  // Q⁻ᵀα
  const double wn = w.norm();
  Vec x = lu.solve(Vec(e.p - e.r * w / wn));
  return solvable(alpha.dot(lu.solve(e.p)) - e.r * wn, x);
}

QuadricSet transform_set(const QuadricSet& q, const IntMat& U) {
  Mat Ud = U.cast<double>();
  if (q.exact) {
    RatMat Ur = to_rational(U);
    RatMat M = Ur.transpose() * q.exact->M * Ur;
    RatVec beta = Ur.transpose() * q.exact->beta;
    if (q.exact->g) return QuadricSet::from_rational(M, beta, q.exact->gamma, RatVec(Ur.transpose() * *q.exact->g), q.exact->h);
    return QuadricSet::from_rational(M, beta, q.exact->gamma);
  }
  Mat M = Ud.transpose() * q.M * Ud;
  M = 0.5 * (M + M.transpose());
  if (q.branch) return QuadricSet::from_real(M, Ud.transpose() * q.beta, q.gamma, Ud.transpose() * q.branch->g, q.branch->h);
  return QuadricSet::from_real(M, Ud.transpose() * q.beta, q.gamma);
}

NormalizedInstance normalize_objective(const QuadricSet& q, const RatVec& alpha) {
  const auto n = q.dim();
  if (alpha.size() != n) throw Error(ErrorCode::InvalidObjective, "objective dimension mismatch");
  Integer L = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    Integer d = boost::multiprecision::denominator(alpha(i));
    L = L / boost::multiprecision::gcd(L, d) * d;
  }
  std::vector<Integer> r(n);
  Integer g = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    r[i] = to_integer(alpha(i) * L);
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(r[i]));
  }
  if (g == 0) throw Error(ErrorCode::InvalidObjective, "zero objective");
  for (auto& v : r) v /= g;

  // Column operations on the row vector r, mirrored on V, until r = eₙᵀ.
  std::vector<std::vector<Integer>> V(n, std::vector<Integer>(n, 0));
  for (Eigen::Index i = 0; i < n; ++i) V[i][i] = 1;
  auto col_axpy = [&](Eigen::Index dst, Eigen::Index src, const Integer& m) {
    r[dst] -= m * r[src];
    for (Eigen::Index i = 0; i < n; ++i) V[i][dst] -= m * V[i][src];
  };
  for (;;) {
    Eigen::Index piv = -1;
    int nonzero = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (r[j] == 0) continue;
      ++nonzero;
      if (piv < 0 || boost::multiprecision::abs(r[j]) < boost::multiprecision::abs(r[piv])) piv = j;
    }
    if (nonzero == 1) {
      if (piv != n - 1) {
        std::swap(r[piv], r[n - 1]);
        for (Eigen::Index i = 0; i < n; ++i) std::swap(V[i][piv], V[i][n - 1]);
      }
      if (r[n - 1] < 0) {
        r[n - 1] = -r[n - 1];
        for (Eigen::Index i = 0; i < n; ++i) V[i][n - 1] = -V[i][n - 1];
      }
      break;
    }
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != piv && r[j] != 0) col_axpy(j, piv, r[j] / r[piv]);
  }
  NormalizedInstance out;
  out.U.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out.U(i, j) = narrow(V[i][j]);
  out.scale = Rational(g) / Rational(L);
  out.set = transform_set(q, out.U);
  return out;
}

NormalizedInstance normalize_objective(const QuadricSet& q, const IntVec& alpha) {
  return normalize_objective(q, to_rational(alpha));
}

Vec SliceQuadratic::center(double delta) const {
  if (Mbar.rows() == 0) return Vec(0);
  return Mbar.ldlt().solve(Vec(beta_bar - delta * a));
}

std::optional<RatVec> SliceQuadratic::center_exact(const Rational& delta) const {
  if (!Mbar_exact) return std::nullopt;
  if (Mbar_exact->rows() == 0) return RatVec(0);
  return solve_exact(*Mbar_exact, RatVec(*beta_bar_exact - delta * *a_exact));
}

SliceQuadratic slice_quadratic(const QuadricSet& q) {
  const auto n = q.dim();
  const auto m = n - 1;
  SliceQuadratic s;
  s.Mbar = q.M.topLeftCorner(m, m);
  s.a = q.M.topRightCorner(m, 1);
  s.beta_bar = q.beta.head(m);
  const double a0 = q.M(m, m);
  const double bn = q.beta(m);
  if (q.exact) {
    const RatMat& M = q.exact->M;
    RatMat Mb = M.topLeftCorner(m, m);
    RatVec a = M.topRightCorner(m, 1);
    RatVec bb = q.exact->beta.head(m);
    if (!positive_definite(Mb)) throw Error(ErrorCode::AssumptionViolated, "leading block of M is not positive definite");
    RatVec Mia = m ? *solve_exact(Mb, a) : RatVec(0);
    RatVec Mib = m ? *solve_exact(Mb, bb) : RatVec(0);
    s.q2_exact = rdot(a, Mia) - M(m, m);
    s.q1_exact = 2 * (q.exact->beta(m) - rdot(bb, Mia));
    s.q0_exact = rdot(bb, Mib) - q.exact->gamma;
    s.q2 = to_double(*s.q2_exact);
    s.q1 = to_double(*s.q1_exact);
    s.q0 = to_double(*s.q0_exact);
    s.Mbar_exact = Mb;
    s.a_exact = a;
    s.beta_bar_exact = bb;
    return s;
  }
  if (m > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> es(s.Mbar, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) <= eigen_tolerance(q.M))
      throw Error(ErrorCode::AssumptionViolated, "leading block of M is not positive definite");
  }
  auto ldlt = s.Mbar.ldlt();
  Vec Mia = m ? Vec(ldlt.solve(s.a)) : Vec(0);
  Vec Mib = m ? Vec(ldlt.solve(s.beta_bar)) : Vec(0);
  s.q2 = s.a.dot(Mia) - a0;
  s.q1 = 2 * (bn - s.beta_bar.dot(Mia));
  s.q0 = s.beta_bar.dot(Mib) - q.gamma;
  return s;
}

DeltaInf delta_inf(const QuadricSet& q) {
  const auto n = q.dim();
  QuadricClass cls = classify(q);
  Vec en = Vec::Unit(n, n - 1);
  if (cls.is_branch_class()) {
    // Slices are ellipsoids only when eₙ is interior to the dual cone.
    RelaxationResult r = solve_relaxation(q, en);
    if (r.status == RelaxStatus::Unbounded) throw Error(ErrorCode::Unbounded, "objective unbounded below");
    if (r.status != RelaxStatus::Solvable) return {*r.value, false, r.exact_value};
  } else if (cls.kind == QuadricKind::Empty) {
    throw Error(ErrorCode::InfeasibleSet, "empty set");
  } else if (cls.kind != QuadricKind::Ellipsoid && cls.kind != QuadricKind::Singleton &&
             cls.kind != QuadricKind::Paraboloid) {
    throw Error(ErrorCode::WrongQuadricClass, std::string("delta_inf undefined for ") + to_string(cls.kind));
  }
  SliceQuadratic s = slice_quadratic(q);
  DeltaInf out;
  if (cls.kind == QuadricKind::Paraboloid) {
    if (s.q1_exact) {
      if (*s.q1_exact <= 0) throw Error(ErrorCode::Unbounded, "objective unbounded below");
      out.exact = -*s.q0_exact / *s.q1_exact;
      out.value = to_double(*out.exact);
    } else {
      if (s.q1 <= 0) throw Error(ErrorCode::Unbounded, "objective unbounded below");
      out.value = -s.q0 / s.q1;
    }
    return out;
  }
  // Ellipsoid: smaller root (q₂ < 0). Branch: larger root (q₂ > 0). Both are
  // (−q₁ + √D)/(2q₂).
  const double D = s.q2_exact ? to_double(*s.q1_exact * *s.q1_exact - 4 * *s.q2_exact * *s.q0_exact)
                              : s.q1 * s.q1 - 4 * s.q2 * s.q0;
  const double sq = std::sqrt(std::max(0.0, D));
  out.value = s.q1 > 0 ? 2 * s.q0 / (-s.q1 - sq) : (-s.q1 + sq) / (2 * s.q2);
  if (s.q2_exact) {
    Rational De = *s.q1_exact * *s.q1_exact - 4 * *s.q2_exact * *s.q0_exact;
    if (auto rt = sqrt_exact(De)) {
      out.exact = (-*s.q1_exact + *rt) / (2 * *s.q2_exact);
      out.value = to_double(*out.exact);
    }
  }
  return out;
}

}  // namespace prox
