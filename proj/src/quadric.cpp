#include "prox/quadric.hpp"

#include <algorithm>
#include <cmath>

namespace prox {

namespace {

constexpr double kRelTol = 1e-9;

struct Spectrum {
  Vec values;   // descending
  Mat vectors;  // matching columns
};

Spectrum spectrum(const Mat& M) {
  Eigen::SelfAdjointEigenSolver<Mat> es(M);
  const auto n = M.rows();
  Spectrum s{Vec(n), Mat(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    s.values(i) = es.eigenvalues()(n - 1 - i);
    s.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return s;
}

bool fits(const Integer& v) {
  static const Integer limit = Integer(1) << 62;
  return v < limit && v > -limit;
}

Integer lcm_int(const Integer& a, const Integer& b) { return a / boost::multiprecision::gcd(a, b) * b; }

void attach_integer_form(ExactQuadric& e) {
  Integer L = 1;
  auto absorb = [&](const Rational& q) { L = lcm_int(L, denominator(q)); };
  for (Eigen::Index i = 0; i < e.M.size(); ++i) absorb(e.M.data()[i]);
  for (Eigen::Index i = 0; i < e.beta.size(); ++i) absorb(e.beta(i));
  absorb(e.gamma);
  auto scaled = [&](const Rational& q) { return numerator(q) * (L / denominator(q)); };
  const auto n = e.M.rows();
  e.M_int.resize(n, n);
  e.beta_int.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Integer v = scaled(e.M(i, j));
      if (!fits(v)) return;
      e.M_int(i, j) = static_cast<long long>(v);
    }
    Integer v = scaled(e.beta(i));
    if (!fits(v)) return;
    e.beta_int(i) = static_cast<long long>(v);
  }
  Integer gv = scaled(e.gamma);
  if (!fits(gv)) return;
  e.gamma_int = static_cast<long long>(gv);
  if (e.g) {
    Integer Lg = denominator(e.h);
    for (Eigen::Index i = 0; i < e.g->size(); ++i) Lg = lcm_int(Lg, denominator((*e.g)(i)));
    e.g_int.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Integer v = numerator((*e.g)(i)) * (Lg / denominator((*e.g)(i)));
      if (!fits(v)) return;
      e.g_int(i) = static_cast<long long>(v);
    }
    Integer hv = numerator(e.h) * (Lg / denominator(e.h));
    if (!fits(hv)) return;
    e.h_int = static_cast<long long>(hv);
  }
  e.has_int = true;
}

double rel_tol(std::initializer_list<double> terms) {
  double s = 1;
  for (double t : terms) s += std::abs(t);
  return kRelTol * s;
}

Rational dot(const RatVec& a, const RatVec& b) {
  Rational s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

void check_dims(const QuadricSet& q) {
  const auto n = q.M.rows();
  if (n < 1 || q.M.cols() != n || q.beta.size() != n)
    throw Error(ErrorCode::InvalidInput, "quadric dimensions inconsistent");
  if ((q.M - q.M.transpose()).cwiseAbs().maxCoeff() > kRelTol * (1 + q.M.cwiseAbs().maxCoeff()))
    throw Error(ErrorCode::InvalidInput, "M is not symmetric");
  if (q.branch) {
    if (q.branch->g.size() != n) throw Error(ErrorCode::InvalidInput, "branch dimension mismatch");
    if (q.branch->g.squaredNorm() == 0) throw Error(ErrorCode::InvalidInput, "branch normal g is zero");
  }
}

// Center M⁻¹β and q* = βᵀM⁻¹β − γ, exactly when possible. Returns the sign of q*
// decided exactly (rational) or by the relative band.
struct CenterData {
  Vec center;
  double qstar = 0;
  int sign = 0;
  double band = 0;
};

CenterData center_data(const QuadricSet& q) {
  CenterData d;
  if (q.exact) {
    auto c = solve_exact(q.exact->M, q.exact->beta);
    if (c) {
      Rational qs = dot(q.exact->beta, *c) - q.exact->gamma;
      d.center = to_double(*c);
      d.qstar = to_double(qs);
      d.sign = qs > 0 ? 1 : (qs < 0 ? -1 : 0);
      d.band = 0;
      return d;
    }
  }
  d.center = q.M.ldlt().solve(q.beta);
  double bc = q.beta.dot(d.center);
  d.qstar = bc - q.gamma;
  d.band = rel_tol({bc, q.gamma});
  d.sign = d.qstar > d.band ? 1 : (d.qstar < -d.band ? -1 : 0);
  return d;
}

// s = xᵀM⁻¹y for a nonsingular M, exactly when both sides are rational.
struct Form {
  double value = 0;
  int sign = 0;
};

Form inverse_form(const QuadricSet& q, const Vec& x, const Vec& y) {
  if (q.exact) {
    RatVec xr = exact_from_double(x), yr = exact_from_double(y);
    if (auto sol = solve_exact(q.exact->M, yr)) {
      Rational v = dot(xr, *sol);
      return {to_double(v), v > 0 ? 1 : (v < 0 ? -1 : 0)};
    }
  }
  Vec sol = q.M.ldlt().solve(y);
  double v = x.dot(sol);
  double band = kRelTol * (1 + x.norm() * sol.norm());
  return {v, v > band ? 1 : (v < -band ? -1 : 0)};
}

bool is_singular(const QuadricSet& q, double lambda_n, double tau) {
  if (q.exact) return det_exact(q.exact->M) == 0;
  return std::abs(lambda_n) <= tau;
}

// Pseudo-inverse solution of Mx = β over the positive eigenspace.
Vec range_solution(const Spectrum& sp, const Vec& rhs, Eigen::Index skip_last) {
  Vec x = Vec::Zero(rhs.size());
  for (Eigen::Index i = 0; i + skip_last < sp.values.size(); ++i)
    x += (sp.vectors.col(i).dot(rhs) / sp.values(i)) * sp.vectors.col(i);
  return x;
}

QuadricClass classify_core(const QuadricSet& q, bool validate_branch);

void check_branch_redundant_psd(const QuadricSet& q, const QuadricClass& cls) {
  const Vec& g = q.branch->g;
  const double h = q.branch->h;
  double lowest = 0;
  if (cls.kind == QuadricKind::Ellipsoid || cls.kind == QuadricKind::Singleton) {
    Form s = inverse_form(q, g, g);
    lowest = g.dot(*cls.center) - std::sqrt(std::max(0.0, *cls.qstar * s.value));
  } else if (cls.kind == QuadricKind::Paraboloid) {
    Vec u = cls.u_n();
    double gu = g.dot(u), bu = q.beta.dot(u);
    if (gu <= kRelTol * g.norm()) throw Error(ErrorCode::AssumptionViolated, "branch cuts the paraboloid");
    Spectrum sp{cls.eigenvalues, cls.eigenvectors};
    double phi = -bu / gu;
    Vec x0 = range_solution(sp, q.beta + phi * g, 1);
    double t = (x0.dot(q.M * x0) - 2 * q.beta.dot(x0) + q.gamma) / (2 * bu);
    lowest = g.dot(x0 + t * u);
  } else {
    return;
  }
  if (lowest < h - rel_tol({lowest, h}))
    throw Error(ErrorCode::AssumptionViolated, "branch inequality cuts a convex quadric");
}

QuadricClass classify_core(const QuadricSet& q, bool validate_branch) {
  check_dims(q);
  if (!check_lineality_trivial(q))
    throw Error(ErrorCode::AssumptionViolated, "set has a nontrivial lineality space");
  const auto n = q.M.rows();
  Spectrum sp = spectrum(q.M);
  QuadricClass cls;
  cls.tau = eigen_tolerance(q.M);
  cls.eigenvalues = sp.values;
  cls.eigenvectors = sp.vectors;
  const double tau = cls.tau;
  const double ln = sp.values(n - 1);
  if (n >= 2 && sp.values(n - 2) <= tau)
    throw Error(ErrorCode::NotAQuadricOfInterest, "more than one nonpositive eigenvalue");
  const bool singular = is_singular(q, ln, tau);
  Eigen::Ref<Vec> un = cls.eigenvectors.col(n - 1);

  if (singular) {
    // Mx = β consistent?
    bool consistent;
    if (q.exact) {
      consistent = solve_exact(q.exact->M, q.exact->beta).has_value();
    } else {
      consistent = std::abs(q.beta.dot(un)) <= tau * (1 + q.beta.norm());
    }
    if (q.beta.dot(un) < 0) un = -un;
    if (!consistent) {
      cls.kind = QuadricKind::Paraboloid;
    } else {
      Vec xh;
      double qhat;
      int sign;
      if (q.exact) {
        RatVec xr = *solve_exact(q.exact->M, q.exact->beta);
        Rational qr = dot(q.exact->beta, xr) - q.exact->gamma;
        xh = to_double(xr);
        qhat = to_double(qr);
        sign = qr > 0 ? 1 : (qr < 0 ? -1 : 0);
      } else {
        xh = range_solution(sp, q.beta, 1);
        double bx = q.beta.dot(xh);
        qhat = bx - q.gamma;
        double band = rel_tol({bx, q.gamma});
        sign = qhat > band ? 1 : (qhat < -band ? -1 : 0);
      }
      cls.qhat = qhat;
      cls.center = xh;
      cls.kind = sign > 0 ? QuadricKind::Cylinder : (sign == 0 ? QuadricKind::Line : QuadricKind::Empty);
    }
    if (validate_branch && q.branch && cls.kind == QuadricKind::Paraboloid) check_branch_redundant_psd(q, cls);
    return cls;
  }

  CenterData cd = center_data(q);
  cls.center = cd.center;
  cls.qstar = cd.qstar;
  if (ln > 0) {
    if (q.beta.dot(un) < 0) un = -un;
    cls.kind = cd.sign > 0 ? QuadricKind::Ellipsoid
                           : (cd.sign == 0 ? QuadricKind::Singleton : QuadricKind::Empty);
    if (validate_branch && q.branch) check_branch_redundant_psd(q, cls);
    return cls;
  }
  cls.kind = cd.sign > 0 ? QuadricKind::OneSheetHyperboloid
                         : (cd.sign == 0 ? QuadricKind::TranslatedCone : QuadricKind::TwoSheetHyperboloid);
  if (q.branch) {
    if (q.branch->g.dot(un) < 0) un = -un;
  } else if (q.beta.dot(un) < 0) {
    un = -un;
  }
  if (validate_branch && q.branch && cls.is_branch_class()) {
    BranchBounds bb = branch_bounds(q, q.branch->g, q.branch->h);
    if (!bb.separates.value_or(false))
      throw Error(ErrorCode::AssumptionViolated, "branch inequality does not separate the two branches");
  }
  return cls;
}

}  // namespace

const char* to_string(QuadricKind kind) {
  switch (kind) {
    case QuadricKind::Ellipsoid: return "Ellipsoid";
    case QuadricKind::Singleton: return "Singleton";
    case QuadricKind::Empty: return "Empty";
    case QuadricKind::Paraboloid: return "Paraboloid";
    case QuadricKind::Cylinder: return "Cylinder";
    case QuadricKind::Line: return "Line";
    case QuadricKind::OneSheetHyperboloid: return "OneSheetHyperboloid";
    case QuadricKind::TranslatedCone: return "TranslatedCone";
    case QuadricKind::TwoSheetHyperboloid: return "TwoSheetHyperboloid";
  }
  return "Unknown";
}

const char* to_string(BranchRegime regime) {
  switch (regime) {
    case BranchRegime::Asymptotic: return "Asymptotic";
    case BranchRegime::BoundedBelowOnPlus: return "BoundedBelowOnPlus";
    case BranchRegime::BoundedBelowOnMinus: return "BoundedBelowOnMinus";
    case BranchRegime::UnboundedBoth: return "UnboundedBoth";
  }
  return "Unknown";
}

double eigen_tolerance(const Mat& M) {
  double norm = M.size() == 0 ? 0 : Eigen::SelfAdjointEigenSolver<Mat>(M, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
  return kRelTol * (1 + norm);
}

QuadricSet QuadricSet::from_rational(const RatMat& M, const RatVec& beta, const Rational& gamma) {
  QuadricSet q;
  q.M = to_double(M);
  q.beta = to_double(beta);
  q.gamma = to_double(gamma);
  ExactQuadric e{M, beta, gamma, std::nullopt, 0};
  attach_integer_form(e);
  q.exact = std::move(e);
  return q;
}

QuadricSet QuadricSet::from_rational(const RatMat& M, const RatVec& beta, const Rational& gamma, const RatVec& g,
                                     const Rational& h) {
  QuadricSet q;
  q.M = to_double(M);
  q.beta = to_double(beta);
  q.gamma = to_double(gamma);
  q.branch = Branch{to_double(g), to_double(h)};
  ExactQuadric e{M, beta, gamma, g, h};
  attach_integer_form(e);
  q.exact = std::move(e);
  return q;
}

QuadricSet QuadricSet::from_real(const Mat& M, const Vec& beta, double gamma) {
  QuadricSet q;
  q.M = M;
  q.beta = beta;
  q.gamma = gamma;
  return q;
}

QuadricSet QuadricSet::from_real(const Mat& M, const Vec& beta, double gamma, const Vec& g, double h) {
  QuadricSet q = from_real(M, beta, gamma);
  q.branch = Branch{g, h};
  return q;
}

QuadricSet QuadricSet::halfspace(const RatVec& g, const Rational& h) {
  const auto n = g.size();
  return from_rational(RatMat::Zero(n, n), RatVec(g / Rational(2)), h);
}

QuadricSet QuadricSet::halfspace_real(const Vec& g, double h) {
  const auto n = g.size();
  return from_real(Mat::Zero(n, n), g / 2, h);
}

double QuadricSet::form(const Vec& x) const { return x.dot(M * x) - 2 * beta.dot(x) + gamma; }

double QuadricSet::residual(const Vec& x) const {
  double r = form(x);
  if (branch) r = std::max(r, branch->h - branch->g.dot(x));
  return r;
}

bool QuadricSet::contains(const Vec& x, double tol) const {
  double quad = x.dot(M * x), lin = 2 * beta.dot(x);
  if (quad - lin + gamma > tol * (1 + std::abs(quad) + std::abs(lin) + std::abs(gamma))) return false;
  if (branch) {
    double gx = branch->g.dot(x);
    if (gx < branch->h - tol * (1 + std::abs(gx) + std::abs(branch->h))) return false;
  }
  return true;
}

bool QuadricSet::contains_integer(const IntVec& z) const {
  if (!exact) return contains(z.cast<double>());
  const auto n = z.size();
  if (exact->has_int) {
    __int128 acc = exact->gamma_int;
    for (Eigen::Index i = 0; i < n; ++i) {
      __int128 row = 0;
      for (Eigen::Index j = 0; j < n; ++j) row += static_cast<__int128>(exact->M_int(i, j)) * z(j);
      acc += (row - 2 * static_cast<__int128>(exact->beta_int(i))) * z(i);
    }
    if (acc > 0) return false;
    if (exact->g) {
      __int128 gx = 0;
      for (Eigen::Index i = 0; i < n; ++i) gx += static_cast<__int128>(exact->g_int(i)) * z(i);
      if (gx < exact->h_int) return false;
    }
    return true;
  }
  RatVec zr = to_rational(z);
  Rational v = dot(zr, RatVec(exact->M * zr)) - 2 * dot(exact->beta, zr) + exact->gamma;
  if (v > 0) return false;
  if (exact->g && dot(*exact->g, zr) < exact->h) return false;
  return true;
}

SocrSet SocrSet::from_rational(const RatMat& A, const RatVec& b, const RatVec& c, const Rational& d) {
  SocrSet s = from_real(to_double(A), to_double(b), to_double(c), to_double(d));
  s.A_exact = A;
  s.b_exact = b;
  s.c_exact = c;
  s.d_exact = d;
  return s;
}

SocrSet SocrSet::from_real(const Mat& A, const Vec& b, const Vec& c, double d) {
  if (A.rows() != b.size() || A.cols() != c.size() || A.cols() < 1)
    throw Error(ErrorCode::InvalidInput, "SOC data dimensions inconsistent");
  SocrSet s;
  s.A = A;
  s.b = b;
  s.c = c;
  s.d = d;
  return s;
}

double SocrSet::residual(const Vec& x) const { return (A * x - b).norm() - (c.dot(x) - d); }

QuadricClass classify(const QuadricSet& q) { return classify_core(q, true); }

BranchBounds branch_bounds(const QuadricSet& q, const Vec& g, std::optional<double> h_query) {
  QuadricClass cls = classify_core(q, false);
  if (!cls.is_branch_class())
    throw Error(ErrorCode::WrongQuadricClass, std::string("branch bounds need a cone or two-sheet hyperboloid, got ") +
                                                  to_string(cls.kind));
  if (g.size() != q.dim() || g.squaredNorm() == 0) throw Error(ErrorCode::InvalidInput, "bad branch normal");
  BranchBounds out;
  Form s = inverse_form(q, g, g);
  out.g_Minv_g = s.value;
  const double gc = g.dot(*cls.center);
  if (s.sign < 0) {
    double half = std::sqrt(std::max(0.0, *cls.qstar * s.value));
    out.h_minus = gc - half;
    out.h_plus = gc + half;
    out.regime = BranchRegime::BoundedBelowOnPlus;
    if (q.branch && inverse_form(q, g, q.branch->g).sign > 0) out.regime = BranchRegime::BoundedBelowOnMinus;
  } else if (s.sign == 0) {
    out.regime = BranchRegime::Asymptotic;
  } else {
    out.regime = BranchRegime::UnboundedBoth;
  }
  if (h_query) {
    const double h = *h_query;
    const double tol = rel_tol({gc, h, out.h_plus.value_or(0)});
    bool sep = false;
    if (cls.kind == QuadricKind::TwoSheetHyperboloid) {
      if (s.sign < 0) sep = h >= *out.h_minus - tol && h <= *out.h_plus + tol;
      if (s.sign == 0) sep = std::abs(h - gc) <= tol;
    } else {
      sep = s.sign < 0 && std::abs(h - gc) <= tol;
    }
    out.separates = sep;
  }
  return out;
}

double psi_constant(const QuadricSet& q) {
  check_dims(q);
  Spectrum sp = spectrum(q.M);
  const auto n = q.M.rows();
  const double tau = eigen_tolerance(q.M);
  const double ln = sp.values(n - 1);
  if (ln >= -tau) throw Error(ErrorCode::NoFullDimRecessionCone, "no negative eigenvalue");
  if (n == 1) return 1.0;
  const double l1 = sp.values(0);
  if (l1 <= tau) throw Error(ErrorCode::NotAQuadricOfInterest, "more than one nonpositive eigenvalue");
  return std::sqrt(-ln / (l1 - ln));
}

BallShift ball_shift(const QuadricSet& q, const Vec& x0, double r) {
  QuadricClass cls = classify_core(q, false);
  if (cls.lambda_n() > cls.tau && cls.kind != QuadricKind::Paraboloid)
    throw Error(ErrorCode::NoLargeBalls, "bounded set");
  if (cls.kind != QuadricKind::Paraboloid && !cls.is_branch_class())
    throw Error(ErrorCode::WrongQuadricClass, std::string("ball shift undefined for ") + to_string(cls.kind));
  if (r < 0) throw Error(ErrorCode::InvalidInput, "negative radius");
  if (!q.contains(x0)) throw Error(ErrorCode::InfeasibleAnchor, "anchor is not in the set");
  const double l1 = cls.lambda_1();
  const double ln = cls.lambda_n();
  Vec u = cls.u_n();
  const double C = r * r * l1 + 2 * r * (q.M * x0 - q.beta).norm();
  BallShift out;
  if (cls.kind == QuadricKind::Paraboloid) {
    const double bu = q.beta.dot(u);
    if (bu <= cls.tau * (1 + q.beta.norm()))
      throw Error(ErrorCode::PreconditionViolated, "beta is orthogonal to the recession direction");
    out.theta = C / (2 * bu);
  } else {
    if (!q.branch) {
      double side = u.dot(x0 - *cls.center);
      if (side < 0 || (side == 0 && q.beta.dot(u) < 0)) u = -u;
    }
    const double B = ln * x0.dot(u) - q.beta.dot(u) + r * std::abs(ln);
    out.theta = std::max(0.0, (-B - std::sqrt(B * B - ln * C)) / ln);
  }
  out.direction = u;
  return out;
}

Ellipsoid inner_ellipsoid(const QuadricSet& q, const Vec& xhat, const Mat& D) {
  check_dims(q);
  const auto n = q.dim();
  if (D.rows() != n || D.cols() != n) throw Error(ErrorCode::InvalidInput, "regularizer dimension mismatch");
  Mat D2 = D * D;
  Mat gap = D2 - q.M;
  double tau = eigen_tolerance(D2) + eigen_tolerance(q.M);
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (gap + gap.transpose())), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tau) throw Error(ErrorCode::InvalidRegularizer, "D^2 - M is not PSD");
  Eigen::SelfAdjointEigenSolver<Mat> ed(D, Eigen::EigenvaluesOnly);
  if (ed.eigenvalues().minCoeff() <= 0) throw Error(ErrorCode::InvalidRegularizer, "D is not positive definite");
  if (!q.contains(xhat)) throw Error(ErrorCode::InfeasibleAnchor, "anchor is not in the set");
  Vec dh = q.M * xhat - q.beta;
  Vec w = D.ldlt().solve(dh);
  return Ellipsoid{D, D * xhat - w, w.norm()};
}

QuadricSet socr_to_qr(const SocrSet& s) {
  QuadricSet q;
  if (s.is_exact()) {
    const RatMat& A = *s.A_exact;
    const RatVec& b = *s.b_exact;
    const RatVec& c = *s.c_exact;
    const Rational& d = *s.d_exact;
    RatMat M = A.transpose() * A - c * c.transpose();
    RatVec beta = A.transpose() * b - c * d;
    Rational gamma = dot(b, b) - d * d;
    q = QuadricSet::from_rational(M, beta, gamma, c, d);
  } else {
    q = QuadricSet::from_real(s.A.transpose() * s.A - s.c * s.c.transpose(), s.A.transpose() * s.b - s.c * s.d,
                              s.b.squaredNorm() - s.d * s.d, s.c, s.d);
  }
  auto drop_branch = [](QuadricSet& set) {
    set.branch.reset();
    if (set.exact) {
      set.exact->g.reset();
      set.exact->h = 0;
      attach_integer_form(*set.exact);
    }
  };
  if (s.c.squaredNorm() == 0) {
    if (s.d > 0) throw Error(ErrorCode::Empty, "norm bounded by a negative constant");
    drop_branch(q);
    return q;
  }
  const double tau = eigen_tolerance(q.M);
  Spectrum sp = spectrum(q.M);
  bool psd = sp.values(q.dim() - 1) >= -tau;
  if (q.exact && psd && sp.values(q.dim() - 1) < 0) psd = det_exact(q.exact->M) == 0;
  if (!psd) return q;
  // cᵀx ≥ d is implied when the quadric is convex, unless the cone part is empty
  // and the quadric is its mirror image; keep the cut in that case.
  QuadricSet bare = q;
  drop_branch(bare);
  try {
    QuadricClass cls = classify_core(bare, false);
    if (cls.kind == QuadricKind::Ellipsoid || cls.kind == QuadricKind::Singleton ||
        cls.kind == QuadricKind::Paraboloid) {
      check_branch_redundant_psd(q, cls);
      return bare;
    }
  } catch (const Error&) {
  }
  return q;
}

Ellipsoid qr_to_er(const QuadricSet& q) {
  check_dims(q);
  Eigen::LLT<Mat> llt(q.M);
  Spectrum sp = spectrum(q.M);
  if (llt.info() != Eigen::Success || sp.values(q.dim() - 1) <= eigen_tolerance(q.M))
    throw Error(ErrorCode::WrongQuadricClass, "M is not positive definite");
  Mat Q = llt.matrixU();
  Vec p = Q.transpose().triangularView<Eigen::Lower>().solve(q.beta);
  CenterData cd = center_data(q);
  if (cd.sign < 0) throw Error(ErrorCode::Empty, "empty ellipsoid");
  double r2 = q.exact ? cd.qstar : p.squaredNorm() - q.gamma;
  return Ellipsoid{Q, p, std::sqrt(std::max(0.0, r2))};
}

Ellipsoid socr_to_er(const SocrSet& s) { return qr_to_er(socr_to_qr(s)); }

QuadricSet er_to_qr(const Ellipsoid& e) {
  return QuadricSet::from_real(e.Q.transpose() * e.Q, e.Q.transpose() * e.p, e.p.squaredNorm() - e.r * e.r);
}

bool check_lineality_trivial(const QuadricSet& q) {
  const auto n = q.dim();
  if (q.exact) {
    RatMat N = nullspace_exact(q.exact->M);
    if (N.cols() == 0) return true;
    const bool has_g = q.exact->g.has_value();
    RatMat C(has_g ? 2 : 1, N.cols());
    C.row(0) = q.exact->beta.transpose() * N;
    if (has_g) C.row(1) = q.exact->g->transpose() * N;
    return rank_exact(C) == N.cols();
  }
  Spectrum sp = spectrum(q.M);
  const double tau = eigen_tolerance(q.M);
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(sp.values(i)) <= tau) null_cols.push_back(i);
  if (null_cols.empty()) return true;
  const auto k = static_cast<Eigen::Index>(null_cols.size());
  Mat C(q.branch ? 2 : 1, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Vec v = sp.vectors.col(null_cols[j]);
    C(0, j) = q.beta.dot(v);
    if (q.branch) C(1, j) = q.branch->g.dot(v);
  }
  Eigen::JacobiSVD<Mat> svd(C);
  double scale = 1 + q.beta.norm() + (q.branch ? q.branch->g.norm() : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tau * scale) ++rank;
  return rank == k;
}

}  // namespace prox
