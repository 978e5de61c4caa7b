#include "prox/oracle.hpp"

#include <cmath>
#include <cstdlib>

#include "prox/lattice.hpp"
#include "prox/relax.hpp"

namespace prox {

namespace {

constexpr std::uint64_t kDefaultBudget = 10'000'000;

struct Budget {
  std::uint64_t limit;
  std::uint64_t used = 0;
  bool exhausted = false;
  bool spend() {
    if (++used > limit) exhausted = true;
    return !exhausted;
  }
};

__int128 objective(const IntVec& alpha, const IntVec& z) {
  __int128 s = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i) s += static_cast<__int128>(alpha(i)) * z(i);
  return s;
}

Integer to_integer(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  Integer out = static_cast<std::uint64_t>(u >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(u);
  return neg ? Integer(-out) : out;
}

// Best point so far: smallest objective, then lexicographically smallest.
struct Incumbent {
  std::optional<IntVec> x;
  __int128 value = 0;
  void offer(const IntVec& z, __int128 v) {
    if (!x || v < value || (v == value && lex_less(z, *x))) {
      x = z;
      value = v;
    }
  }
};

struct BoundedMember {
  Mat M;
  Vec center;
  double qstar = 0;
  IntBox box;
};

std::optional<BoundedMember> bounded_member(const std::vector<QuadricSet>& sets) {
  std::optional<BoundedMember> best;
  double best_volume = 0;
  for (const auto& q : sets) {
    QuadricClass cls;
    try {
      cls = classify(q);
    } catch (const Error&) {
      continue;
    }
    if (cls.kind == QuadricKind::Empty) throw Error(ErrorCode::InfeasibleSet, "a member set is empty");
    if (cls.kind != QuadricKind::Ellipsoid && cls.kind != QuadricKind::Singleton) continue;
    const auto n = q.dim();
    BoundedMember m;
    m.M = q.M;
    m.center = *cls.center;
    m.qstar = std::max(0.0, *cls.qstar);
    Mat Minv = q.M.inverse();
    m.box.lo.resize(n);
    m.box.hi.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double half = std::sqrt(m.qstar * Minv(i, i));
      m.box.lo(i) = static_cast<long long>(std::floor(m.center(i) - half)) - 1;
      m.box.hi(i) = static_cast<long long>(std::ceil(m.center(i) + half)) + 1;
    }
    const double volume = std::pow(m.qstar, 0.5 * static_cast<double>(n)) / std::sqrt(q.M.determinant());
    if (!best || volume < best_volume) {
      best = m;
      best_volume = volume;
    }
  }
  return best;
}

double enumeration_radius2(double r2) { return r2 + 1e-9 * (1 + std::abs(r2)); }

IpSolution finish(Incumbent& inc, const Budget& budget, std::string certificate) {
  IpSolution out;
  out.points_enumerated = budget.used;
  out.certificate = std::move(certificate);
  if (budget.exhausted) {
    out.status = IpStatus::BoxTruncated;
    out.certificate += "; budget exhausted, incumbent is not certified";
  } else {
    out.status = inc.x ? IpStatus::Optimal : IpStatus::Infeasible;
  }
  if (inc.x) {
    out.optimizer = inc.x;
    out.value = to_integer(inc.value);
  }
  return out;
}

IpSolution solve_in_box(const IpProblem& p, const IntBox& box, Budget& budget, std::string certificate) {
  const auto n = p.alpha.size();
  Incumbent inc;
  IntVec z = box.lo;
  bool empty = false;
  for (Eigen::Index i = 0; i < n; ++i) empty |= box.lo(i) > box.hi(i);
  while (!empty) {
    if (!budget.spend()) break;
    if (contains_integer(p.sets, z)) inc.offer(z, objective(p.alpha, z));
    Eigen::Index k = 0;
    while (k < n && z(k) == box.hi(k)) z(k) = box.lo(k), ++k;
    if (k == n) break;
    ++z(k);
  }
  IpSolution out = finish(inc, budget, std::move(certificate));
  out.box = box;
  return out;
}

IpSolution solve_bounded(const IpProblem& p, const BoundedMember& m, Budget& budget) {
  Incumbent inc;
  enumerate_ellipsoid(m.M, m.center, enumeration_radius2(m.qstar), [&](const IntVec& z) {
    if (!budget.spend()) return false;
    if (contains_integer(p.sets, z)) inc.offer(z, objective(p.alpha, z));
    return true;
  });
  IpSolution out = finish(inc, budget, "all integer points of a bounded member enumerated");
  out.box = m.box;
  return out;
}

// Scans the objective levels δ = ⌈δ_inf⌉, ⌈δ_inf⌉+1, … of a member normalized
// to minimize yₙ; the first level holding a feasible point is optimal.
std::optional<IpSolution> solve_by_levels(const IpProblem& p, Budget& budget) {
  const auto n = p.alpha.size();
  for (std::size_t k = 0; k < p.sets.size(); ++k) {
    NormalizedInstance ni;
    SliceQuadratic s;
    DeltaInf dinf;
    try {
      ni = normalize_objective(p.sets[k], p.alpha);
      QuadricClass cls = classify(ni.set);
      if (cls.kind != QuadricKind::Paraboloid && !cls.is_branch_class()) continue;
      dinf = delta_inf(ni.set);
      if (!dinf.unique) continue;
      s = slice_quadratic(ni.set);
    } catch (const Error&) {
      continue;
    }
    long long delta = dinf.exact ? static_cast<long long>(ceil_div(*dinf.exact))
                                 : static_cast<long long>(std::ceil(dinf.value - 1e-6));
    const long long first = delta;
    for (;; ++delta) {
      if (!budget.spend()) break;
      Vec center;
      double r2;
      if (s.q2_exact) {
        const Rational d(delta);
        center = to_double(*s.center_exact(d));
        r2 = to_double((*s.q2_exact * d + *s.q1_exact) * d + *s.q0_exact);
      } else {
        center = s.center(static_cast<double>(delta));
        r2 = s.radius2(static_cast<double>(delta));
      }
      Incumbent inc;
      IntVec y(n);
      y(n - 1) = delta;
      auto visit = [&](const IntVec& ybar) {
        if (!budget.spend()) return false;
        y.head(n - 1) = ybar;
        IntVec x = ni.U * y;
        if (contains_integer(p.sets, x)) inc.offer(x, objective(p.alpha, x));
        return true;
      };
      if (n == 1) {
        if (r2 >= -1e-9) visit(IntVec(0));
      } else {
        enumerate_ellipsoid(s.Mbar, center, enumeration_radius2(r2), visit);
      }
      if (inc.x || budget.exhausted) {
        return finish(inc, budget,
                      "objective levels " + std::to_string(first) + ".." + std::to_string(delta) + " of member " +
                          std::to_string(k) + " scanned in order");
      }
    }
    Incumbent none;
    return finish(none, budget, "level scan of member " + std::to_string(k));
  }
  return std::nullopt;
}

}  // namespace

IntBox IntBox::inflated(long long margin) const {
  IntBox b{lo, hi};
  b.lo.array() -= margin;
  b.hi.array() += margin;
  return b;
}

const char* to_string(IpStatus status) {
  switch (status) {
    case IpStatus::Optimal: return "Optimal";
    case IpStatus::Infeasible: return "Infeasible";
    case IpStatus::BoxTruncated: return "BoxTruncated";
  }
  return "?";
}

bool contains_integer(const std::vector<QuadricSet>& sets, const IntVec& z) {
  for (const auto& q : sets)
    if (!q.contains_integer(z)) return false;
  return true;
}

IpProblem make_problem(const std::vector<QuadricSet>& sets, const IntVec& alpha) { return IpProblem{sets, alpha, {}}; }

IpProblem make_problem(const TwoSphereInstance& t, const IntVec& alpha) {
  return IpProblem{two_sphere_sets(t), alpha, {}};
}

IpProblem make_problem(const Ellipsoid& e, const IntVec& alpha) { return IpProblem{{er_to_qr(e)}, alpha, {}}; }

std::uint64_t oracle_budget() {
  if (const char* env = std::getenv("PROX_ORACLE_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return kDefaultBudget;
}

IpSolution solve_ip_exact(const IpProblem& p, std::uint64_t budget_limit) {
  if (p.sets.empty()) throw Error(ErrorCode::InvalidInput, "no constraint sets");
  const auto n = p.alpha.size();
  if (n == 0 || p.alpha.isZero()) throw Error(ErrorCode::InvalidObjective, "zero objective");
  for (const auto& q : p.sets)
    if (q.dim() != n) throw Error(ErrorCode::InvalidInput, "set dimension does not match the objective");
  Budget budget{budget_limit};
  if (p.box) return solve_in_box(p, *p.box, budget, "explicit box");
  std::optional<BoundedMember> m;
  try {
    m = bounded_member(p.sets);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InfeasibleSet) throw;
    IpSolution out;
    out.certificate = "a member set has no real points";
    return out;
  }
  if (m) return solve_bounded(p, *m, budget);
  if (auto s = solve_by_levels(p, budget)) return *s;
  throw Error(ErrorCode::CannotCertifyBox, "no bounded member and no member with bounded objective levels");
}

ProximityResult proximity_exact(const std::vector<QuadricSet>& sets, const Vec& xhat, std::uint64_t budget_limit) {
  if (sets.empty()) throw Error(ErrorCode::InvalidInput, "no constraint sets");
  const auto n = xhat.size();
  std::optional<BoundedMember> m;
  try {
    m = bounded_member(sets);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InfeasibleSet) throw;
    return ProximityResult{};
  }
  // Radius at which the ball around x̂ covers the bounded member's box.
  std::optional<double> cover;
  if (m) {
    double s = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double far = std::max(std::abs(xhat(i) - m->box.lo(i)), std::abs(m->box.hi(i) - xhat(i)));
      s += far * far;
    }
    cover = std::sqrt(s);
  }
  Budget budget{budget_limit};
  const Mat I = Mat::Identity(n, n);
  for (double R = 1;; R *= 2) {
    std::optional<IntVec> best;
    double best_d2 = 0;
    enumerate_ellipsoid(I, xhat, R * R, [&](const IntVec& z) {
      if (!budget.spend()) return false;
      if (!contains_integer(sets, z)) return true;
      const double d2 = (z.cast<double>() - xhat).squaredNorm();
      if (!best || d2 < best_d2 - 1e-12 || (std::abs(d2 - best_d2) <= 1e-12 && lex_less(z, *best))) {
        best = z;
        best_d2 = d2;
      }
      return true;
    });
    ProximityResult out;
    out.points_enumerated = budget.used;
    if (budget.exhausted) {
      out.status = IpStatus::BoxTruncated;
      out.point = best;
      if (best) out.distance = std::sqrt(best_d2);
      return out;
    }
    if (best) {
      out.status = IpStatus::Optimal;
      out.point = best;
      out.distance = std::sqrt(best_d2);
      return out;
    }
    if (cover && R >= *cover) {
      out.status = IpStatus::Infeasible;
      return out;
    }
  }
}

}  // namespace prox
