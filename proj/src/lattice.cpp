#include "prox/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace prox {

namespace {

constexpr double kUpperSlack = 1e-12;
constexpr int kMaxLowerEnumDim = 12;

Mat hstack(const Mat& a, const Mat& b) {
  Mat out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

RatMat hstack(const RatMat& a, const RatMat& b) {
  RatMat out(a.rows(), a.cols() + b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) out.col(j) = a.col(j);
  for (Eigen::Index j = 0; j < b.cols(); ++j) out.col(a.cols() + j) = b.col(j);
  return out;
}

Eigen::Index numeric_rank(const Mat& a) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  double tol = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > tol;
  return r;
}

Eigen::Index rank_of(const MixedLattice& lat) {
  if (lat.E_exact && lat.F_exact) return rank_exact(hstack(*lat.E_exact, *lat.F_exact));
  return numeric_rank(hstack(lat.E, lat.F));
}

double round_half_away(double x) { return std::round(x); }

// Minimum of (z-c)ᵀG(z-c) over integer z; ties go to the lexicographically smallest z.
double closest_coefficients(const Mat& G, const Vec& c, IntVec& best) {
  const auto n = c.size();
  IntVec z0(n);
  for (Eigen::Index i = 0; i < n; ++i) z0(i) = static_cast<long long>(round_half_away(c(i)));
  Vec d0 = z0.cast<double>() - c;
  double bound = d0.dot(G * d0);
  bound = bound * (1 + 1e-9) + 1e-12;
  double best_d2 = std::numeric_limits<double>::infinity();
  best = z0;
  enumerate_ellipsoid(G, c, bound, [&](const IntVec& z) {
    Vec d = z.cast<double>() - c;
    double d2 = d.dot(G * d);
    double tol = 1e-12 * (1 + d2);
    if (d2 < best_d2 - tol) {
      best_d2 = d2;
      best = z;
    } else if (d2 <= best_d2 + tol && lex_less(z, best)) {
      best = z;
      best_d2 = std::min(best_d2, d2);
    }
    return true;
  });
  return std::max(best_d2, 0.0);
}

struct Gauss2 {
  // reduced Gram entries: a = |b1|², b = <b1,b2> <= 0, c = |b2|²
  template <class T>
  static void reduce(T& a, T& b, T& c);
};

template <class T>
T round_ratio(const T& num, const T& den);

template <>
double round_ratio<double>(const double& num, const double& den) {
  return std::round(num / den);
}

template <>
Rational round_ratio<Rational>(const Rational& num, const Rational& den) {
  return Rational(round_nearest(num / den));
}

template <class T>
void Gauss2::reduce(T& a, T& b, T& c) {
  for (int iter = 0; iter < 10000; ++iter) {
    if (a > c) {
      std::swap(a, c);
    }
    T m = round_ratio<T>(b, a);
    if (m == 0) break;
    T c_new = c - 2 * m * b + m * m * a;
    if (!(c_new < c)) break;
    c = c_new;
    b = b - m * a;
  }
  if (a > c) std::swap(a, c);
  if (b > 0) b = -b;
}

// Circumradius² of the Delaunay triangle of an obtuse superbase.
template <class T>
T superbase_mu2(T a, T b, T c) {
  Gauss2::reduce(a, b, c);
  T sum = a + c + 2 * b;
  T det = a * c - b * b;
  return a * c * sum / (4 * det);
}

bool is_diagonal(const Mat& G) {
  for (Eigen::Index i = 0; i < G.rows(); ++i)
    for (Eigen::Index j = 0; j < G.cols(); ++j)
      if (i != j && std::abs(G(i, j)) > 1e-14 * std::sqrt(std::abs(G(i, i) * G(j, j)))) return false;
  return true;
}

bool is_diagonal(const RatMat& G) {
  for (Eigen::Index i = 0; i < G.rows(); ++i)
    for (Eigen::Index j = 0; j < G.cols(); ++j)
      if (i != j && G(i, j) != 0) return false;
  return true;
}

CoveringRadius exact_radius(double mu2, CoveringMethod method) {
  double mu = std::sqrt(std::max(mu2, 0.0));
  return {mu, mu, true, method};
}

double nearest_plane_sum(const Mat& G) {
  Eigen::LLT<Mat> llt(G);
  Mat L = llt.matrixL();
  double s = 0;
  for (Eigen::Index i = 0; i < L.rows(); ++i) s += L(i, i) * L(i, i);
  return s;
}

double log_unit_ball_volume(int n) {
  return 0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n + 1);
}

CoveringRadius bracket(const Mat& G0) {
  const auto n = G0.rows();
  Mat T = Mat::Identity(n, n);
  for (int sweep = 0; sweep < 200; ++sweep) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        Mat G = T.transpose() * G0 * T;
        double m = std::round(G(i, j) / G(j, j));
        if (m == 0) continue;
        double next = G(i, i) - 2 * m * G(i, j) + m * m * G(j, j);
        if (next < G(i, i) * (1 - 1e-12)) {
          T.col(i) -= m * T.col(j);
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  Mat G = T.transpose() * G0 * T;

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  double best = nearest_plane_sum(G);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return G(a, a) < G(b, b); });
  Eigen::PermutationMatrix<Eigen::Dynamic> P(n);
  for (Eigen::Index k = 0; k < n; ++k) P.indices()(k) = static_cast<int>(order[k]);
  Mat Gp = P.transpose() * G * P;
  best = std::min(best, nearest_plane_sum(Gp));
  double upper = 0.5 * std::sqrt(best) + kUpperSlack;

  double log_det = std::log(G0.determinant());
  double lower = std::exp((0.5 * log_det - log_unit_ball_volume(static_cast<int>(n))) / n);
  if (n <= kMaxLowerEnumDim) {
    for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
      Vec w(n);
      for (Eigen::Index i = 0; i < n; ++i) w(i) = (mask >> i) & 1 ? 0.5 : 0.0;
      IntVec z;
      lower = std::max(lower, std::sqrt(closest_coefficients(G, w, z)));
    }
  }
  lower = std::min(lower, upper);
  return {lower, upper, upper - lower <= 2 * kUpperSlack, CoveringMethod::NearestPlaneUpper};
}

}  // namespace

const char* to_string(CoveringMethod method) {
  switch (method) {
    case CoveringMethod::OrthogonalBox: return "orthogonal-box";
    case CoveringMethod::ObtuseSuperbase2d: return "obtuse-superbase-2d";
    case CoveringMethod::NearestPlaneUpper: return "nearest-plane-upper";
  }
  return "unknown";
}

bool lex_less(const IntVec& a, const IntVec& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

MixedLattice MixedLattice::rational(const RatMat& E, const RatMat& F) {
  MixedLattice lat;
  lat.E_exact = E;
  lat.F_exact = F.cols() ? F : RatMat(E.rows(), 0);
  lat.E = to_double(E);
  lat.F = to_double(*lat.F_exact);
  return lat;
}

MixedLattice MixedLattice::rational(const RatMat& E) { return rational(E, RatMat(E.rows(), 0)); }

MixedLattice MixedLattice::real(const Mat& E, const Mat& F) {
  MixedLattice lat;
  lat.E = E;
  lat.F = F.cols() ? F : Mat(E.rows(), 0);
  return lat;
}

MixedLattice MixedLattice::real(const Mat& E) { return real(E, Mat(E.rows(), 0)); }

bool MixedLattice::full_dimensional() const {
  return integer_rank() + real_rank() == ambient_dim() && rank_of(*this) == ambient_dim();
}

MixedLattice orthogonal_representation(const MixedLattice& lat) {
  if (rank_of(lat) != lat.integer_rank() + lat.real_rank())
    throw Error(ErrorCode::InvalidLattice, "generator columns are linearly dependent");
  if (lat.real_rank() == 0) return lat;
  if (lat.E_exact && lat.F_exact) {
    const RatMat& E = *lat.E_exact;
    const RatMat& F = *lat.F_exact;
    RatMat FtF = F.transpose() * F;
    RatMat coeff = *inverse_exact(FtF) * (F.transpose() * E);
    return MixedLattice::rational(E - F * coeff, F);
  }
  Mat coeff = (lat.F.transpose() * lat.F).ldlt().solve(lat.F.transpose() * lat.E);
  return MixedLattice::real(lat.E - lat.F * coeff, lat.F);
}

CoveringRadius covering_radius_gram(const RatMat& G) {
  const auto n = G.rows();
  if (n == 0) return {0, 0, true, CoveringMethod::OrthogonalBox};
  if (is_diagonal(G)) return exact_radius(to_double(Rational(G.trace()) / 4), CoveringMethod::OrthogonalBox);
  if (n == 2) {
    Rational mu2 = superbase_mu2<Rational>(G(0, 0), G(0, 1), G(1, 1));
    return exact_radius(to_double(mu2), CoveringMethod::ObtuseSuperbase2d);
  }
  return bracket(to_double(G));
}

CoveringRadius covering_radius_gram(const Mat& G) {
  const auto n = G.rows();
  if (n == 0) return {0, 0, true, CoveringMethod::OrthogonalBox};
  if (is_diagonal(G)) return exact_radius(G.trace() / 4, CoveringMethod::OrthogonalBox);
  if (n == 2) return exact_radius(superbase_mu2<double>(G(0, 0), G(0, 1), G(1, 1)), CoveringMethod::ObtuseSuperbase2d);
  return bracket(G);
}

CoveringRadius covering_radius(const MixedLattice& lat) {
  if (!lat.full_dimensional()) throw Error(ErrorCode::InvalidLattice, "lattice is not full-dimensional");
  MixedLattice orth = orthogonal_representation(lat);
  if (orth.E_exact) return covering_radius_gram(RatMat(orth.E_exact->transpose() * *orth.E_exact));
  return covering_radius_gram(Mat(orth.E.transpose() * orth.E));
}

bool enumerate_ellipsoid(const Mat& G, const Vec& c, double bound2,
                         const std::function<bool(const IntVec&)>& visit) {
  const auto n = G.rows();
  if (n == 0) return visit(IntVec(0));
  if (bound2 < 0) return true;
  Mat R = G.llt().matrixU();
  IntVec z(n);
  std::function<bool(Eigen::Index, double)> rec = [&](Eigen::Index k, double partial) -> bool {
    if (k < 0) return visit(z);
    double s = 0;
    for (Eigen::Index j = k + 1; j < n; ++j) s += R(k, j) * (static_cast<double>(z(j)) - c(j));
    double ck = c(k) - s / R(k, k);
    double rem = bound2 - partial;
    if (rem < 0) rem = 0;
    double w = std::sqrt(rem) / R(k, k);
    double eps = 1e-9 * (1 + w + std::abs(ck));
    auto lo = static_cast<long long>(std::ceil(ck - w - eps));
    auto hi = static_cast<long long>(std::floor(ck + w + eps));
    for (long long v = lo; v <= hi; ++v) {
      z(k) = v;
      double t = R(k, k) * (static_cast<double>(v) - ck);
      if (!rec(k - 1, partial + t * t)) return false;
    }
    return true;
  };
  return rec(n - 1, 0.0);
}

ClosestPoint closest_lattice_point(const MixedLattice& lat, const Vec& target) {
  if (!lat.full_dimensional()) throw Error(ErrorCode::InvalidLattice, "lattice is not full-dimensional");
  MixedLattice orth = orthogonal_representation(lat);
  const Mat& E1 = orth.E;
  const Mat& F = lat.F;
  Vec t_perp = target;
  if (F.cols()) t_perp -= F * (F.transpose() * F).ldlt().solve(F.transpose() * target);

  ClosestPoint out;
  if (E1.cols() > 0) {
    Mat G = E1.transpose() * E1;
    Vec c = G.ldlt().solve(E1.transpose() * t_perp);
    closest_coefficients(G, c, out.z);
  } else {
    out.z = IntVec(0);
  }
  Vec integer_part = lat.E * out.z.cast<double>();
  out.y = F.cols() ? Vec((F.transpose() * F).ldlt().solve(F.transpose() * (target - integer_part))) : Vec(0);
  out.point = integer_part + (F.cols() ? Vec(F * out.y) : Vec::Zero(target.size()));
  out.distance = (out.point - target).norm();
  return out;
}

LatticeQuery ellipsoid_contains_lattice_point(const MixedLattice& lat, const Vec& center, double r) {
  CoveringRadius mu = covering_radius(lat);
  ClosestPoint cp = closest_lattice_point(lat, center);
  LatticeQuery q;
  q.contains = r >= mu.upper || cp.distance <= r * (1 + 1e-12) + 1e-12;
  if (q.contains) q.witness = cp;
  return q;
}

}  // namespace prox
