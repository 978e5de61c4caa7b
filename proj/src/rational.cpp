#include "prox/rational.hpp"

#include <cctype>
#include <cmath>
#include <vector>

namespace prox {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidLattice: return "InvalidLattice";
    case ErrorCode::NotAQuadricOfInterest: return "NotAQuadricOfInterest";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::WrongQuadricClass: return "WrongQuadricClass";
    case ErrorCode::NoFullDimRecessionCone: return "NoFullDimRecessionCone";
    case ErrorCode::NoLargeBalls: return "NoLargeBalls";
    case ErrorCode::InfeasibleAnchor: return "InfeasibleAnchor";
    case ErrorCode::InvalidRegularizer: return "InvalidRegularizer";
    case ErrorCode::InfeasibleSet: return "InfeasibleSet";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::InvalidObjective: return "InvalidObjective";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::BoundNotApplicable: return "BoundNotApplicable";
    case ErrorCode::InfeasibleIntegerSet: return "InfeasibleIntegerSet";
    case ErrorCode::CannotCertifyBox: return "CannotCertifyBox";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
  }
  return "Unknown";
}

namespace {

Integer parse_integer(std::string_view s) {
  if (s.empty()) throw Error(ErrorCode::InvalidInput, "empty number");
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw Error(ErrorCode::InvalidInput, "bad integer '" + std::string(s) + "'");
  Integer v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw Error(ErrorCode::InvalidInput, "bad integer '" + std::string(s) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? Integer(-v) : v;
}

Rational pow10(long e) {
  Integer p = 1;
  for (long k = 0; k < std::abs(e); ++k) p *= 10;
  return e >= 0 ? Rational(p) : Rational(Integer(1), p);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto s = trim(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer p = parse_integer(trim(s.substr(0, slash)));
    Integer q = parse_integer(trim(s.substr(slash + 1)));
    if (q == 0) throw Error(ErrorCode::InvalidInput, "zero denominator in '" + std::string(s) + "'");
    return Rational(p, q);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    exponent = static_cast<long>(parse_integer(s.substr(e + 1)));
    s = s.substr(0, e);
  }
  std::string digits(s);
  if (auto dot = digits.find('.'); dot != std::string::npos) {
    exponent -= static_cast<long>(digits.size() - dot - 1);
    digits.erase(dot, 1);
  }
  return Rational(parse_integer(digits)) * pow10(exponent);
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Vec to_double(const RatVec& v) {
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = to_double(v(i));
  return out;
}

Mat to_double(const RatMat& m) {
  Mat out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

Rational exact_from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidInput, "non-finite number");
  if (x == 0.0) return Rational(0);
  int e = 0;
  double m = std::frexp(x, &e);
  auto mant = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  Rational r{Integer(mant)};
  Integer two_pow = Integer(1) << std::abs(e);
  return e >= 0 ? r * Rational(two_pow) : r / Rational(two_pow);
}

RatVec exact_from_double(const Vec& v) {
  RatVec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = exact_from_double(v(i));
  return out;
}

RatMat exact_from_double(const Mat& m) {
  RatMat out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = exact_from_double(m(i, j));
  return out;
}

RatVec to_rational(const IntVec& v) {
  RatVec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = Rational(v(i));
  return out;
}

RatMat to_rational(const IntMat& m) {
  RatMat out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

Integer floor_div(const Rational& q) {
  Integer n = numerator(q), d = denominator(q);
  Integer f = n / d;
  if (n % d != 0 && n < 0) f -= 1;
  return f;
}

Integer ceil_div(const Rational& q) { return -floor_div(-q); }

Integer round_nearest(const Rational& q) { return floor_div(q + Rational(1, 2)); }

std::optional<Rational> sqrt_exact(const Rational& q) {
  if (q < 0) return std::nullopt;
  Integer n = numerator(q), d = denominator(q);
  Integer sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
  if (sn * sn != n || sd * sd != d) return std::nullopt;
  return Rational(sn, sd);
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<Eigen::Index> rref(RatMat& a) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Eigen::Index p = row;
    while (p < a.rows() && a(p, col) == 0) ++p;
    if (p == a.rows()) continue;
    a.row(p).swap(a.row(row));
    Rational inv = 1 / a(row, col);
    for (Eigen::Index j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      Rational f = a(i, col);
      for (Eigen::Index j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

int rank_exact(const RatMat& a) {
  RatMat w = a;
  return static_cast<int>(rref(w).size());
}

std::optional<RatVec> solve_exact(const RatMat& a, const RatVec& b) {
  RatMat aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  RatVec x = RatVec::Zero(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x(pivots[r]) = aug(static_cast<Eigen::Index>(r), a.cols());
  return x;
}

std::optional<RatMat> inverse_exact(const RatMat& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  const auto n = a.rows();
  RatMat aug(n, 2 * n);
  aug.leftCols(n) = a;
  aug.rightCols(n) = RatMat::Identity(n, n);
  auto pivots = rref(aug);
  if (static_cast<Eigen::Index>(pivots.size()) < n || pivots[n - 1] != n - 1) return std::nullopt;
  return RatMat(aug.rightCols(n));
}

RatMat nullspace_exact(const RatMat& a) {
  RatMat w = a;
  auto pivots = rref(w);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RatVec> basis;
  for (Eigen::Index free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    RatVec v = RatVec::Zero(a.cols());
    v(free) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v(pivots[r]) = -w(static_cast<Eigen::Index>(r), free);
    basis.push_back(v);
  }
  RatMat out(a.cols(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = basis[k];
  return out;
}

Rational det_exact(const RatMat& a) {
  RatMat w = a;
  const auto n = w.rows();
  Rational det = 1;
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index p = col;
    while (p < n && w(p, col) == 0) ++p;
    if (p == n) return 0;
    if (p != col) {
      w.row(p).swap(w.row(col));
      det = -det;
    }
    det *= w(col, col);
    for (Eigen::Index i = col + 1; i < n; ++i) {
      if (w(i, col) == 0) continue;
      Rational f = w(i, col) / w(col, col);
      for (Eigen::Index j = col; j < n; ++j) w(i, j) -= f * w(col, j);
    }
  }
  return det;
}

}  // namespace prox
