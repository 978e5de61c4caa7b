#include "prox/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace prox {

namespace {

using nlohmann::json;

RatVec rv(std::initializer_list<Rational> v) {
  RatVec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const Rational& x : v) out(i++) = x;
  return out;
}

RatMat rdiag(const Rational& a, const Rational& b) {
  RatMat m = RatMat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

RatMat rcross(const Rational& off) {
  RatMat m = RatMat::Zero(2, 2);
  m(0, 1) = m(1, 0) = off;
  return m;
}

json qr_data(const RatMat& M, const RatVec& beta, const Rational& gamma) {
  return {{"M", json_matrix(M)}, {"beta", json_vector(beta)}, {"gamma", json_number(gamma)}};
}

json qr_branch_data(const RatMat& M, const RatVec& beta, const Rational& gamma, const RatVec& g, const Rational& h) {
  json d = qr_data(M, beta, gamma);
  d["g"] = json_vector(g);
  d["h"] = json_number(h);
  return d;
}

json member(const char* rep, json data) { return {{"representation", rep}, {"data", std::move(data)}}; }

json halfspace(const RatVec& g, const Rational& h) {
  return member("halfspace", {{"g", json_vector(g)}, {"h", json_number(h)}});
}

// x₂ ≥ x₁².
json unit_parabola() { return member("qr", qr_data(rdiag(1, 0), rv({0, Rational(1, 2)}), 0)); }

// ‖x − c‖² ≤ ρ² with rational c and ρ².
json disk(const RatVec& c, const Rational& rho2) {
  return member("qr", qr_data(RatMat::Identity(2, 2), c, c.dot(c) - rho2));
}

void set_sqrt(const Rational& square, double sign, std::optional<Rational>& exact, std::optional<double>& value) {
  if (auto r = sqrt_exact(square)) exact = sign * *r;
  value = sign * std::sqrt(to_double(square));
}

Instance finish(json j, ClosedForm closed) {
  Instance inst = parse_instance(j);
  inst.closed = std::move(closed);
  return inst;
}

json skeleton(const std::string& family, int N, const char* rep, json data, std::vector<long long> objective) {
  return {{"name", family + "-N" + std::to_string(N)},
          {"representation", rep},
          {"data", std::move(data)},
          {"objective", std::move(objective)},
          {"parameters", {{"family", family}, {"N", std::to_string(N)}}}};
}

// Relaxation value v and IG = ϑ_IP − v for rational v.
ClosedForm rational_closed(const Rational& relax, const Rational& ig, const Vec& optimizer) {
  ClosedForm c;
  c.relax_exact = relax;
  c.relax_value = to_double(relax);
  c.ig_exact = ig;
  c.ig_value = to_double(ig);
  c.relax_optimizer = optimizer;
  return c;
}

Instance ex0(int N) {
  const Rational fourN(4 * N);
  RatMat A = rdiag(1, Rational(1, 2));
  json data = {{"A", json_matrix(A)},
               {"b", json_vector(rv({fourN + Rational(1, 2), fourN}))},
               {"c", json_vector(rv({0, Rational(1, 2)}))},
               {"d", json_number(fourN - 1 / fourN)}};
  const Rational x1 = fourN + Rational(1, 2) * (1 - 1 / fourN);
  const Rational x2 = Rational(8 * N) - Rational(3, 16 * N);
  return finish(skeleton("ex0", N, "socr", data, {1, 1}),
                rational_closed(x1 + x2, Rational(N) + Rational(5, 16 * N) - Rational(1, 2),
                                Eigen::Vector2d(to_double(x1), to_double(x2))));
}

Instance ex10(int N) {
  json data = {{"sets", {disk(rv({0, 0}), Rational((N + 1) * (N + 1))), halfspace(rv({1, 0}), Rational(N) + Rational(1, 2))}}};
  ClosedForm c;
  const Rational s2 = Rational(N) + Rational(3, 4);
  set_sqrt(s2, -1, c.relax_exact, c.relax_value);
  set_sqrt(s2, 1, c.ig_exact, c.ig_value);
  c.relax_optimizer = Eigen::Vector2d(N + 0.5, *c.relax_value);
  return finish(skeleton("ex10", N, "intersection", data, {0, 1}), c);
}

Instance ex11(int N) {
  const Rational r2 = Rational(N * N) + Rational(1, 4);
  json data = {{"sets", {disk(rv({1 - N, Rational(1, 2)}), r2), disk(rv({N, Rational(1, 2)}), r2)}}};
  ClosedForm c;
  set_sqrt(Rational(N), 1, c.ig_exact, c.ig_value);
  if (c.ig_exact) *c.ig_exact -= Rational(1, 2);
  *c.ig_value -= 0.5;
  c.relax_value = -*c.ig_value;
  if (c.ig_exact) c.relax_exact = -*c.ig_exact;
  c.relax_optimizer = Eigen::Vector2d(0.5, *c.relax_value);
  return finish(skeleton("ex11", N, "intersection", data, {0, 1}), c);
}

Instance ex7(int N) {
  json data = {{"r1", N + 1}, {"r2", N}, {"p", 2 * N}};
  ClosedForm c;
  const Rational w = Rational(2 * N + 1, 4 * N);
  const Rational h2 = w * (2 * N - w);
  set_sqrt(h2, -1, c.relax_exact, c.relax_value);
  set_sqrt(h2, 1, c.ig_exact, c.ig_value);
  c.relax_optimizer = Eigen::Vector2d(N + to_double(w), *c.relax_value);
  return finish(skeleton("ex7", N, "two_sphere", data, {0, 1}), c);
}

Instance comparison(const std::string& family, int N) {
  if (N < 3) throw Error(ErrorCode::InvalidInput, family + " needs N >= 3");
  const Rational n2(N * N);
  const Rational c = Rational(1, 2) + Rational(1, N);
  const bool first = family == "case1";
  const Rational R = first ? Rational(N, 2) - 1 : Rational(N, 2) + 1 - Rational(1, N);
  json data = qr_data(rdiag(1, n2), rv({0, n2 * c}), n2 * c * c - R * R);
  const Rational relax = c - R / N;
  return finish(skeleton(family, N, "qr", data, {0, 1}), rational_closed(relax, 1 - relax, Eigen::Vector2d(0, to_double(relax))));
}

Instance ex2(int N, const Rational& eps) {
  if (!(eps > 0 && eps < 1)) throw Error(ErrorCode::InvalidInput, "epsilon must lie in (0,1)");
  json data = {{"sets", {unit_parabola(), halfspace(rv({1, 0}), N - eps)}}};
  json j = skeleton("ex2", N, "intersection", data, {0, 1});
  j["parameters"]["epsilon"] = to_string(eps);
  const Rational x1 = N - eps;
  return finish(j, rational_closed(x1 * x1, 2 * eps * N - eps * eps, Eigen::Vector2d(to_double(x1), to_double(x1 * x1))));
}

Instance ex3(int N) {
  const Rational low = Rational(N) - Rational(1, 4);
  json data = {{"sets",
                {unit_parabola(), halfspace(rv({1, 0}), Rational(N) - Rational(1, 2)), halfspace(rv({-1, 0}), -N),
                 halfspace(rv({0, 1}), low * low), halfspace(rv({0, -1}), -Rational(N * N + 1))}}};
  return finish(skeleton("ex3", N, "intersection", data, {0, 1}),
                rational_closed(low * low, Rational(N, 2) - Rational(1, 16), Eigen::Vector2d(N - 0.5, to_double(low * low))));
}

ClosedForm half_step_closed(int N) {
  const Rational x1 = Rational(N) + Rational(1, 2);
  return rational_closed(x1 * x1, Rational(N) + Rational(3, 4), Eigen::Vector2d(to_double(x1), to_double(x1 * x1)));
}

Instance ex1(int N) {
  json data = {{"sets",
                {unit_parabola(), halfspace(rv({1, 0}), Rational(N) + Rational(1, 2)), halfspace(rv({-1, 0}), -(N + 1)),
                 halfspace(rv({0, -1}), -Rational((N + 1) * (N + 1)))}}};
  return finish(skeleton("ex1", N, "intersection", data, {0, 1}), half_step_closed(N));
}

Instance ex4(int N) {
  const Rational top = Rational((N + 1) * (N + 1));
  const Rational R2 = Rational(1, 4) + (Rational(N) + Rational(3, 4)) * (Rational(N) + Rational(3, 4));
  json data = {{"sets",
                {halfspace(rv({1, 0}), Rational(N) + Rational(1, 4)), unit_parabola(), disk(rv({N + 1, top}), R2)}}};
  return finish(skeleton("ex4", N, "intersection", data, {0, 1}), half_step_closed(N));
}

// (x₁ − N)(x₂ + k) ≥ 1 with k = 2 − (N+½)², on the branch x₁ ≥ N.
Instance ex5(int N) {
  const Rational k = 2 - (Rational(N) + Rational(1, 2)) * (Rational(N) + Rational(1, 2));
  json hyperbola = member("qr", qr_branch_data(rcross(Rational(-1, 2)), rv({k / 2, Rational(-N, 2)}), N * k + 1,
                                               rv({1, 0}), N));
  json data = {{"sets", {unit_parabola(), hyperbola}}};
  return finish(skeleton("ex5", N, "intersection", data, {0, 1}), half_step_closed(N));
}

// (N + ½ − x₁)x₂ ≥ N on the branch x₂ ≥ 0, inside the strip N − ½ ≤ x₁ ≤ N.
Instance ex6(int N) {
  const Rational shift = Rational(N) + Rational(1, 2);
  json hyperbola = member("qr", qr_branch_data(rcross(Rational(1, 2)), rv({0, shift / 2}), N, rv({0, 1}), 0));
  json data = {{"sets",
                {halfspace(rv({1, 0}), Rational(N) - Rational(1, 2)), halfspace(rv({-1, 0}), -N), hyperbola}}};
  json j = skeleton("ex6", N, "intersection", data, {0, 1});
  // x₂ ≥ N on the relaxation and (N, 2N) is feasible.
  j["box"] = {{"lo", {N - 1, N}}, {"hi", {N + 1, 2 * N}}};
  return finish(j, rational_closed(N, N, Eigen::Vector2d(N - 0.5, N)));
}

json disk_left(int N) { return disk(rv({-N, 0}), Rational((N + 1) * (N + 1))); }

ClosedForm sqrt_shift_closed(int N) {
  ClosedForm c;
  set_sqrt(Rational(N) + Rational(3, 4), -1, c.relax_exact, c.relax_value);
  set_sqrt(Rational(N) + Rational(3, 4), 1, c.ig_exact, c.ig_value);
  c.relax_optimizer = Eigen::Vector2d(0.5, *c.ig_value);
  return c;
}

// x₁(x₂ + s) ≥ s on the branch x₁ ≥ 0, s = √(N + ¾).
Instance ex8(int N) {
  const double s = std::sqrt(N + 0.75);
  json hyperbola = member("qr", {{"M", {{0.0, -0.5}, {-0.5, 0.0}}}, {"beta", {s / 2, 0.0}}, {"gamma", s},
                                 {"g", {1, 0}}, {"h", 0}});
  json data = {{"sets", {disk_left(N), hyperbola}}};
  return finish(skeleton("ex8", N, "intersection", data, {0, -1}), sqrt_shift_closed(N));
}

// x₂ ≥ (x₁ − ¾ − s)² − (¼ − s)², s = √(N + ¾).
Instance ex9(int N) {
  const double s = std::sqrt(N + 0.75);
  const double m = 0.75 + s;
  json parabola = member("qr", {{"M", {{1.0, 0.0}, {0.0, 0.0}}}, {"beta", {m, 0.5}}, {"gamma", 0.5 + 2 * s}});
  json data = {{"sets", {disk_left(N), parabola}}};
  return finish(skeleton("ex9", N, "intersection", data, {0, -1}), sqrt_shift_closed(N));
}

// Feasible x₂ on a line x₁ = const, as a sorted union of closed intervals.
using Intervals = std::vector<std::pair<double, double>>;
constexpr double kInf = std::numeric_limits<double>::infinity();

Intervals solve_line(double a, double b, double c) {
  // a y² + b y + c ≤ 0
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1.0});
  if (std::abs(a) <= 1e-15 * scale) {
    if (std::abs(b) <= 1e-15 * scale) return c <= 0 ? Intervals{{-kInf, kInf}} : Intervals{};
    return b > 0 ? Intervals{{-kInf, -c / b}} : Intervals{{-c / b, kInf}};
  }
  const double D = b * b - 4 * a * c;
  if (D < 0) return a > 0 ? Intervals{} : Intervals{{-kInf, kInf}};
  const double sq = std::sqrt(D);
  const double q = -0.5 * (b + (b >= 0 ? sq : -sq));
  double r1 = q / a, r2 = q != 0 ? c / q : r1;
  if (r1 > r2) std::swap(r1, r2);
  if (a > 0) return {{r1, r2}};
  return {{-kInf, r1}, {r2, kInf}};
}

Intervals intersect(const Intervals& u, const Intervals& v) {
  Intervals out;
  for (const auto& [a, b] : u)
    for (const auto& [c, d] : v) {
      const double lo = std::max(a, c), hi = std::min(b, d);
      if (lo <= hi) out.emplace_back(lo, hi);
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"ex0", "ex10", "ex11", "ex7", "case1", "case2", "ex1",
                                              "ex2", "ex3",  "ex4",  "ex5", "ex6",   "ex8"  , "ex9"};
  return names;
}

std::string canonical_family(const std::string& name) {
  std::string f = name.rfind("appendix:", 0) == 0 ? name.substr(9) : name;
  const auto& all = family_names();
  if (std::find(all.begin(), all.end(), f) == all.end()) throw Error(ErrorCode::InvalidInput, "unknown family '" + name + "'");
  return f;
}

std::pair<int, int> family_range(const std::string& family) {
  const std::string f = canonical_family(family);
  if (f == "case1" || f == "case2") return {4, 16};
  if (f == "ex0" || f == "ex10" || f == "ex11" || f == "ex7") return {1, 8};
  return {1, 5};
}

Instance make_family_instance(const std::string& family, int N, const FamilyOptions& options) {
  if (N < 1) throw Error(ErrorCode::InvalidInput, "N must be positive");
  const std::string f = canonical_family(family);
  if (f == "ex0") return ex0(N);
  if (f == "ex10") return ex10(N);
  if (f == "ex11") return ex11(N);
  if (f == "ex7") return ex7(N);
  if (f == "case1" || f == "case2") return comparison(f, N);
  if (f == "ex1") return ex1(N);
  if (f == "ex2") return ex2(N, options.epsilon);
  if (f == "ex3") return ex3(N);
  if (f == "ex4") return ex4(N);
  if (f == "ex5") return ex5(N);
  if (f == "ex6") return ex6(N);
  if (f == "ex8") return ex8(N);
  return ex9(N);
}

std::optional<SliceScan> scan_planar_relaxation(const std::vector<QuadricSet>& sets, int sign, double lo, double hi,
                                                double step) {
  std::optional<SliceScan> best;
  const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
  for (long long k = 0; k <= count; ++k) {
    const double x1 = lo + static_cast<double>(k) * step;
    Intervals feasible{{-kInf, kInf}};
    for (const auto& q : sets) {
      if (q.dim() != 2) throw Error(ErrorCode::InvalidInput, "planar scan needs n = 2");
      const double a = q.M(1, 1);
      const double b = 2 * q.M(0, 1) * x1 - 2 * q.beta(1);
      const double c = q.M(0, 0) * x1 * x1 - 2 * q.beta(0) * x1 + q.gamma;
      feasible = intersect(feasible, solve_line(a, b, c));
      if (q.branch) {
        const double g1 = q.branch->g(0), g2 = q.branch->g(1), rhs = q.branch->h - g1 * x1;
        feasible = intersect(feasible, solve_line(0, -g2, rhs));
      }
      if (feasible.empty()) break;
    }
    if (feasible.empty()) continue;
    const double x2 = sign > 0 ? feasible.front().first : feasible.back().second;
    if (!std::isfinite(x2)) continue;
    const double v = sign * x2;
    if (!best || v < best->value) best = SliceScan{v, x1, x2};
  }
  return best;
}

}  // namespace prox
