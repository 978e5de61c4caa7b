#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "prox/app.hpp"
#include "prox/families.hpp"
#include "prox/report.hpp"

using namespace prox;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun prox_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_prox(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("prox_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string write(const std::string& name, const json& j) const { return write(name, j.dump(2)); }

 private:
  fs::path path_;
};

json unit_disk() {
  return {{"name", "disk"},
          {"representation", "qr"},
          {"data", {{"M", {{1, 0}, {0, 1}}}, {"beta", {0, 0}}, {"gamma", -1}}},
          {"objective", {0, 1}}};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Field `column` of each CSV data row whose bound_id equals `id`.
std::vector<std::string> column_for(const std::string& csv, const std::string& id, int column) {
  std::vector<std::string> out;
  for (const auto& line : lines(csv)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() > 6 && f[6] == id) out.push_back(f[static_cast<std::size_t>(column)]);
  }
  return out;
}

// x₁-range of the planar search: a bounded member's extent, else x̂₁ ± 3.
std::pair<double, double> scan_window(const Instance& inst) {
  for (const auto& q : inst.sets) {
    QuadricClass cls;
    try {
      cls = classify(q);
    } catch (const Error&) {
      continue;
    }
    if (cls.kind != QuadricKind::Ellipsoid) continue;
    const double half = std::sqrt(*cls.qstar * q.M.inverse()(0, 0));
    return {(*cls.center)(0) - half - 0.5, (*cls.center)(0) + half + 0.5};
  }
  const double x1 = (*inst.closed.relax_optimizer)(0);
  return {x1 - 3, x1 + 3};
}

}  // namespace

TEST(InstanceJson, RationalStringsStayExact) {
  json j = unit_disk();
  j["data"]["gamma"] = "-9/4";
  Instance inst = parse_instance(j);
  ASSERT_EQ(inst.sets.size(), 1u);
  ASSERT_TRUE(inst.sets[0].exact);
  EXPECT_EQ(inst.sets[0].exact->gamma, Rational(-9, 4));
}

TEST(InstanceJson, FloatsTakeTheRealPath) {
  json j = unit_disk();
  j["data"]["gamma"] = -2.25;
  Instance inst = parse_instance(j);
  EXPECT_FALSE(inst.sets[0].exact);
  EXPECT_EQ(inst.sets[0].gamma, -2.25);
}

TEST(InstanceJson, Errors) {
  auto code = [](json j) {
    try {
      parse_instance(j);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::PreconditionViolated;
  };
  json missing = unit_disk();
  missing["data"].erase("beta");
  EXPECT_EQ(code(missing), ErrorCode::InvalidInput);
  json ragged = unit_disk();
  ragged["data"]["M"] = {{1, 0}, {0}};
  EXPECT_EQ(code(ragged), ErrorCode::InvalidInput);
  json wrong_len = unit_disk();
  wrong_len["objective"] = {1, 0, 0};
  EXPECT_EQ(code(wrong_len), ErrorCode::InvalidInput);
  json bad_number = unit_disk();
  bad_number["data"]["gamma"] = "1/x";
  EXPECT_EQ(code(bad_number), ErrorCode::InvalidInput);
  json bad_rep = unit_disk();
  bad_rep["representation"] = "polytope";
  EXPECT_EQ(code(bad_rep), ErrorCode::InvalidInput);
}

TEST(InstanceJson, RoundTrip) {
  for (const auto& f : family_names()) {
    const int N = family_range(f).first;
    Instance inst = make_family_instance(f, N);
    json j = to_json(inst);
    Instance back = parse_instance(j);
    EXPECT_EQ(to_json(back), j) << f;
    EXPECT_EQ(back.closed.ig_exact, inst.closed.ig_exact) << f;
    ASSERT_TRUE(back.closed.ig_value) << f;
    EXPECT_EQ(*back.closed.ig_value, *inst.closed.ig_value) << f;
  }
}

TEST(Classify, Examples) {
  TempDir dir;
  CliRun disk = prox_cli({"classify", dir.write("disk.json", unit_disk())});
  EXPECT_EQ(disk.code, 0);
  EXPECT_EQ(disk.out, "Ellipsoid q*=1\n");

  CliRun parabola = prox_cli({"classify", dir.write("ex0.json", to_json(make_family_instance("ex0", 1)))});
  EXPECT_EQ(parabola.out, "Paraboloid\n");

  json hyperbola = unit_disk();
  hyperbola["data"]["M"] = {{1, 0}, {0, -1}};
  hyperbola["data"]["gamma"] = 1;
  EXPECT_EQ(prox_cli({"classify", dir.write("hyp.json", hyperbola)}).out, "TwoSheetHyperboloid\n");

  CliRun lens = prox_cli({"classify", dir.write("ex11.json", to_json(make_family_instance("ex11", 2)))});
  EXPECT_EQ(lens.out, "Intersection(2)\n  [0] Ellipsoid q*=4.25\n  [1] Ellipsoid q*=4.25\n");
}

TEST(Classify, MalformedJsonExitsTwo) {
  TempDir dir;
  CliRun r = prox_cli({"classify", dir.write("bad.json", std::string("{\"name\": "))});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("malformed JSON"), std::string::npos);
  EXPECT_EQ(prox_cli({"classify", "/nonexistent/file.json"}).code, kExitInput);
  EXPECT_EQ(prox_cli({"frobnicate"}).code, kExitInput);
}

TEST(BoundCommand, DiskRow) {
  TempDir dir;
  CliRun r = prox_cli({"bound", dir.write("disk.json", unit_disk()), "--all"});
  EXPECT_EQ(r.code, 0);
  auto prox_rows = column_for(r.out, "prox.ellipsoid", 7);
  ASSERT_EQ(prox_rows.size(), 1u);
  EXPECT_NEAR(std::stod(prox_rows[0]), std::sqrt(2.0), 1e-14);
  CliRun one = prox_cli({"bound", dir.write("disk.json", unit_disk()), "--formula", "ig.ellipsoid", "--format", "md"});
  EXPECT_EQ(lines(one.out).size(), 3u);
  EXPECT_EQ(one.out.rfind("| name |", 0), 0u);
}

TEST(BoundCommand, ComparisonValues) {
  TempDir dir;
  for (int N : {4, 8, 16}) {
    const double B1 = std::sqrt(1.0 / (N * N) + 1);
    CliRun c1 = prox_cli({"bound", dir.write("c1.json", to_json(make_family_instance("case1", N)))});
    EXPECT_NEAR(std::stod(column_for(c1.out, "ig.ellipsoid", 7).at(0)), B1, 1e-12);
    EXPECT_NEAR(std::stod(column_for(c1.out, "ig.slice.ellipsoid.case1.weak", 7).at(0)), B1, 1e-12);
    EXPECT_NEAR(std::stod(column_for(c1.out, "ig.slice.ellipsoid.case1", 7).at(0)), 1 - 2.0 / N, 1e-12);
    CliRun c2 = prox_cli({"bound", dir.write("c2.json", to_json(make_family_instance("case2", N)))});
    EXPECT_NEAR(std::stod(column_for(c2.out, "ig.slice.ellipsoid.case2.weak", 7).at(0)), 1 + 0.5 / N, 1e-12);
  }
}

TEST(VerifyCommand, ParabolaFamilyAtOne) {
  TempDir dir;
  CliRun r = prox_cli({"verify", dir.write("ex0.json", to_json(make_family_instance("ex0", 1)))});
  EXPECT_EQ(r.code, 0) << r.err;
  auto ig = column_for(r.out, "ig.slice.paraboloid.weak", 5);
  ASSERT_EQ(ig.size(), 1u);
  EXPECT_EQ(ig[0], "0.8125");
  EXPECT_EQ(column_for(r.out, "ig.slice.paraboloid.weak", 7).at(0), "2");
  EXPECT_EQ(column_for(r.out, "ig.slice.paraboloid.weak", 9).at(0), "yes");
}

TEST(VerifyCommand, HalfDiskAtOne) {
  TempDir dir;
  CliRun r = prox_cli({"verify", dir.write("ex10.json", to_json(make_family_instance("ex10", 1)))});
  EXPECT_EQ(r.code, 0);
  Evaluation ev = evaluate(make_family_instance("ex10", 1));
  ASSERT_TRUE(ev.ig);
  EXPECT_NEAR(*ev.ig, std::sqrt(1.75), 1e-12);
  EXPECT_EQ(*ev.ip->optimizer, IntVec(Eigen::Vector2<long long>(2, 0)));
}

TEST(VerifyCommand, SeededEllipsoidSuitePasses) {
  TempDir dir;
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<int> entry(-5, 5);
  for (int k = 0; k < 20; ++k) {
    json A = {{entry(rng), entry(rng)}, {entry(rng), entry(rng)}};
    if (A[0][0].get<int>() * A[1][1].get<int>() == A[0][1].get<int>() * A[1][0].get<int>()) continue;
    json j = {{"name", "ell" + std::to_string(k)},
              {"representation", "socr"},
              {"data", {{"A", A}, {"b", {entry(rng), entry(rng)}}, {"c", {0, 0}}, {"d", -std::abs(entry(rng)) - 2}}},
              {"objective", {entry(rng), entry(rng) | 1}}};
    CliRun r = prox_cli({"verify", dir.write("e.json", j)});
    EXPECT_EQ(r.code, 0) << j.dump() << r.err;
    EXPECT_EQ(r.out.find("VIOLATION"), std::string::npos);
  }
}

TEST(ExitCodes, ViolationAndBudget) {
  TempDir dir;
  // The ceiling form of the two-sphere bound undercounts here.
  json ts = {{"name", "ts"}, {"representation", "two_sphere"}, {"data", {{"r1", "19/4"}, {"r2", "21/4"}, {"p", "11/2"}}},
             {"objective", {0, -5}}};
  CliRun v = prox_cli({"verify", dir.write("ts.json", ts)});
  EXPECT_EQ(v.code, kExitViolation);
  EXPECT_EQ(column_for(v.out, "ig.two-sphere", 9).at(0), "VIOLATION");
  EXPECT_EQ(column_for(v.out, "ig.two-sphere.corrected", 9).at(0), "yes");

  json big = unit_disk();
  big["data"]["gamma"] = -100;
  ::setenv("PROX_ORACLE_BUDGET", "5", 1);
  CliRun b = prox_cli({"verify", dir.write("big.json", big)});
  ::unsetenv("PROX_ORACLE_BUDGET");
  EXPECT_EQ(b.code, kExitBudget);
  EXPECT_NE(b.err.find("budget"), std::string::npos);
}

TEST(ExitCodes, UncertifiableBoxIsInputError) {
  TempDir dir;
  json ex6 = to_json(make_family_instance("ex6", 2));
  ex6.erase("box");
  CliRun r = prox_cli({"verify", dir.write("ex6.json", ex6)});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("CannotCertifyBox"), std::string::npos);
}

TEST(SweepCommand, TwoSphereBoundColumn) {
  CliRun r = prox_cli({"sweep", "--family", "ex7", "--n-range", "1..8"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto values = column_for(r.out, "ig.two-sphere", 7);
  ASSERT_EQ(values.size(), 8u);
  for (int N = 1; N <= 8; ++N)
    EXPECT_EQ(std::stod(values[static_cast<std::size_t>(N - 1)]), std::ceil(0.5 * std::sqrt(4.0 * N + 1)));
}

TEST(SweepCommand, EpsilonFlag) {
  CliRun r = prox_cli({"sweep", "--family", "appendix:ex2", "--n-range", "1..3", "--epsilon", "1/4"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NE(rows[3].find(",1.4375,"), std::string::npos);  // 2·¼·3 − 1/16
  EXPECT_EQ(prox_cli({"sweep", "--family", "ex2", "--epsilon", "3/2"}).code, kExitInput);
  EXPECT_EQ(prox_cli({"sweep", "--family", "ex99"}).code, kExitInput);
}

TEST(SweepCommand, ByteIdenticalReruns) {
  for (const char* f : {"ex0", "case2", "ex8"}) {
    CliRun a = prox_cli({"sweep", "--family", f});
    CliRun b = prox_cli({"sweep", "--family", f});
    EXPECT_EQ(a.out, b.out) << f;
    EXPECT_EQ(a.code, 0) << f;
  }
}

TEST(GenerateCommand, WritesLoadableJson) {
  TempDir dir;
  const std::string path = dir.write("placeholder", std::string());
  CliRun g = prox_cli({"generate", "--family", "ex5", "--n", "3", "-o", path});
  EXPECT_EQ(g.code, 0);
  Instance inst = load_instance(path);
  EXPECT_EQ(inst.name, "ex5-N3");
  EXPECT_EQ(inst.closed.ig_exact, Rational(15, 4));
}

TEST(FamilyProperty, ClosedFormMatchesOracle) {
  for (const auto& f : family_names()) {
    const auto [lo, hi] = family_range(f);
    for (int N = lo; N <= hi; ++N) {
      Instance inst = make_family_instance(f, N);
      Evaluation ev = evaluate(inst);
      ASSERT_TRUE(ev.ig) << inst.name;
      if (inst.closed.ig_exact && ev.ig_exact)
        EXPECT_EQ(*ev.ig_exact, *inst.closed.ig_exact) << inst.name;
      else
        EXPECT_NEAR(*ev.ig, *inst.closed.ig_value, 1e-9) << inst.name;
      EXPECT_EQ(ev.exit_code, 0) << inst.name;
    }
  }
}

TEST(FamilyProperty, SingleSetRelaxationMatchesClosedForm) {
  for (const char* f : {"ex0", "case1", "case2"}) {
    const auto [lo, hi] = family_range(f);
    for (int N = lo; N <= hi; ++N) {
      Instance inst = make_family_instance(f, N);
      RelaxationResult r = solve_relaxation(inst.sets[0], inst.objective.cast<double>());
      ASSERT_TRUE(r.exact_value) << inst.name;
      EXPECT_EQ(*r.exact_value, *inst.closed.relax_exact) << inst.name;
    }
  }
}

TEST(FamilyProperty, IntersectionRelaxationMatchesPlanarScan) {
  // Scan points are feasible, so the scan can only overshoot the minimum.
  for (const char* f : {"ex10", "ex11", "ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "ex8", "ex9"}) {
    const auto [lo, hi] = family_range(f);
    for (int N = lo; N <= hi; ++N) {
      Instance inst = make_family_instance(f, N);
      const int sign = static_cast<int>(inst.objective(1));
      ASSERT_EQ(inst.objective(0), 0);
      const auto [a, b] = scan_window(inst);
      auto scan = scan_planar_relaxation(inst.sets, sign, a, b, 1e-4);
      ASSERT_TRUE(scan) << inst.name;
      const double closed = *inst.closed.relax_value;
      EXPECT_GE(scan->value, closed - 1e-9 * (1 + std::abs(closed))) << inst.name;
      EXPECT_LE(scan->value, closed + 1e-3) << inst.name;
    }
  }
}

TEST(FamilyProperty, TwoSphereRelaxationMatchesPlanarScan) {
  for (int N = 1; N <= 8; ++N) {
    Instance inst = make_family_instance("ex7", N);
    auto scan = scan_planar_relaxation(inst.sets, 1, N - 1, N + 2, 1e-4);
    ASSERT_TRUE(scan);
    EXPECT_GE(scan->value, *inst.closed.relax_value - 1e-9);
    EXPECT_LE(scan->value, *inst.closed.relax_value + 1e-3);
    EXPECT_NEAR(*solve_two_sphere_relaxation(*inst.two_sphere).value, *inst.closed.relax_value, 1e-12);
  }
}

TEST(FamilyProperty, ExplicitBoxInflationKeepsOptimum) {
  for (int N = 1; N <= 5; ++N) {
    Instance inst = make_family_instance("ex6", N);
    IpSolution s = solve_ip_exact(inst.problem());
    IpProblem wide = inst.problem();
    wide.box = wide.box->inflated(5);
    IpSolution t = solve_ip_exact(wide);
    ASSERT_EQ(t.status, IpStatus::Optimal);
    EXPECT_EQ(*s.optimizer, *t.optimizer);
    EXPECT_EQ(*s.value, *t.value);
  }
}
