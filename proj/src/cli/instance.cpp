#include "prox/instance.hpp"

#include <fstream>

namespace prox {

namespace {

using nlohmann::json;

Error bad(const std::string& what) { return Error(ErrorCode::InvalidInput, what); }

// Reads numbers, remembering whether every one of them was exact.
struct Reader {
  bool exact = true;

  Rational scalar(const json& v, const std::string& field) {
    if (v.is_string()) {
      try {
        return parse_rational(v.get<std::string>());
      } catch (const std::exception&) {
        throw bad("field '" + field + "': cannot parse '" + v.get<std::string>() + "'");
      }
    }
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number()) {
      exact = false;
      return exact_from_double(v.get<double>());
    }
    throw bad("field '" + field + "' must be a number or a \"p/q\" string");
  }

  RatVec vector(const json& v, const std::string& field) {
    if (!v.is_array()) throw bad("field '" + field + "' must be an array");
    RatVec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = scalar(v[i], field);
    return out;
  }

  RatMat matrix(const json& v, const std::string& field) {
    if (!v.is_array() || v.empty() || !v[0].is_array()) throw bad("field '" + field + "' must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(v.size());
    const auto cols = static_cast<Eigen::Index>(v[0].size());
    RatMat out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const json& row = v[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
        throw bad("field '" + field + "' has ragged rows");
      for (Eigen::Index k = 0; k < cols; ++k) out(i, k) = scalar(row[static_cast<std::size_t>(k)], field);
    }
    return out;
  }
};

const json& need(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw bad(std::string("missing field '") + key + "'");
  return obj.at(key);
}

void check_len(Eigen::Index got, Eigen::Index want, const char* field) {
  if (got != want) throw bad(std::string("field '") + field + "' has the wrong length");
}

QuadricSet parse_qr(const json& d) {
  Reader r;
  RatMat M = r.matrix(need(d, "M"), "M");
  if (M.rows() != M.cols()) throw bad("M must be square");
  if (M != M.transpose()) throw bad("M must be symmetric");
  RatVec beta = r.vector(need(d, "beta"), "beta");
  check_len(beta.size(), M.rows(), "beta");
  Rational gamma = r.scalar(need(d, "gamma"), "gamma");
  std::optional<RatVec> g;
  Rational h;
  if (d.contains("g")) {
    g = r.vector(d.at("g"), "g");
    check_len(g->size(), M.rows(), "g");
    h = r.scalar(need(d, "h"), "h");
  }
  if (r.exact)
    return g ? QuadricSet::from_rational(M, beta, gamma, *g, h) : QuadricSet::from_rational(M, beta, gamma);
  if (g) return QuadricSet::from_real(to_double(M), to_double(beta), to_double(gamma), to_double(*g), to_double(h));
  return QuadricSet::from_real(to_double(M), to_double(beta), to_double(gamma));
}

QuadricSet parse_socr(const json& d) {
  Reader r;
  RatMat A = r.matrix(need(d, "A"), "A");
  RatVec b = r.vector(need(d, "b"), "b");
  RatVec c = r.vector(need(d, "c"), "c");
  Rational dd = r.scalar(need(d, "d"), "d");
  check_len(b.size(), A.rows(), "b");
  check_len(c.size(), A.cols(), "c");
  if (r.exact) return socr_to_qr(SocrSet::from_rational(A, b, c, dd));
  return socr_to_qr(SocrSet::from_real(to_double(A), to_double(b), to_double(c), to_double(dd)));
}

QuadricSet parse_er(const json& d) {
  Reader r;
  RatMat Q = r.matrix(need(d, "Q"), "Q");
  RatVec p = r.vector(need(d, "p"), "p");
  Rational rad = r.scalar(need(d, "r"), "r");
  check_len(p.size(), Q.rows(), "p");
  if (rad < 0) throw bad("r must be nonnegative");
  if (r.exact) {
    RatMat Qt = Q.transpose();
    return QuadricSet::from_rational(RatMat(Qt * Q), RatVec(Qt * p), p.dot(p) - rad * rad);
  }
  return er_to_qr(Ellipsoid{to_double(Q), to_double(p), to_double(rad)});
}

QuadricSet parse_halfspace(const json& d) {
  Reader r;
  RatVec g = r.vector(need(d, "g"), "g");
  Rational h = r.scalar(need(d, "h"), "h");
  if (r.exact) return QuadricSet::halfspace(g, h);
  return QuadricSet::halfspace_real(to_double(g), to_double(h));
}

QuadricSet parse_member(const std::string& rep, const json& d) {
  if (rep == "qr") return parse_qr(d);
  if (rep == "socr") return parse_socr(d);
  if (rep == "er") return parse_er(d);
  if (rep == "halfspace") return parse_halfspace(d);
  throw bad("unknown member representation '" + rep + "'");
}

Representation parse_representation(const std::string& s) {
  if (s == "socr") return Representation::Socr;
  if (s == "qr") return Representation::Qr;
  if (s == "er") return Representation::Er;
  if (s == "two_sphere") return Representation::TwoSphere;
  if (s == "intersection") return Representation::Intersection;
  throw bad("unknown representation '" + s + "'");
}

IntVec int_vector(const json& v, const char* field) {
  if (!v.is_array() || v.empty()) throw bad(std::string("field '") + field + "' must be a nonempty array");
  IntVec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer()) throw bad(std::string("field '") + field + "' must hold integers");
    out(static_cast<Eigen::Index>(i)) = v[i].get<long long>();
  }
  return out;
}

void parse_closed_form(const json& j, ClosedForm& c) {
  Reader r;
  if (j.contains("relaxation")) {
    Reader one;
    Rational v = one.scalar(j.at("relaxation"), "relaxation");
    if (one.exact) c.relax_exact = v;
    c.relax_value = to_double(v);
  }
  if (j.contains("ig")) {
    Reader one;
    Rational v = one.scalar(j.at("ig"), "ig");
    if (one.exact) c.ig_exact = v;
    c.ig_value = to_double(v);
  }
  if (j.contains("optimizer")) c.relax_optimizer = to_double(r.vector(j.at("optimizer"), "optimizer"));
}

json closed_form_json(const ClosedForm& c) {
  json j = json::object();
  if (c.relax_exact)
    j["relaxation"] = json_number(*c.relax_exact);
  else if (c.relax_value)
    j["relaxation"] = *c.relax_value;
  if (c.ig_exact)
    j["ig"] = json_number(*c.ig_exact);
  else if (c.ig_value)
    j["ig"] = *c.ig_value;
  if (c.relax_optimizer) j["optimizer"] = std::vector<double>(c.relax_optimizer->begin(), c.relax_optimizer->end());
  return j;
}

}  // namespace

const char* to_string(Representation r) {
  switch (r) {
    case Representation::Socr: return "socr";
    case Representation::Qr: return "qr";
    case Representation::Er: return "er";
    case Representation::TwoSphere: return "two_sphere";
    case Representation::Intersection: return "intersection";
  }
  return "?";
}

std::optional<int> Instance::N() const {
  auto it = parameters.find("N");
  if (it == parameters.end()) return std::nullopt;
  return std::stoi(it->second);
}

IpProblem Instance::problem() const {
  IpProblem p = make_problem(sets, objective);
  p.box = box;
  return p;
}

Instance parse_instance(const json& j) {
  if (!j.is_object()) throw bad("instance must be a JSON object");
  Instance inst;
  inst.name = j.value("name", std::string("unnamed"));
  inst.representation = parse_representation(need(j, "representation").get<std::string>());
  inst.data = need(j, "data");
  inst.objective = int_vector(need(j, "objective"), "objective");
  if (j.contains("parameters")) {
    for (const auto& [k, v] : j.at("parameters").items()) inst.parameters[k] = v.is_string() ? v.get<std::string>() : v.dump();
  }
  const json& d = inst.data;
  switch (inst.representation) {
    case Representation::Qr: inst.sets = {parse_qr(d)}; break;
    case Representation::Socr: inst.sets = {parse_socr(d)}; break;
    case Representation::Er: inst.sets = {parse_er(d)}; break;
    case Representation::TwoSphere: {
      Reader r;
      TwoSphereInstance t;
      t.r1 = to_double(r.scalar(need(d, "r1"), "r1"));
      t.r2 = to_double(r.scalar(need(d, "r2"), "r2"));
      t.p = to_double(r.scalar(need(d, "p"), "p"));
      t.n = static_cast<int>(inst.objective.size());
      if (t.n < 2) throw bad("two_sphere needs n >= 2");
      if (!(t.p > 0) || !(t.r1 > 0) || !(t.r2 > 0)) throw bad("two_sphere needs positive r1, r2, p");
      t.alpha = inst.objective.cast<double>();
      inst.sets = two_sphere_sets(t);
      inst.two_sphere = t;
      break;
    }
    case Representation::Intersection: {
      const json& members = need(d, "sets");
      if (!members.is_array() || members.empty()) throw bad("field 'sets' must be a nonempty array");
      for (const json& m : members) inst.sets.push_back(parse_member(need(m, "representation").get<std::string>(), need(m, "data")));
      break;
    }
  }
  for (const auto& q : inst.sets)
    if (q.dim() != inst.objective.size()) throw bad("objective length does not match the set dimension");
  if (j.contains("box")) {
    IntBox b{int_vector(need(j.at("box"), "lo"), "lo"), int_vector(need(j.at("box"), "hi"), "hi")};
    if (b.lo.size() != inst.objective.size() || b.hi.size() != inst.objective.size()) throw bad("box dimension mismatch");
    inst.box = b;
  }
  if (j.contains("closed_form")) parse_closed_form(j.at("closed_form"), inst.closed);
  return inst;
}

Instance load_instance(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw bad("cannot open " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw bad(std::string("malformed JSON: ") + e.what());
  }
  try {
    return parse_instance(j);
  } catch (const json::exception& e) {
    throw bad(std::string("bad instance: ") + e.what());
  }
}

json to_json(const Instance& inst) {
  json j;
  j["name"] = inst.name;
  j["representation"] = to_string(inst.representation);
  j["data"] = inst.data;
  j["objective"] = std::vector<long long>(inst.objective.begin(), inst.objective.end());
  if (!inst.parameters.empty()) j["parameters"] = inst.parameters;
  if (inst.box) {
    j["box"]["lo"] = std::vector<long long>(inst.box->lo.begin(), inst.box->lo.end());
    j["box"]["hi"] = std::vector<long long>(inst.box->hi.begin(), inst.box->hi.end());
  }
  json c = closed_form_json(inst.closed);
  if (!c.empty()) j["closed_form"] = c;
  return j;
}

json json_number(const Rational& q) { return to_string(q); }

json json_vector(const RatVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(json_number(v(i)));
  return out;
}

json json_matrix(const RatMat& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(json_vector(RatVec(m.row(i).transpose())));
  return out;
}

}  // namespace prox
