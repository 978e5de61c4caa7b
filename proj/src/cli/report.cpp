#include "prox/report.hpp"

#include <cmath>
#include <sstream>

namespace prox {

namespace {

constexpr double kSoundTol = 1e-9;
constexpr double kClosedFormTol = 1e-9;

struct Relaxation {
  std::optional<double> value;
  std::optional<Rational> exact;
  std::optional<Vec> optimizer;
};

Relaxation relaxation_of(const Instance& inst, std::vector<std::string>& notes) {
  Relaxation out;
  if (inst.two_sphere) {
    RelaxationResult r = solve_two_sphere_relaxation(*inst.two_sphere);
    out.value = r.value;
    out.optimizer = r.optimizer;
    out.exact = inst.closed.relax_exact;
    return out;
  }
  if (inst.sets.size() == 1) {
    try {
      RelaxationResult r = solve_relaxation(inst.sets.front(), inst.objective.cast<double>());
      if (r.status == RelaxStatus::Solvable) {
        out.value = r.value;
        out.exact = r.exact_value;
        out.optimizer = r.optimizer;
      } else {
        notes.push_back(std::string("relaxation ") + to_string(r.status));
      }
    } catch (const Error& e) {
      notes.push_back(e.what());
    }
    return out;
  }
  out.value = inst.closed.relax_value;
  out.exact = inst.closed.relax_exact;
  out.optimizer = inst.closed.relax_optimizer;
  if (!out.value) notes.push_back("intersection without a closed-form relaxation value");
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : ""; }
std::string opt(const std::optional<bool>& v) { return v ? (*v ? "yes" : "VIOLATION") : ""; }

}  // namespace

std::string format_number(double v) {
  if (v == 0) return "0";
  if (std::abs(v) < 1e15 && v == std::round(v)) return std::to_string(static_cast<long long>(v));
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

std::string describe_class(const Instance& inst) {
  if (inst.two_sphere) {
    std::ostringstream os;
    os << "TwoSphere kappa=" << format_number(inst.two_sphere->kappa());
    return os.str();
  }
  if (inst.sets.size() > 1) return "Intersection(" + std::to_string(inst.sets.size()) + ")";
  QuadricClass cls = classify(inst.sets.front());
  std::string out = to_string(cls.kind);
  if (cls.kind == QuadricKind::Ellipsoid && cls.qstar) out += " q*=" + format_number(*cls.qstar);
  return out;
}

std::vector<BoundReport> instance_bounds(const Instance& inst) {
  std::vector<BoundReport> out;
  if (inst.two_sphere) {
    for (auto f : {ig_bound_two_sphere, ig_bound_two_sphere_corrected}) {
      try {
        out.push_back(f(*inst.two_sphere));
      } catch (const Error&) {
      }
    }
    return out;
  }
  if (inst.sets.size() != 1) return out;
  try {
    out = all_bounds(inst.sets.front(), inst.objective);
  } catch (const Error&) {
  }
  return out;
}

Evaluation evaluate(const Instance& inst, const EvaluateOptions& options) {
  Evaluation ev;
  ReportRow base;
  base.name = inst.name;
  if (auto N = inst.N()) base.N = std::to_string(*N);
  try {
    base.cls = describe_class(inst);
  } catch (const Error& e) {
    base.cls = "Unclassified";
    ev.notes.push_back(e.what());
  }
  Relaxation rel = relaxation_of(inst, ev.notes);
  base.relax_value = rel.value;

  std::vector<BoundReport> bounds = instance_bounds(inst);
  if (options.formula) std::erase_if(bounds, [&](const BoundReport& b) { return b.formula != *options.formula; });

  if (options.oracle) {
    try {
      IpSolution s = solve_ip_exact(inst.problem(), options.budget ? options.budget : oracle_budget());
      ev.ip = s;
      if (s.status == IpStatus::BoxTruncated) {
        ev.exit_code = kExitBudget;
        ev.notes.push_back("oracle budget exceeded: " + s.certificate);
      } else if (s.status == IpStatus::Infeasible) {
        ev.notes.push_back("no integer point: " + s.certificate);
      } else {
        base.oracle_value = s.value->str();
        if (rel.exact) {
          ev.ig_exact = Rational(*s.value) - *rel.exact;
          ev.ig = to_double(*ev.ig_exact);
        } else if (rel.value) {
          ev.ig = to_double(Rational(*s.value)) - *rel.value;
        }
        base.oracle_ig = ev.ig;
      }
    } catch (const Error& e) {
      ev.exit_code = kExitInput;
      ev.notes.push_back(e.what());
    }
    const bool need_prox = std::any_of(bounds.begin(), bounds.end(),
                                       [](const BoundReport& b) { return b.kind == BoundKind::Proximity; });
    if (need_prox && rel.optimizer && ev.exit_code == kExitOk) {
      ProximityResult p = proximity_exact(inst.sets, *rel.optimizer, options.budget ? options.budget : oracle_budget());
      if (p.status == IpStatus::Optimal) base.oracle_prox = p.distance;
      if (p.status == IpStatus::BoxTruncated) {
        ev.exit_code = kExitBudget;
        ev.notes.push_back("proximity budget exceeded");
      }
    }
  }

  if (bounds.empty()) ev.rows.push_back(base);
  for (const auto& b : bounds) {
    ReportRow row = base;
    row.bound = b;
    const std::optional<double> target = b.kind == BoundKind::Proximity ? base.oracle_prox : base.oracle_ig;
    if (target) {
      row.sound = b.value >= *target - kSoundTol * (1 + std::abs(*target));
      if (!*row.sound && ev.exit_code == kExitOk) ev.exit_code = kExitViolation;
    }
    ev.rows.push_back(row);
  }
  return ev;
}

void compare_closed_form(const Instance& inst, Evaluation& ev) {
  bool match = false;
  if (ev.ig) {
    if (inst.closed.ig_exact && ev.ig_exact)
      match = *inst.closed.ig_exact == *ev.ig_exact;
    else if (inst.closed.ig_value)
      match = std::abs(*inst.closed.ig_value - *ev.ig) <= kClosedFormTol;
  }
  for (auto& row : ev.rows) {
    row.closed_form_ig = inst.closed.ig_value;
    row.closed_form_match = match;
  }
  if (!match && ev.exit_code == kExitOk) ev.exit_code = kExitViolation;
}

void write_table(std::ostream& out, const std::vector<ReportRow>& rows, TableFormat format, bool closed_form_columns) {
  std::vector<std::string> header{"name",     "N",           "class",          "relax_value", "oracle_value",
                                  "oracle_ig", "bound_id",   "bound_value",    "rhs_independent", "sound",
                                  "oracle_prox"};
  if (closed_form_columns) {
    header.push_back("closed_form_ig");
    header.push_back("closed_form_match");
  }
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    std::vector<std::string> c{r.name,
                               r.N,
                               r.cls,
                               opt(r.relax_value),
                               r.oracle_value.value_or(""),
                               opt(r.oracle_ig),
                               r.bound ? r.bound->formula : "",
                               r.bound ? format_number(r.bound->value) : "",
                               r.bound ? (r.bound->rhs_independent ? "true" : "false") : "",
                               opt(r.sound),
                               opt(r.oracle_prox)};
    if (closed_form_columns) {
      c.push_back(opt(r.closed_form_ig));
      c.push_back(r.closed_form_match ? (*r.closed_form_match ? "yes" : "MISMATCH") : "");
    }
    cells.push_back(std::move(c));
  }
  if (format == TableFormat::Csv) {
    auto line = [&](const std::vector<std::string>& v) {
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << csv_field(v[i]);
      out << '\n';
    };
    line(header);
    for (const auto& c : cells) line(c);
    return;
  }
  auto line = [&](const std::vector<std::string>& v) {
    out << '|';
    for (const auto& s : v) out << ' ' << s << " |";
    out << '\n';
  };
  line(header);
  out << '|';
  for (std::size_t i = 0; i < header.size(); ++i) out << "---|";
  out << '\n';
  for (const auto& c : cells) line(c);
}

}  // namespace prox
