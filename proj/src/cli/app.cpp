#include "prox/app.hpp"

#include <CLI11.hpp>
#include <fstream>

#include "prox/families.hpp"
#include "prox/report.hpp"

namespace prox {

namespace {

TableFormat parse_format(const std::string& s) { return s == "md" ? TableFormat::Markdown : TableFormat::Csv; }

std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, "bad --n-range '" + s + "', expected a..b");
  }
}

// Input errors outrank budget overruns, which outrank violations.
int combine(int a, int b) {
  for (int code : {kExitInput, kExitBudget, kExitViolation})
    if (a == code || b == code) return code;
  return kExitOk;
}

void print_notes(std::ostream& err, const std::string& name, const Evaluation& ev) {
  for (const auto& n : ev.notes) err << name << ": " << n << '\n';
}

int classify_command(const std::string& file, std::ostream& out) {
  Instance inst = load_instance(file);
  out << describe_class(inst) << '\n';
  if (inst.sets.size() > 1 && !inst.two_sphere) {
    for (std::size_t k = 0; k < inst.sets.size(); ++k) {
      Instance one = inst;
      one.sets = {inst.sets[k]};
      std::string kind;
      try {
        kind = describe_class(one);
      } catch (const Error& e) {
        kind = std::string("unclassified (") + e.what() + ")";
      }
      out << "  [" << k << "] " << kind << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int run_prox(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proximity and integrality-gap bounds for conic integer programs", "prox"};
  app.require_subcommand(1);

  std::string file, format = "csv", formula, family, range, epsilon = "1/2";
  std::string out_file;
  bool all = false;
  int n_value = 1;

  auto* classify = app.add_subcommand("classify", "Classify the instance's quadric(s)");
  classify->add_option("file", file, "Instance JSON")->required();

  auto* bound = app.add_subcommand("bound", "Print every applicable bound");
  bound->add_option("file", file, "Instance JSON")->required();
  auto* all_flag = bound->add_flag("--all", all, "All applicable bounds (default)");
  bound->add_option("--formula", formula, "Only this formula id")->excludes(all_flag);
  bound->add_option("--format", format, "csv or md")->check(CLI::IsMember({"csv", "md"}));

  auto* verify = app.add_subcommand("verify", "Compare bounds with the exact oracle");
  verify->add_option("file", file, "Instance JSON")->required();
  verify->add_option("--format", format, "csv or md")->check(CLI::IsMember({"csv", "md"}));

  auto* sweep = app.add_subcommand("sweep", "Closed form, oracle and bounds over a family");
  sweep->add_option("--family", family, "Family name")->required();
  sweep->add_option("--n-range", range, "a..b (default: the family's regression range)");
  sweep->add_option("--epsilon", epsilon, "ex2 offset, rational in (0,1)");
  sweep->add_option("--format", format, "csv or md")->check(CLI::IsMember({"csv", "md"}));

  auto* generate = app.add_subcommand("generate", "Write one family instance as JSON");
  generate->add_option("--family", family, "Family name")->required();
  generate->add_option("--n", n_value, "Parameter N")->required();
  generate->add_option("--epsilon", epsilon, "ex2 offset, rational in (0,1)");
  generate->add_option("-o,--output", out_file, "Output file (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*classify) return classify_command(file, out);

    if (*bound) {
      EvaluateOptions opts;
      opts.oracle = false;
      if (!formula.empty()) opts.formula = formula;
      Instance inst = load_instance(file);
      Evaluation ev = evaluate(inst, opts);
      write_table(out, ev.rows, parse_format(format), false);
      print_notes(err, inst.name, ev);
      return ev.exit_code;
    }

    if (*verify) {
      Instance inst = load_instance(file);
      Evaluation ev = evaluate(inst);
      write_table(out, ev.rows, parse_format(format), inst.closed.ig_value.has_value());
      print_notes(err, inst.name, ev);
      return ev.exit_code;
    }

    FamilyOptions fam;
    fam.epsilon = parse_rational(epsilon);

    if (*generate) {
      const std::string dump = to_json(make_family_instance(family, n_value, fam)).dump(2) + "\n";
      if (out_file.empty()) {
        out << dump;
      } else {
        std::ofstream f(out_file);
        if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + out_file);
        f << dump;
      }
      return kExitOk;
    }

    const auto [lo, hi] = range.empty() ? family_range(family) : parse_range(range);
    if (lo > hi) throw Error(ErrorCode::InvalidInput, "empty --n-range");
    std::vector<ReportRow> rows;
    int code = kExitOk;
    for (int N = lo; N <= hi; ++N) {
      Instance inst = make_family_instance(family, N, fam);
      Evaluation ev = evaluate(inst);
      compare_closed_form(inst, ev);
      rows.insert(rows.end(), ev.rows.begin(), ev.rows.end());
      print_notes(err, inst.name, ev);
      code = combine(code, ev.exit_code);
    }
    write_table(out, rows, parse_format(format), true);
    return code;
  } catch (const Error& e) {
    err << "prox: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "prox: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace prox
