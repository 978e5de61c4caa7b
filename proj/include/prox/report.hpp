#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "prox/instance.hpp"

namespace prox {

enum ExitCode { kExitOk = 0, kExitViolation = 1, kExitInput = 2, kExitBudget = 3 };

struct ReportRow {
  std::string name;
  std::string N;
  std::string cls;
  std::optional<double> relax_value;
  std::optional<std::string> oracle_value;  // exact integer
  std::optional<double> oracle_ig;
  std::optional<BoundReport> bound;
  std::optional<bool> sound;
  std::optional<double> oracle_prox;
  // Sweeps only.
  std::optional<double> closed_form_ig;
  std::optional<bool> closed_form_match;
};

struct Evaluation {
  std::vector<ReportRow> rows;
  std::optional<IpSolution> ip;
  std::optional<Rational> ig_exact;  // oracle IG when the relaxation value is rational
  std::optional<double> ig;
  int exit_code = kExitOk;
  std::vector<std::string> notes;
};

struct EvaluateOptions {
  bool oracle = true;
  std::optional<std::string> formula;  // keep only this bound id
  std::uint64_t budget = 0;            // 0: oracle_budget()
};

std::string describe_class(const Instance& inst);
std::vector<BoundReport> instance_bounds(const Instance& inst);
Evaluation evaluate(const Instance& inst, const EvaluateOptions& options = {});
// Adds the closed-form columns and marks mismatches (exact on rationals, else 1e-9).
void compare_closed_form(const Instance& inst, Evaluation& ev);

enum class TableFormat { Csv, Markdown };
void write_table(std::ostream& out, const std::vector<ReportRow>& rows, TableFormat format, bool closed_form_columns);
std::string format_number(double v);

}  // namespace prox
