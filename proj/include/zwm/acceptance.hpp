#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "zwm/closed_forms.hpp"

namespace zwm {

enum class Tier { Fast, Slow };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double runtime_s = 0.0;
  double budget_s = 0.0;
};

struct AcceptanceOptions {
  Tier tier = Tier::Fast;
  std::uint64_t seed = 0;
  // Criteria to run (1..13); empty means all.
  std::vector<int> only;
  // Closed-form evaluator used for every comparison; tests swap in a
  // perturbed one to make sure the harness notices.
  FormulaEvaluator formulas = eval_formula;
  double moment_tol = 1e-5;
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

// "PASS  3 residue-kernel quadrature (0.12 s) ..." style line.
std::string format_result(const CriterionResult& r);

}  // namespace zwm
