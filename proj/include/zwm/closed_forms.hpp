#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zwm {

enum class FormulaId {
  F_PRED,
  F1,
  F2,
  LEMMA22_MAIN,
  I1_MAIN,
  I2_MAIN,
  DIAG_MAIN,
  INGHAM_MAIN,
  GGM_UNWEIGHTED,
};

inline constexpr std::array<FormulaId, 9> kAllFormulas{
    FormulaId::F_PRED,      FormulaId::F1,        FormulaId::F2,
    FormulaId::LEMMA22_MAIN, FormulaId::I1_MAIN,   FormulaId::I2_MAIN,
    FormulaId::DIAG_MAIN,   FormulaId::INGHAM_MAIN, FormulaId::GGM_UNWEIGHTED};

inline constexpr double kSeriesThreshold = 1.0 / 8.0;

// Short column name used in CSV output (f_pred, f1, ..., ggm).
std::string_view formula_name(FormulaId id);
// Accepts the short names and the enumerator spellings, case-insensitive.
FormulaId parse_formula(std::string_view name);

// Small-a Taylor branch below 1/8, direct expression above. a = 0 returns the
// limit (+inf for GGM_UNWEIGHTED, which has a 1/(2a) pole).
double eval_formula(FormulaId id, double a);
double eval_formula_direct(FormulaId id, double a);
double eval_formula_series(FormulaId id, double a);

using FormulaEvaluator = std::function<double(FormulaId, double)>;

struct IdentityRow {
  double a = 0.0;
  double lemma_split_rel = 0.0;  // |F1 - (LEMMA22 + 2 DIAG)| / |F1|
  double ingham_rel = 0.0;       // |F2 - e^a INGHAM| / |F2|
  bool f1_below_pred = false;
  bool pred_below_f2 = false;
};

struct IdentityReport {
  std::vector<IdentityRow> rows;
  double max_lemma_split_rel = 0.0;
  double max_ingham_rel = 0.0;
  double max_branch_gap = 0.0;
  std::vector<std::string> violations;
  std::vector<std::string> notes;
  bool ok() const { return violations.empty(); }
};

// Throws IdentityViolation on the first hard failure when throw_on_violation
// is set; otherwise records every failure in the report.
IdentityReport identity_suite(std::span<const double> a_grid,
                              const FormulaEvaluator& eval = eval_formula,
                              bool throw_on_violation = true);

}  // namespace zwm
