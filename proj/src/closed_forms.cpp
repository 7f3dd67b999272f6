#include "zwm/closed_forms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

#include "zwm/error.hpp"
#include "closed_forms_series.inc"

namespace zwm {

namespace {

const std::array<double, 9>& series_for(FormulaId id) {
  switch (id) {
    case FormulaId::F_PRED: return kFPredSeries;
    case FormulaId::F1: return kF1Series;
    case FormulaId::F2: return kF2Series;
    case FormulaId::LEMMA22_MAIN: return kLemma22MainSeries;
    case FormulaId::I1_MAIN: return kI1MainSeries;
    case FormulaId::I2_MAIN: return kI2MainSeries;
    case FormulaId::DIAG_MAIN: return kDiagMainSeries;
    case FormulaId::INGHAM_MAIN: return kInghamMainSeries;
    case FormulaId::GGM_UNWEIGHTED: return kGgmUnweightedSeries;
  }
  throw Error(ErrorCode::UnknownFormula, "formula id " + std::to_string(static_cast<int>(id)));
}

void check_a(double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw Error(ErrorCode::InvalidArgument, "a must be >= 0");
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string fmt(const char* f, double x, double y) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, x, y);
  return buf;
}

}  // namespace

std::string_view formula_name(FormulaId id) {
  switch (id) {
    case FormulaId::F_PRED: return "f_pred";
    case FormulaId::F1: return "f1";
    case FormulaId::F2: return "f2";
    case FormulaId::LEMMA22_MAIN: return "lemma22";
    case FormulaId::I1_MAIN: return "i1";
    case FormulaId::I2_MAIN: return "i2";
    case FormulaId::DIAG_MAIN: return "diag";
    case FormulaId::INGHAM_MAIN: return "ingham";
    case FormulaId::GGM_UNWEIGHTED: return "ggm";
  }
  throw Error(ErrorCode::UnknownFormula, "formula id " + std::to_string(static_cast<int>(id)));
}

FormulaId parse_formula(std::string_view name) {
  static constexpr std::array<const char*, 9> kEnumNames{
      "f_pred", "f1", "f2", "lemma22_main", "i1_main", "i2_main", "diag_main", "ingham_main",
      "ggm_unweighted"};
  std::string n = lower(name);
  for (std::size_t i = 0; i < kAllFormulas.size(); ++i)
    if (n == formula_name(kAllFormulas[i]) || n == kEnumNames[i]) return kAllFormulas[i];
  throw Error(ErrorCode::UnknownFormula, "no formula named '" + std::string(name) + "'");
}

double eval_formula_series(FormulaId id, double a) {
  check_a(a);
  const auto& c = series_for(id);
  double v = 0.0;
  for (int k = 8; k >= 0; --k) v = v * a + c[k];
  if (id == FormulaId::GGM_UNWEIGHTED)
    v += (a == 0.0) ? std::numeric_limits<double>::infinity() : 0.5 / a;
  return v;
}

double eval_formula_direct(FormulaId id, double a) {
  check_a(a);
  const double em = std::exp(-a);
  const double a2 = a * a, a3 = a2 * a;
  switch (id) {
    case FormulaId::F_PRED:
      return ((5.0 * a - 8.0) + 12.0 * em - (a + 4.0) * em * em) / (4.0 * a3);
    case FormulaId::F1:
      return (-a3 + 5.0 * a2 - 10.0 * a - 10.0 * std::expm1(-a)) / (2.0 * a3);
    case FormulaId::F2:
      return (em * (-4.0 * a2 - 4.0 * a - 2.0) + 2.0 * std::exp(a)) / (8.0 * a3);
    case FormulaId::LEMMA22_MAIN:
      return (a - 2.0) * (2.0 * em - 2.0 - a2 + 2.0 * a) / (2.0 * a3);
    case FormulaId::I1_MAIN:
      return (1.0 - a - em) / a2;
    case FormulaId::I2_MAIN:
      return (a - 2.0 + (a + 2.0) * em) / a3;
    case FormulaId::DIAG_MAIN:
      return (a2 - 4.0 * a + 6.0 - 2.0 * em * (a + 3.0)) / (4.0 * a3);
    case FormulaId::INGHAM_MAIN:
      return (em * em * (-4.0 * a2 - 4.0 * a - 2.0) + 2.0) / (8.0 * a3);
    case FormulaId::GGM_UNWEIGHTED:
      return -std::expm1(-2.0 * a) / (4.0 * a2);
  }
  throw Error(ErrorCode::UnknownFormula, "formula id " + std::to_string(static_cast<int>(id)));
}

double eval_formula(FormulaId id, double a) {
  if (a < kSeriesThreshold) return eval_formula_series(id, a);
  return eval_formula_direct(id, a);
}

IdentityReport identity_suite(std::span<const double> a_grid, const FormulaEvaluator& eval,
                              bool throw_on_violation) {
  IdentityReport rep;
  auto fail = [&](const std::string& what) {
    if (throw_on_violation) throw Error(ErrorCode::IdentityViolation, what);
    rep.violations.push_back(what);
  };
  for (double a : a_grid) {
    if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "identity grid must lie in (0, 4]");
    IdentityRow row;
    row.a = a;
    double f1 = eval(FormulaId::F1, a), f2 = eval(FormulaId::F2, a), fp = eval(FormulaId::F_PRED, a);
    double l22 = eval(FormulaId::LEMMA22_MAIN, a), dg = eval(FormulaId::DIAG_MAIN, a);
    double ing = eval(FormulaId::INGHAM_MAIN, a);
    row.lemma_split_rel = std::fabs(f1 - (l22 + 2.0 * dg)) / std::max(std::fabs(f1), 1e-300);
    row.ingham_rel = std::fabs(f2 - std::exp(a) * ing) / std::max(std::fabs(f2), 1e-300);
    row.f1_below_pred = f1 < fp;
    row.pred_below_f2 = fp <= f2;
    rep.max_lemma_split_rel = std::max(rep.max_lemma_split_rel, row.lemma_split_rel);
    rep.max_ingham_rel = std::max(rep.max_ingham_rel, row.ingham_rel);
    rep.rows.push_back(row);

    // At small a the split F1 = LEMMA22 + 2 DIAG is a difference of O(1)
    // terms; judge it on the scale of the summands.
    double split_scale = std::max({std::fabs(f1), std::fabs(l22), 2.0 * std::fabs(dg)});
    if (std::fabs(f1 - (l22 + 2.0 * dg)) > 1e-12 * split_scale)
      fail(fmt("F1 = LEMMA22_MAIN + 2 DIAG_MAIN fails at a = %.6g (rel %.3g)", a, row.lemma_split_rel));
    if (row.ingham_rel > 1e-12)
      fail(fmt("F2 = e^a INGHAM_MAIN fails at a = %.6g (rel %.3g)", a, row.ingham_rel));
    if (!row.f1_below_pred) fail(fmt("F1 < F_PRED fails at a = %.6g (gap %.3g)", a, f1 - fp));
    if (!row.pred_below_f2) {
      std::string msg = fmt("F_PRED <= F2 fails at a = %.6g (gap %.3g)", a, fp - f2);
      if (a <= 4.0)
        fail(msg);
      else
        rep.notes.push_back(msg);
    }
  }
  for (FormulaId id : kAllFormulas) {
    for (double a : {kSeriesThreshold - 1e-3, kSeriesThreshold, kSeriesThreshold + 1e-3}) {
      double s = eval_formula_series(id, a), d = eval_formula_direct(id, a);
      double gap = std::fabs(s - d) / std::max(std::fabs(d), 1e-3);
      rep.max_branch_gap = std::max(rep.max_branch_gap, gap);
      if (gap > 1e-10)
        fail(std::string(formula_name(id)) + fmt(": Taylor and direct branches differ at a = %.6g (%.3g)", a, gap));
    }
  }
  return rep;
}

}  // namespace zwm
