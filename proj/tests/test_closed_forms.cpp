#include <doctest.h>

#include <cmath>
#include <vector>

#include "zwm/closed_forms.hpp"
#include "zwm/error.hpp"

using namespace zwm;

TEST_CASE("small-a expansions") {
  struct Row {
    FormulaId id;
    double c[4];
  };
  const Row rows[] = {
      {FormulaId::F_PRED, {1.0 / 3, -5.0 / 24, 3.0 / 40, -13.0 / 720}},
      {FormulaId::F1, {1.0 / 3, -5.0 / 24, 1.0 / 24, -1.0 / 144}},
      {FormulaId::F2, {1.0 / 3, -1.0 / 6, 1.0 / 15, -1.0 / 60}},
  };
  for (const Row& r : rows)
    for (double a : {1e-2, 1e-3}) {
      double poly = r.c[0] + a * (r.c[1] + a * (r.c[2] + a * r.c[3]));
      CHECK(std::fabs(eval_formula(r.id, a) - poly) <= 10.0 * std::pow(a, 4));
    }
}

TEST_CASE("limits at a -> 0") {
  for (auto id : {FormulaId::F_PRED, FormulaId::F1, FormulaId::F2, FormulaId::INGHAM_MAIN})
    CHECK(std::fabs(eval_formula(id, 1e-6) - 1.0 / 3.0) < 1e-5);
  CHECK(std::fabs(2e-6 * eval_formula(FormulaId::GGM_UNWEIGHTED, 1e-6) - 1.0) < 1e-5);
  CHECK(std::isinf(eval_formula(FormulaId::GGM_UNWEIGHTED, 0.0)));
}

TEST_CASE("frozen values") {
  CHECK(eval_formula(FormulaId::F1, 1.0) == doctest::Approx(2.0 - 5.0 / std::exp(1.0)).epsilon(1e-14));
  CHECK(eval_formula(FormulaId::F1, 1.0) == doctest::Approx(0.16060279414278839).epsilon(1e-14));
  for (double a : {0.3, 1.0, 2.5})
    CHECK(2 * a * eval_formula(FormulaId::GGM_UNWEIGHTED, a) ==
          doctest::Approx(-std::expm1(-2 * a) / (2 * a)).epsilon(1e-13));
  // Residue-kernel integrals, computed independently at 30 digits.
  CHECK(eval_formula(FormulaId::DIAG_MAIN, 0.5) == doctest::Approx(0.0085707640231220859).epsilon(1e-12));
  CHECK(eval_formula(FormulaId::DIAG_MAIN, 1.0) == doctest::Approx(0.014241117657075423).epsilon(1e-12));
  CHECK(eval_formula(FormulaId::DIAG_MAIN, 2.0) == doctest::Approx(0.020207723988398814).epsilon(1e-12));
}

TEST_CASE("identity suite on the standard grid") {
  std::vector<double> grid;
  for (int k = 1; k <= 80; ++k) grid.push_back(0.05 * k);
  auto rep = identity_suite(grid);
  CHECK(rep.ok());
  CHECK(rep.max_ingham_rel <= 1e-12);
  CHECK(rep.max_branch_gap <= 1e-10);
  CHECK(rep.rows.size() == 80);
}

TEST_CASE("identity suite notices a perturbed constant") {
  std::vector<double> grid{0.5, 1.0};
  FormulaEvaluator bad = [](FormulaId id, double a) {
    double v = eval_formula(id, a);
    return id == FormulaId::DIAG_MAIN ? v * 1.01 : v;
  };
  CHECK_THROWS_AS(identity_suite(grid, bad), Error);
  auto rep = identity_suite(grid, bad, false);
  CHECK_FALSE(rep.ok());
}

TEST_CASE("branches agree at the switch") {
  for (auto id : kAllFormulas)
    for (double a : {kSeriesThreshold * 0.99, kSeriesThreshold, kSeriesThreshold * 1.01}) {
      double s = eval_formula_series(id, a), d = eval_formula_direct(id, a);
      CHECK(std::fabs(s - d) <= 1e-10 * std::max(std::fabs(d), 1e-3));
    }
}

TEST_CASE("names") {
  for (auto id : kAllFormulas) CHECK(parse_formula(formula_name(id)) == id);
  CHECK(parse_formula("lemma22_main") == FormulaId::LEMMA22_MAIN);
  CHECK(formula_name(FormulaId::GGM_UNWEIGHTED) == "ggm");
  CHECK_THROWS_AS(parse_formula("nope"), Error);
}
