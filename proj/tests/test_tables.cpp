#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sirdiv/analytic.hpp"
#include "sirdiv/compare.hpp"
#include "sirdiv/eval.hpp"
#include "sirdiv/figures.hpp"
#include "sirdiv/manifest.hpp"
#include "sirdiv/table.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace sirdiv;

TEST_CASE("doubles round-trip through the CSV format") {
  for (double v : {0.0, 1.0, -3.5, 0.1, 1e-17, 6.02e23, 0.7788007830714049,
                   -2.2250738585072014e-308}) {
    REQUIRE(parse_double(format_double(v), "test") == v);
  }
}

TEST_CASE("curve table serialization round-trips byte for byte") {
  CurveTable t;
  t.title = "example";
  t.x_label = "x";
  t.series_labels = {"a", "b"};
  t.params = {{"Delta", "0.25"}, {"note", "fixture"}};
  t.rows = {{0.0, {1.0, -0.5}}, {0.5, {0.3333333333333333, 2e-9}},
            {1.0, {0.1, 3.14159265358979}}};
  const std::string csv = to_csv(t);
  const CurveTable parsed = parse_csv(csv);
  REQUIRE(parsed.title == t.title);
  REQUIRE(parsed.x_label == t.x_label);
  REQUIRE(parsed.series_labels == t.series_labels);
  REQUIRE(parsed.params == t.params);
  REQUIRE(parsed.rows.size() == t.rows.size());
  REQUIRE(to_csv(parsed) == csv);
}

TEST_CASE("curve table validation") {
  CurveTable t;
  t.x_label = "x";
  t.series_labels = {"a"};
  t.rows = {{1.0, {1.0}}, {1.0, {2.0}}};
  REQUIRE_THROWS_AS(to_csv(t), std::invalid_argument);
  t.rows = {{1.0, {1.0, 2.0}}};
  REQUIRE_THROWS_AS(to_csv(t), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_csv("# title: x\n"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_csv("x,a\n1,notanumber\n"), std::invalid_argument);
}

TEST_CASE("figure tables match direct evaluations") {
  const CurveTable f1 = figure_table(1);
  REQUIRE(f1.rows.size() == 101);
  REQUIRE(f1.series_labels.size() == 12);
  const auto& mid = f1.rows[50];
  REQUIRE(mid.first == 0.5);
  REQUIRE_THAT(mid.second[9], WithinRel(diversity_poly(8, 0.5), 1e-12));
  REQUIRE_THAT(mid.second[10], WithinRel(std::pow(8.0, 0.5), 1e-12));

  const NormalizedParams p2(0.25, 0.5);
  const CurveTable f2 = figure_table(2);
  REQUIRE(f2.rows.size() == 25);
  REQUIRE(f2.rows.front().first == 1.0);
  REQUIRE_THAT(f2.rows.front().second[0],
               WithinRel(single_success_prob(p2, 1.0), 1e-12));
  REQUIRE_THAT(f2.rows[7].second[0],
               WithinRel(joint_success_prob(p2, 8, 1.0), 1e-12));

  const CurveTable f3 = figure_table(3);
  REQUIRE(f3.rows.size() == 99);
  const auto& row = f3.rows[49];  // delta = 0.5
  REQUIRE_THAT(row.first, WithinRel(0.5, 1e-12));
  REQUIRE_THAT(row.second[1],
               WithinRel(indicator_correlation(NormalizedParams(1.0, 0.5), 1.0),
                         1e-12));

  const CurveTable f4 = figure_table(4);
  REQUIRE(f4.rows.size() == 61);
  REQUIRE(f4.series_labels.front() == "Delta");
  // Delta column equals Gamma(1+delta) Gamma(1-delta) / 3 along the grid.
  for (const auto& r : {f4.rows[0], f4.rows[30], f4.rows[60]}) {
    const double delta = 2.0 / r.first;
    REQUIRE_THAT(r.second[0],
                 WithinRel(interference_constant(delta) / 3.0, 1e-12));
  }

  const CurveTable f5 = figure_table(5);
  REQUIRE(f5.rows.size() == 128);
  REQUIRE_THAT(f5.rows[63].second[0], WithinRel(std::log10(64.0), 1e-12));
  REQUIRE_THAT(f5.rows[63].second[1],
               WithinRel(selection_combining_prob(NormalizedParams(0.5, 0.5),
                                                  64, 1.0),
                         1e-12));

  REQUIRE_THROWS_AS(figure_table(0), std::invalid_argument);
  REQUIRE_THROWS_AS(figure_table(6), std::invalid_argument);
}

TEST_CASE("figure tables with simulation columns") {
  FigureOptions opts;
  opts.with_sim = true;
  opts.realizations = 4000;
  const CurveTable f2 = figure_table(2, opts);
  REQUIRE(f2.series_labels.size() == 6);
  REQUIRE(f2.series_labels[4] == "P_n_mc");
  for (const auto& r : f2.rows) {
    const double analytic = r.second[0];
    const double mc = r.second[4];
    const double se = r.second[5];
    REQUIRE(se > 0.0);
    REQUIRE_THAT(mc, WithinAbs(analytic, 5.0 * se));
  }
}

TEST_CASE("scenario parsing and diagnostics") {
  std::istringstream good(
      "# demo scenario\n"
      "Delta = 0.25\n"
      "delta = 0.5\n"
      "theta = 1\n"
      "n = 1,2,4\n"
      "realizations = 5000\n"
      "seed = 7\n"
      "quantities = joint,selection\n");
  const CompareScenario sc = parse_scenario(good);
  REQUIRE(sc.contention == 0.25);
  REQUIRE(sc.n_list == std::vector<int>{1, 2, 4});
  REQUIRE(sc.seed == 7);

  std::istringstream physical(
      "lambda = 0.050660591821168886\n"
      "r = 1\n"
      "alpha = 4\n"
      "n = 1\n");
  const CompareScenario sp = parse_scenario(physical);
  REQUIRE_THAT(sp.contention, WithinRel(0.25, 1e-12));

  std::istringstream missing_n("Delta = 1\ndelta = 0.5\n");
  REQUIRE_THROWS_AS(parse_scenario(missing_n), std::invalid_argument);

  std::istringstream unknown("Delta = 1\ndelta = 0.5\nn = 1\nbogus = 2\n");
  REQUIRE_THROWS_WITH(parse_scenario(unknown),
                      Catch::Matchers::ContainsSubstring("line 4"));

  std::istringstream both("Delta = 1\ndelta = 0.5\nlambda = 1\nn = 1\n");
  REQUIRE_THROWS_AS(parse_scenario(both), std::invalid_argument);
}

TEST_CASE("compare runs and reports z scores") {
  CompareScenario sc;
  sc.contention = 0.25;
  sc.delta = 0.5;
  sc.thetas = {1.0};
  sc.n_list = {1, 2};
  sc.realizations = 20000;
  sc.seed = 11;
  sc.quantities = {"joint", "selection", "correlation"};
  const auto rows = run_compare(sc);
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) {
    INFO(r.quantity << " n=" << r.n);
    REQUIRE(std::abs(r.z) <= 4.0);
  }
  REQUIRE(compare_within_tolerance(rows));

  // Deterministic: the formatted table reproduces byte for byte.
  REQUIRE(format_compare_table(rows) == format_compare_table(run_compare(sc)));
}

TEST_CASE("z tolerance gate flags outliers") {
  std::vector<CompareRow> rows = {{"joint", 1, 1.0, 0.5, 0.5, 0.01, 0.0}};
  REQUIRE(compare_within_tolerance(rows));
  rows.push_back({"joint", 2, 1.0, 0.5, 0.55, 0.01, 5.0});
  REQUIRE_FALSE(compare_within_tolerance(rows));
  rows.back().z = -4.5;
  REQUIRE_FALSE(compare_within_tolerance(rows));
}

TEST_CASE("manifest serialization") {
  RunManifest m;
  m.command = "sirdiv fig 2 --out fig2.csv";
  m.config = {{"figure", "2"}, {"sim", "false"}};
  m.seed = 42;
  m.duration_seconds = 0.25;
  const std::string j = manifest_json(m);
  REQUIRE(j.find("\"command\"") != std::string::npos);
  REQUIRE(j.find("sirdiv fig 2") != std::string::npos);
  REQUIRE(j.find("\"version\"") != std::string::npos);
  REQUIRE(manifest_path("out/fig2.csv") ==
          std::filesystem::path("out/fig2.csv.manifest.json"));
}

TEST_CASE("quantity evaluation dispatch") {
  const EvalResult joint = evaluate_quantity(
      "joint_success_prob", {"Delta=0.25", "delta=0.5", "n=2", "theta=1"});
  REQUIRE(joint.values.size() == 1);
  REQUIRE(joint.values[0].second == "0.687289278791");

  const EvalResult loss =
      evaluate_quantity("diversity_loss", {"n=2", "delta=0.5"});
  REQUIRE(loss.values[0].second == "1.333333333333");

  const EvalResult poly = evaluate_quantity("diversity_poly", {"n=1", "x=0.7"});
  REQUIRE(poly.values[0].second == "1");

  // Unicode parameter aliases map onto the spelled-out names.
  const EvalResult aliased = evaluate_quantity(
      "joint_success_prob", {"Δ=0.25", "δ=0.5", "n=2", "θ=1"});
  REQUIRE(aliased.values[0].second == "0.687289278791");

  const EvalResult bounds =
      evaluate_quantity("diversity_poly_bounds", {"n=8", "x=0.5"});
  REQUIRE(bounds.values.size() == 3);
  REQUIRE(bounds.values[0].first == "lower");

  REQUIRE_THROWS_AS(evaluate_quantity("no_such_quantity", {}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(
      evaluate_quantity("diversity_loss", {"n=2", "delta=0.5", "zz=1"}),
      std::invalid_argument);
  REQUIRE_THROWS_AS(evaluate_quantity("diversity_loss", {"n=2"}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(
      evaluate_quantity("joint_success_prob",
                        {"Delta=0.25", "delta=0.5", "lambda=1", "r=1",
                         "alpha=4", "n=2", "theta=1"}),
      std::invalid_argument);
}
