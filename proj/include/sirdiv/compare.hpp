#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sirdiv/analytic.hpp"
#include "sirdiv/mcsim.hpp"
#include "sirdiv/params.hpp"
#include "sirdiv/table.hpp"

namespace sirdiv {

/// Analytic-vs-simulation validation scenario, read from a flat key=value
/// config file.
struct CompareScenario {
  double contention = 0.0;  // from Delta or from (lambda, r, alpha)
  double delta = 0.0;
  std::vector<double> thetas{1.0};
  std::vector<int> n_list;
  std::int64_t realizations = 100000;
  std::uint64_t seed = 42;
  double bias_budget = 1e-4;
  Method method = Method::conditioned;
  std::vector<std::string> quantities{"joint", "selection"};
  int workers = 1;

  NormalizedParams params() const { return {contention, delta}; }
};

namespace detail {

inline std::string trim(std::string s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.erase(s.begin());
  while (!s.empty() && is_space(s.back())) s.pop_back();
  return s;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t pos = s.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(trim(s.substr(start)));
      break;
    }
    out.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

[[noreturn]] inline void scenario_error(std::size_t line, const std::string& what) {
  throw std::invalid_argument("scenario line " + std::to_string(line) + ": " +
                              what);
}

}  // namespace detail

/// Parses a flat key=value scenario. Unknown keys, malformed numbers, and an
/// empty n list are reported with their line number.
inline CompareScenario parse_scenario(std::istream& in) {
  CompareScenario sc;
  std::optional<double> Delta, delta, lambda, r, alpha;
  bool have_n = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      detail::scenario_error(line_no, "expected key=value");
    const std::string key = detail::trim(s.substr(0, eq));
    const std::string value = detail::trim(s.substr(eq + 1));
    if (value.empty()) detail::scenario_error(line_no, "empty value for " + key);

    try {
      if (key == "Delta") {
        Delta = parse_double(value, "Delta");
      } else if (key == "delta") {
        delta = parse_double(value, "delta");
      } else if (key == "lambda") {
        lambda = parse_double(value, "lambda");
      } else if (key == "r") {
        r = parse_double(value, "r");
      } else if (key == "alpha") {
        alpha = parse_double(value, "alpha");
      } else if (key == "theta" || key == "thetas") {
        sc.thetas.clear();
        for (const auto& item : detail::split_list(value))
          sc.thetas.push_back(parse_double(item, "theta"));
      } else if (key == "n") {
        sc.n_list.clear();
        for (const auto& item : detail::split_list(value)) {
          if (item.empty()) detail::scenario_error(line_no, "empty n entry");
          sc.n_list.push_back(static_cast<int>(parse_double(item, "n")));
        }
        have_n = true;
      } else if (key == "realizations") {
        sc.realizations =
            static_cast<std::int64_t>(parse_double(value, "realizations"));
      } else if (key == "seed") {
        sc.seed = static_cast<std::uint64_t>(
            std::stoull(value));
      } else if (key == "bias_budget") {
        sc.bias_budget = parse_double(value, "bias_budget");
      } else if (key == "method") {
        if (value == "naive")
          sc.method = Method::naive;
        else if (value == "conditioned")
          sc.method = Method::conditioned;
        else
          detail::scenario_error(line_no, "method must be naive|conditioned");
      } else if (key == "quantities") {
        sc.quantities = detail::split_list(value);
        for (const auto& q : sc.quantities)
          if (q != "joint" && q != "selection" && q != "correlation")
            detail::scenario_error(
                line_no, "unknown quantity '" + q +
                             "' (expected joint|selection|correlation)");
      } else if (key == "workers") {
        sc.workers = static_cast<int>(parse_double(value, "workers"));
      } else {
        detail::scenario_error(line_no, "unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      if (std::string(e.what()).rfind("scenario line", 0) == 0) throw;
      detail::scenario_error(line_no, e.what());
    }
  }

  const bool have_normalized = Delta.has_value() || delta.has_value();
  const bool have_physical = lambda.has_value() || r.has_value() || alpha.has_value();
  if (have_normalized && have_physical)
    throw std::invalid_argument(
        "scenario: give either (Delta, delta) or (lambda, r, alpha), not both");
  if (have_normalized) {
    if (!Delta || !delta)
      throw std::invalid_argument("scenario: both Delta and delta are required");
    sc.contention = *Delta;
    sc.delta = *delta;
  } else if (have_physical) {
    if (!lambda || !r || !alpha)
      throw std::invalid_argument(
          "scenario: lambda, r, and alpha are all required");
    const ModelParams m(*lambda, *r, *alpha);
    sc.contention = m.contention;
    sc.delta = m.delta;
  } else {
    throw std::invalid_argument(
        "scenario: parameters missing (Delta, delta) or (lambda, r, alpha)");
  }
  if (!have_n || sc.n_list.empty())
    throw std::invalid_argument("scenario: n list must be nonempty");
  for (int n : sc.n_list)
    if (n < 1) throw std::invalid_argument("scenario: n entries must be >= 1");
  NormalizedParams check = sc.params();  // validates ranges
  (void)check;
  return sc;
}

struct CompareRow {
  std::string quantity;
  int n;
  double theta;
  double analytic;
  double estimate;
  double std_error;
  double z;
};

namespace detail {

inline double z_score(double estimate, double analytic, double std_error) {
  if (std_error > 0.0) return (estimate - analytic) / std_error;
  if (estimate == analytic) return 0.0;
  return estimate > analytic ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Runs every requested quantity and reports analytic value, Monte Carlo
/// estimate, standard error, and the z score of their difference.
inline std::vector<CompareRow> run_compare(const CompareScenario& sc) {
  const NormalizedParams p = sc.params();
  int n_cap = 1;
  for (int n : sc.n_list) n_cap = std::max(n_cap, n);
  for (const auto& q : sc.quantities)
    if (q == "correlation") n_cap = std::max(n_cap, 2);

  SimConfig cfg{.model = canonical_model(p)};
  cfg.n_antennas = n_cap;
  cfg.thresholds = sc.thetas;
  cfg.num_realizations = sc.realizations;
  cfg.seed = sc.seed;
  cfg.bias_budget = sc.bias_budget;
  cfg.workers = sc.workers;

  std::vector<CompareRow> rows;
  for (const auto& q : sc.quantities) {
    for (double theta : sc.thetas) {
      if (q == "correlation") {
        const double analytic = indicator_correlation(p, theta);
        const Estimate e = estimate_indicator_correlation(cfg, theta, sc.method);
        rows.push_back({q, 2, theta, analytic, e.mean, e.std_error,
                        detail::z_score(e.mean, analytic, e.std_error)});
        continue;
      }
      for (int n : sc.n_list) {
        double analytic = 0.0;
        Estimate e;
        if (q == "joint") {
          analytic = joint_success_prob(p, n, theta);
          e = estimate_joint_success(cfg, n, theta, sc.method);
        } else {  // selection
          analytic = selection_combining_prob(p, n, theta);
          e = estimate_selection_combining(cfg, n, theta, sc.method);
        }
        rows.push_back({q, n, theta, analytic, e.mean, e.std_error,
                        detail::z_score(e.mean, analytic, e.std_error)});
      }
    }
  }
  return rows;
}

inline std::string format_compare_table(const std::vector<CompareRow>& rows) {
  std::string out = "quantity,n,theta,analytic,estimate,std_error,z\n";
  for (const auto& r : rows) {
    out += r.quantity;
    out += ',' + std::to_string(r.n);
    out += ',' + format_double(r.theta);
    out += ',' + format_double(r.analytic);
    out += ',' + format_double(r.estimate);
    out += ',' + format_double(r.std_error);
    out += ',' + format_double(r.z);
    out += '\n';
  }
  return out;
}

inline bool compare_within_tolerance(const std::vector<CompareRow>& rows,
                                     double z_limit = 4.0) {
  return std::all_of(rows.begin(), rows.end(), [z_limit](const CompareRow& r) {
    return std::abs(r.z) <= z_limit;
  });
}

}  // namespace sirdiv
