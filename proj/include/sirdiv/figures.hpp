#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sirdiv/analytic.hpp"
#include "sirdiv/mcsim.hpp"
#include "sirdiv/params.hpp"
#include "sirdiv/specfun.hpp"
#include "sirdiv/table.hpp"

namespace sirdiv {

struct FigureOptions {
  bool with_sim = false;
  std::int64_t realizations = 100000;
  std::uint64_t seed = 42;
  double bias_budget = 1e-4;
  int workers = 1;
};

namespace detail {

inline SimConfig figure_sim_config(const NormalizedParams& p, int n_antennas,
                                   double theta, const FigureOptions& opts) {
  SimConfig cfg{.model = canonical_model(p)};
  cfg.n_antennas = n_antennas;
  cfg.thresholds = {theta};
  cfg.num_realizations = opts.realizations;
  cfg.seed = opts.seed;
  cfg.bias_budget = opts.bias_budget;
  cfg.workers = opts.workers;
  return cfg;
}

inline void append_sim_metadata(CurveTable& t, const FigureOptions& opts) {
  t.params.emplace_back("realizations", std::to_string(opts.realizations));
  t.params.emplace_back("seed", std::to_string(opts.seed));
  t.params.emplace_back("bias_budget", format_double(opts.bias_budget));
  t.params.emplace_back("method", "conditioned");
}

// Diversity polynomial with its bounds for n in {1, 2, 4, 8}.
inline CurveTable figure1(const FigureOptions&) {
  const int orders[] = {1, 2, 4, 8};
  CurveTable t;
  t.title = "Diversity polynomial with lower and upper bounds";
  t.x_label = "x";
  t.params.emplace_back("orders", "1,2,4,8");
  t.params.emplace_back("x_grid", "101 points on [0,1]");
  for (int n : orders) {
    t.series_labels.push_back("D_" + std::to_string(n));
    t.series_labels.push_back("lower_" + std::to_string(n));
    t.series_labels.push_back("upper_" + std::to_string(n));
  }
  for (int i = 0; i <= 100; ++i) {
    const double x = static_cast<double>(i) / 100.0;
    std::vector<double> row;
    for (int n : orders) {
      const DiversityBounds b = diversity_poly_bounds(n, x);
      row.push_back(diversity_poly(n, x));
      row.push_back(b.lower);
      row.push_back(b.upper_asymptotic);
    }
    t.rows.emplace_back(x, std::move(row));
  }
  return t;
}

// Joint success probability vs n with the probability bounds and the
// independent-interference reference, for contention 1/4 and delta 1/2.
inline CurveTable figure2(const FigureOptions& opts) {
  const NormalizedParams p(0.25, 0.5);
  const double theta = 1.0;
  const int n_max = 25;
  CurveTable t;
  t.title = "Joint success probability vs number of antennas";
  t.x_label = "n";
  t.params.emplace_back("Delta", "0.25");
  t.params.emplace_back("delta", "0.5");
  t.params.emplace_back("theta", "1");
  t.series_labels = {"P_n", "lower", "upper", "independent"};
  if (opts.with_sim) {
    t.series_labels.push_back("P_n_mc");
    t.series_labels.push_back("P_n_se");
    append_sim_metadata(t, opts);
  }
  SimConfig cfg = figure_sim_config(p, n_max, theta, opts);
  for (int n = 1; n <= n_max; ++n) {
    std::vector<double> row;
    const ProbBounds b = joint_prob_bounds(p, n, theta);
    row.push_back(joint_success_prob(p, n, theta));
    row.push_back(b.lower);
    row.push_back(b.upper);
    row.push_back(independent_joint_prob(p, n, theta));
    if (opts.with_sim) {
      const Estimate e =
          estimate_joint_success(cfg, n, theta, Method::conditioned);
      row.push_back(e.mean);
      row.push_back(e.std_error);
    }
    t.rows.emplace_back(static_cast<double>(n), std::move(row));
  }
  return t;
}

// Indicator correlation vs delta for three contention levels, theta = 1.
inline CurveTable figure3(const FigureOptions& opts) {
  const double contentions[] = {0.1, 1.0, 10.0};
  const double theta = 1.0;
  CurveTable t;
  t.title = "Success-indicator correlation vs delta";
  t.x_label = "delta";
  t.params.emplace_back("Delta", "0.1,1,10");
  t.params.emplace_back("theta", "1");
  t.params.emplace_back("delta_grid", "99 points on [0.01,0.99]");
  for (double c : contentions)
    t.series_labels.push_back("zeta_" + format_double(c));
  if (opts.with_sim) {
    for (double c : contentions) {
      t.series_labels.push_back("zeta_" + format_double(c) + "_mc");
      t.series_labels.push_back("zeta_" + format_double(c) + "_se");
    }
    append_sim_metadata(t, opts);
  }
  for (int i = 1; i <= 99; ++i) {
    const double delta = static_cast<double>(i) / 100.0;
    std::vector<double> row;
    for (double c : contentions)
      row.push_back(indicator_correlation(NormalizedParams(c, delta), theta));
    if (opts.with_sim) {
      for (double c : contentions) {
        const NormalizedParams p(c, delta);
        SimConfig cfg = figure_sim_config(p, 2, theta, opts);
        const Estimate e =
            estimate_indicator_correlation(cfg, theta, Method::conditioned);
        row.push_back(e.mean);
        row.push_back(e.std_error);
      }
    }
    t.rows.emplace_back(delta, std::move(row));
  }
  return t;
}

// Selection-combining outage vs path loss exponent for n in {2, 4, 16},
// theta = 1 and contention Gamma(1+delta) Gamma(1-delta) / 3.
inline CurveTable figure4(const FigureOptions& opts) {
  const int orders[] = {2, 4, 16};
  const double theta = 1.0;
  CurveTable t;
  t.title = "Selection-combining outage vs path loss exponent";
  t.x_label = "alpha";
  t.params.emplace_back("theta", "1");
  t.params.emplace_back("Delta", "Gamma(1+delta)*Gamma(1-delta)/3");
  t.params.emplace_back("alpha_grid", "61 points on [2.1,8]");
  t.series_labels.push_back("Delta");
  for (int n : orders) {
    t.series_labels.push_back("outage_" + std::to_string(n));
    t.series_labels.push_back("outage_indep_" + std::to_string(n));
  }
  if (opts.with_sim) {
    for (int n : orders) {
      t.series_labels.push_back("outage_" + std::to_string(n) + "_mc");
      t.series_labels.push_back("outage_" + std::to_string(n) + "_se");
    }
    append_sim_metadata(t, opts);
  }
  for (int i = 0; i <= 60; ++i) {
    const double alpha = 2.1 + static_cast<double>(i) * (8.0 - 2.1) / 60.0;
    const double delta = 2.0 / alpha;
    const double contention = interference_constant(delta) / 3.0;
    const NormalizedParams p(contention, delta);
    std::vector<double> row;
    row.push_back(contention);
    for (int n : orders) {
      row.push_back(1.0 - selection_combining_prob(p, n, theta));
      row.push_back(1.0 - independent_selection_prob(p, n, theta));
    }
    if (opts.with_sim) {
      SimConfig cfg = figure_sim_config(p, 16, theta, opts);
      for (int n : orders) {
        const Estimate e =
            estimate_selection_combining(cfg, n, theta, Method::conditioned);
        row.push_back(1.0 - e.mean);
        row.push_back(e.std_error);
      }
    }
    t.rows.emplace_back(alpha, std::move(row));
  }
  return t;
}

// Selection-combining success probability vs n on a log axis, for
// Delta theta^delta = 1/2 and delta = 1/2.
inline CurveTable figure5(const FigureOptions& opts) {
  const NormalizedParams p(0.5, 0.5);
  const double theta = 1.0;
  const int n_max = 128;
  CurveTable t;
  t.title = "Selection-combining success probability vs number of antennas";
  t.x_label = "n";
  t.params.emplace_back("Delta", "0.5");
  t.params.emplace_back("delta", "0.5");
  t.params.emplace_back("theta", "1");
  t.params.emplace_back("n_grid", "1..128");
  t.series_labels = {"log10_n", "p_n", "p_independent"};
  if (opts.with_sim) {
    t.series_labels.push_back("p_n_mc");
    t.series_labels.push_back("p_n_se");
    append_sim_metadata(t, opts);
  }
  SimConfig cfg = figure_sim_config(p, n_max, theta, opts);
  for (int n = 1; n <= n_max; ++n) {
    std::vector<double> row;
    row.push_back(std::log10(static_cast<double>(n)));
    row.push_back(selection_combining_prob(p, n, theta));
    row.push_back(independent_selection_prob(p, n, theta));
    if (opts.with_sim) {
      const Estimate e =
          estimate_selection_combining(cfg, n, theta, Method::conditioned);
      row.push_back(e.mean);
      row.push_back(e.std_error);
    }
    t.rows.emplace_back(static_cast<double>(n), std::move(row));
  }
  return t;
}

}  // namespace detail

/// Data behind the five reference figures, parameterized exactly as their
/// captions. With `with_sim`, Monte Carlo estimate and standard-error
/// columns are appended where an estimator exists (figures 2-5).
inline CurveTable figure_table(int figure, const FigureOptions& opts = {}) {
  switch (figure) {
    case 1:
      return detail::figure1(opts);
    case 2:
      return detail::figure2(opts);
    case 3:
      return detail::figure3(opts);
    case 4:
      return detail::figure4(opts);
    case 5:
      return detail::figure5(opts);
    default:
      throw std::invalid_argument("figure_table: figure must be 1..5");
  }
}

}  // namespace sirdiv
