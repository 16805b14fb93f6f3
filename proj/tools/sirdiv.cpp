// Command-line front end: closed-form evaluation, figure-data generation,
// simulation runs, and analytic-vs-simulation comparison.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sirdiv/compare.hpp"
#include "sirdiv/eval.hpp"
#include "sirdiv/figures.hpp"
#include "sirdiv/manifest.hpp"
#include "sirdiv/mcsim.hpp"
#include "sirdiv/table.hpp"
#include "sirdiv/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitStatistical = 2;

std::string join_command(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

struct ModelFlags {
  double Delta = 0.0;
  double delta = 0.0;
  double lambda = 0.0;
  double r = 1.0;
  double alpha = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--Delta", Delta, "normalized contention");
    app->add_option("--delta", delta, "2 / alpha, in (0,1)");
    app->add_option("--lambda", lambda, "interferer intensity");
    app->add_option("--r", r, "link distance (default 1)");
    app->add_option("--alpha", alpha, "path loss exponent (> 2)");
  }

  sirdiv::NormalizedParams resolve() const {
    const bool normalized = Delta > 0.0 || delta > 0.0;
    const bool physical = lambda > 0.0 || alpha > 0.0;
    if (normalized && physical)
      throw std::invalid_argument(
          "give either (--Delta, --delta) or (--lambda, --r, --alpha)");
    if (physical)
      return sirdiv::normalize(sirdiv::ModelParams(lambda, r, alpha));
    return {Delta, delta};
  }

  void record(std::map<std::string, std::string>& config) const {
    const sirdiv::NormalizedParams p = resolve();
    config["Delta"] = sirdiv::format_double(p.contention);
    config["delta"] = sirdiv::format_double(p.delta);
  }
};

int run_eval(const std::string& quantity,
             const std::vector<std::string>& params) {
  const sirdiv::EvalResult result = sirdiv::evaluate_quantity(quantity, params);
  for (const auto& [label, value] : result.values) {
    if (label.empty())
      std::cout << value << "\n";
    else
      std::cout << label << " " << value << "\n";
  }
  return kExitOk;
}

int run_fig(int figure, const std::string& out, const sirdiv::FigureOptions& opts,
            const std::string& command) {
  Stopwatch timer;
  const sirdiv::CurveTable table = sirdiv::figure_table(figure, opts);
  const std::string csv = sirdiv::to_csv(table);
  write_text_file(out, csv);

  sirdiv::RunManifest manifest;
  manifest.command = command;
  manifest.seed = opts.seed;
  manifest.config["figure"] = std::to_string(figure);
  manifest.config["sim"] = opts.with_sim ? "true" : "false";
  manifest.config["realizations"] = std::to_string(opts.realizations);
  manifest.config["bias_budget"] = sirdiv::format_double(opts.bias_budget);
  for (const auto& [k, v] : table.params) manifest.config["param " + k] = v;
  manifest.duration_seconds = timer.seconds();
  sirdiv::write_manifest(out, manifest);

  std::cout << "wrote " << out << " (" << table.rows.size() << " rows)\n";
  return kExitOk;
}

struct SimulateArgs {
  ModelFlags model;
  std::string quantity = "joint";
  int n = 1;
  double theta = 1.0;
  double theta2 = 0.0;
  int k_max = 8;
  std::string method = "conditioned";
  std::int64_t realizations = 100000;
  std::uint64_t seed = 42;
  double bias_budget = 1e-4;
  int workers = 1;
  std::string out;
  std::string dump;
};

int run_simulate(const SimulateArgs& args, const std::string& command) {
  Stopwatch timer;
  const sirdiv::NormalizedParams p = args.model.resolve();
  const sirdiv::Method method = args.method == "naive"
                                    ? sirdiv::Method::naive
                                    : sirdiv::Method::conditioned;
  if (args.method != "naive" && args.method != "conditioned")
    throw std::invalid_argument("--method must be naive or conditioned");

  sirdiv::SimConfig cfg{.model = sirdiv::canonical_model(p)};
  cfg.n_antennas = std::max(args.n, args.quantity == "correlation" ? 2 : 1);
  cfg.thresholds = {args.theta};
  if (args.quantity == "two_antenna" && args.theta2 > 0.0)
    cfg.thresholds.push_back(args.theta2);
  cfg.num_realizations = args.realizations;
  cfg.seed = args.seed;
  cfg.bias_budget = args.bias_budget;
  cfg.workers = args.workers;

  std::string csv = "quantity,n,theta,theta2,estimate,std_error,count\n";
  auto add_row = [&csv](const std::string& q, int n, double t1, double t2,
                        const sirdiv::Estimate& e) {
    csv += q + ',' + std::to_string(n) + ',' + sirdiv::format_double(t1) + ',' +
           sirdiv::format_double(t2) + ',' + sirdiv::format_double(e.mean) +
           ',' + sirdiv::format_double(e.std_error) + ',' +
           std::to_string(e.count) + '\n';
  };

  if (args.quantity == "joint") {
    add_row("joint", args.n, args.theta, 0.0,
            sirdiv::estimate_joint_success(cfg, args.n, args.theta, method));
  } else if (args.quantity == "selection") {
    add_row("selection", args.n, args.theta, 0.0,
            sirdiv::estimate_selection_combining(cfg, args.n, args.theta,
                                                 method));
  } else if (args.quantity == "correlation") {
    add_row("correlation", 2, args.theta, 0.0,
            sirdiv::estimate_indicator_correlation(cfg, args.theta, method));
  } else if (args.quantity == "two_antenna") {
    add_row("two_antenna", 2, args.theta, args.theta2,
            sirdiv::estimate_two_antenna_joint(cfg, args.theta, args.theta2));
  } else if (args.quantity == "tail") {
    const auto tail =
        sirdiv::estimate_first_success_tail(cfg, args.theta, args.k_max);
    for (std::size_t k = 0; k < tail.size(); ++k)
      add_row("tail", static_cast<int>(k), args.theta, 0.0, tail[k]);
  } else {
    throw std::invalid_argument(
        "--quantity must be joint|selection|correlation|two_antenna|tail");
  }

  std::cout << csv;

  auto manifest_for = [&](double duration) {
    sirdiv::RunManifest manifest;
    manifest.command = command;
    manifest.seed = args.seed;
    args.model.record(manifest.config);
    manifest.config["quantity"] = args.quantity;
    manifest.config["n"] = std::to_string(args.n);
    manifest.config["theta"] = sirdiv::format_double(args.theta);
    if (args.quantity == "two_antenna")
      manifest.config["theta2"] = sirdiv::format_double(args.theta2);
    if (args.quantity == "tail")
      manifest.config["k_max"] = std::to_string(args.k_max);
    manifest.config["method"] = args.method;
    manifest.config["realizations"] = std::to_string(args.realizations);
    manifest.config["bias_budget"] = sirdiv::format_double(args.bias_budget);
    manifest.duration_seconds = duration;
    return manifest;
  };

  if (!args.out.empty()) {
    write_text_file(args.out, csv);
    sirdiv::write_manifest(args.out, manifest_for(timer.seconds()));
  }
  if (!args.dump.empty()) {
    std::ofstream os(args.dump, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + args.dump);
    sirdiv::write_realization_dump(cfg, os);
    sirdiv::write_manifest(args.dump, manifest_for(timer.seconds()));
  }
  return kExitOk;
}

int run_compare(const std::string& config_path, const std::string& out,
                int workers_override, const std::string& command) {
  Stopwatch timer;
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open config " << config_path << "\n";
    return kExitUsage;
  }
  sirdiv::CompareScenario sc = sirdiv::parse_scenario(in);
  if (workers_override > 0) sc.workers = workers_override;

  const auto rows = sirdiv::run_compare(sc);
  const std::string table = sirdiv::format_compare_table(rows);
  std::cout << table;

  if (!out.empty()) {
    write_text_file(out, table);
    sirdiv::RunManifest manifest;
    manifest.command = command;
    manifest.seed = sc.seed;
    manifest.config["config_file"] = config_path;
    manifest.config["Delta"] = sirdiv::format_double(sc.contention);
    manifest.config["delta"] = sirdiv::format_double(sc.delta);
    manifest.config["realizations"] = std::to_string(sc.realizations);
    manifest.config["bias_budget"] = sirdiv::format_double(sc.bias_budget);
    manifest.config["method"] =
        sc.method == sirdiv::Method::naive ? "naive" : "conditioned";
    manifest.duration_seconds = timer.seconds();
    sirdiv::write_manifest(out, manifest);
  }

  if (!sirdiv::compare_within_tolerance(rows)) {
    std::cerr << "statistical acceptance failed: |z| > 4 for at least one row\n";
    return kExitStatistical;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string command = join_command(argc, argv);
  CLI::App app{
      "SIR statistics of multi-antenna receivers in Poisson interference "
      "fields: closed forms and a cross-validating Monte Carlo simulator"};
  app.set_version_flag("--version", sirdiv::kVersion);
  app.require_subcommand(1);

  // eval
  auto* eval_cmd =
      app.add_subcommand("eval", "evaluate a closed-form quantity");
  std::string quantity;
  std::vector<std::string> eval_params;
  eval_cmd->add_option("quantity", quantity, "registered quantity name")
      ->required();
  eval_cmd->add_option("params", eval_params, "key=value parameters");

  // fig
  auto* fig_cmd = app.add_subcommand("fig", "emit figure data as CSV");
  int figure = 1;
  std::string fig_out;
  sirdiv::FigureOptions fig_opts;
  fig_cmd->add_option("figure", figure, "figure number (1..5)")->required();
  fig_cmd->add_option("--out", fig_out, "output CSV path")->required();
  fig_cmd->add_flag("--sim", fig_opts.with_sim,
                    "append Monte Carlo estimate columns");
  fig_cmd->add_option("--realizations", fig_opts.realizations,
                      "realizations per estimate (default 100000)");
  fig_cmd->add_option("--seed", fig_opts.seed, "RNG seed (default 42)");
  fig_cmd->add_option("--bias-budget", fig_opts.bias_budget,
                      "truncation bias budget (default 1e-4)");
  fig_cmd->add_option("--workers", fig_opts.workers,
                      "worker threads (default 1, 0 = all cores)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "run a Monte Carlo estimate");
  SimulateArgs sim;
  sim.model.attach(sim_cmd);
  sim_cmd->add_option("--quantity", sim.quantity,
                      "joint|selection|correlation|two_antenna|tail");
  sim_cmd->add_option("-n,--n", sim.n, "number of antennas");
  sim_cmd->add_option("--theta", sim.theta, "SIR threshold");
  sim_cmd->add_option("--theta2", sim.theta2,
                      "second threshold (two_antenna)");
  sim_cmd->add_option("--k-max", sim.k_max, "largest tail index (tail)");
  sim_cmd->add_option("--method", sim.method, "naive|conditioned");
  sim_cmd->add_option("--realizations", sim.realizations,
                      "realizations (default 100000)");
  sim_cmd->add_option("--seed", sim.seed, "RNG seed (default 42)");
  sim_cmd->add_option("--bias-budget", sim.bias_budget,
                      "truncation bias budget (default 1e-4)");
  sim_cmd->add_option("--workers", sim.workers,
                      "worker threads (default 1, 0 = all cores)");
  sim_cmd->add_option("--out", sim.out, "write estimates CSV here");
  sim_cmd->add_option("--dump", sim.dump, "write per-realization debug CSV");

  // compare
  auto* cmp_cmd = app.add_subcommand(
      "compare", "compare closed forms against Monte Carlo estimates");
  std::string cmp_config, cmp_out;
  int cmp_workers = 0;
  cmp_cmd->add_option("--config", cmp_config, "scenario config file")
      ->required();
  cmp_cmd->add_option("--out", cmp_out, "write comparison table here");
  cmp_cmd->add_option("--workers", cmp_workers,
                      "override scenario worker count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*eval_cmd) return run_eval(quantity, eval_params);
    if (*fig_cmd) return run_fig(figure, fig_out, fig_opts, command);
    if (*sim_cmd) return run_simulate(sim, command);
    if (*cmp_cmd) return run_compare(cmp_config, cmp_out, cmp_workers, command);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
