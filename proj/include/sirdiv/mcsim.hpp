#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "sirdiv/params.hpp"
#include "sirdiv/rng.hpp"

namespace sirdiv {

/// Thrown by the correlation estimator when the empirical success
/// probability is 0 or 1 and the correlation is undefined.
struct DegenerateVariance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Method { naive, conditioned };

/// Monte Carlo point estimate.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(count)
  std::int64_t count = 0;
};

struct Point {
  double x;
  double y;
};

/// One sampled interferer configuration with its fading draws.
struct Realization {
  std::vector<Point> points;
  std::vector<double> desired_fading;  // one entry per antenna
  std::vector<double> fading;          // |points| x antennas, point-major
};

/// Simulation setup. Estimators derive the sampling window and the
/// per-threshold normalized thresholds from this config, so two estimators
/// sharing a config see the same point process realizations.
struct SimConfig {
  ModelParams model;
  int n_antennas = 1;
  std::vector<double> thresholds{1.0};
  std::int64_t num_realizations = 100000;
  std::uint64_t seed = 42;
  double bias_budget = 1e-4;
  double disk_radius = 0.0;  // 0 derives the window from the bias budget
  bool far_field_compensation = true;
  int workers = 1;  // 0 uses hardware concurrency
};

/// Window radius for plain truncation of the point process: the mean
/// interference ignored beyond R, scaled by theta_r, stays within the bias
/// budget. Never below 10 link distances.
inline double required_disk_radius(const ModelParams& m, double bias_budget,
                                   double theta_r) {
  detail::require(bias_budget > 0.0, "bias budget must be positive");
  detail::require(std::isfinite(theta_r) && theta_r >= 0.0,
                  "theta_r must be >= 0");
  const double floor_radius = 10.0 * m.link_distance;
  if (theta_r == 0.0 || std::isinf(bias_budget)) return floor_radius;
  const double a = m.path_loss_exponent;
  const double rhs = m.intensity * 2.0 * std::numbers::pi * theta_r /
                     ((a - 2.0) * bias_budget);
  return std::max(floor_radius, std::pow(rhs, 1.0 / (a - 2.0)));
}

/// Window radius when the mean of the ignored far field is added back as a
/// deterministic interference term. Only the Jensen gap remains, which is
/// second order in the far-field fluctuation, so the window shrinks
/// dramatically for path loss exponents near 2. The bound covers functionals
/// up to sensitivity n * theta_r.
inline double compensated_disk_radius(const ModelParams& m, double bias_budget,
                                      double theta_r, int n) {
  detail::require(bias_budget > 0.0, "bias budget must be positive");
  detail::require(std::isfinite(theta_r) && theta_r >= 0.0,
                  "theta_r must be >= 0");
  detail::require(n >= 1, "antenna count must be >= 1");
  const double floor_radius = 10.0 * m.link_distance;
  if (theta_r == 0.0 || std::isinf(bias_budget)) return floor_radius;
  const double a = m.path_loss_exponent;
  const double t = static_cast<double>(n) * theta_r;
  const double rhs = t * t * m.intensity * 2.0 * std::numbers::pi /
                     ((2.0 * a - 2.0) * bias_budget);
  return std::max(floor_radius, std::pow(rhs, 1.0 / (2.0 * a - 2.0)));
}

/// Derived sampling geometry shared by all estimators on a config.
struct SimGeometry {
  double radius = 0.0;
  double mean_point_count = 0.0;
  double far_field_mean = 0.0;  // mean interference from outside the window
  std::vector<double> theta_r;  // theta * r^alpha per configured threshold
};

inline SimGeometry derive_geometry(const SimConfig& cfg) {
  if (cfg.n_antennas < 1)
    throw std::invalid_argument("SimConfig: n_antennas must be >= 1");
  if (cfg.thresholds.empty())
    throw std::invalid_argument("SimConfig: thresholds must be nonempty");
  if (cfg.num_realizations < 1)
    throw std::invalid_argument("SimConfig: num_realizations must be >= 1");
  if (!(cfg.bias_budget > 0.0))
    throw std::invalid_argument("SimConfig: bias budget must be positive");
  if (cfg.workers < 0)
    throw std::invalid_argument("SimConfig: workers must be >= 0");

  const ModelParams& m = cfg.model;
  SimGeometry g;
  g.theta_r.reserve(cfg.thresholds.size());
  double max_theta_r = 0.0;
  for (double theta : cfg.thresholds) {
    if (!(std::isfinite(theta) && theta > 0.0))
      throw std::invalid_argument("SimConfig: thresholds must be positive");
    const double tr = theta * std::pow(m.link_distance, m.path_loss_exponent);
    g.theta_r.push_back(tr);
    max_theta_r = std::max(max_theta_r, tr);
  }

  if (cfg.disk_radius > 0.0) {
    g.radius = cfg.disk_radius;
  } else if (cfg.far_field_compensation) {
    g.radius = compensated_disk_radius(m, cfg.bias_budget, max_theta_r,
                                       cfg.n_antennas);
  } else {
    g.radius = required_disk_radius(m, cfg.bias_budget, max_theta_r);
  }
  if (!(g.radius > m.link_distance))
    throw std::invalid_argument(
        "SimConfig: disk radius must exceed the link distance");

  g.mean_point_count = m.intensity * std::numbers::pi * g.radius * g.radius;
  if (cfg.far_field_compensation) {
    g.far_field_mean = m.intensity * 2.0 * std::numbers::pi *
                       std::pow(g.radius, 2.0 - m.path_loss_exponent) /
                       (m.path_loss_exponent - 2.0);
  }
  return g;
}

namespace detail {

// Substream layout per realization: point count, then (radius, angle) pairs,
// then desired fading, then per-point per-antenna fading. Estimators that do
// not need fading stop after the positions and still see the same points.
template <bool WithPositions>
inline void sample_points(const SimGeometry& g, RngStream& rng,
                          std::vector<double>& radii,
                          std::vector<Point>* positions) {
  const std::int64_t count = rng.next_poisson(g.mean_point_count);
  radii.clear();
  radii.reserve(static_cast<std::size_t>(count));
  if constexpr (WithPositions) {
    positions->clear();
    positions->reserve(static_cast<std::size_t>(count));
  }
  for (std::int64_t j = 0; j < count; ++j) {
    const double u = rng.next_uniform();
    const double v = rng.next_uniform();
    const double s = g.radius * std::sqrt(u);
    radii.push_back(s);
    if constexpr (WithPositions) {
      const double phi = 2.0 * std::numbers::pi * v;
      positions->push_back({s * std::cos(phi), s * std::sin(phi)});
    }
  }
}

struct Welford {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }

  void merge(const Welford& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double d = o.mean - mean;
    const std::int64_t total = count + o.count;
    mean += d * static_cast<double>(o.count) / static_cast<double>(total);
    m2 += o.m2 + d * d * static_cast<double>(count) *
                     static_cast<double>(o.count) / static_cast<double>(total);
    count = total;
  }

  Estimate to_estimate() const {
    Estimate e;
    e.count = count;
    e.mean = mean;
    e.std_error = count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1) /
                                        static_cast<double>(count))
                            : 0.0;
    return e;
  }
};

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

inline constexpr std::int64_t kBlockSize = 4096;

// Runs a per-realization evaluator over all realizations and reduces
// per-block partial moments in block order, so the result is bit-identical
// for any worker count. `make_eval()` is invoked once per worker and must
// return a callable (index, double* out) filling n_out values.
template <class Factory>
std::vector<Welford> accumulate_blocks(const SimConfig& cfg, int n_out,
                                       Factory make_eval) {
  const std::int64_t n = cfg.num_realizations;
  const std::int64_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<std::vector<Welford>> partials(
      static_cast<std::size_t>(n_blocks),
      std::vector<Welford>(static_cast<std::size_t>(n_out)));
  std::atomic<std::int64_t> next_block{0};

  auto run = [&]() {
    auto eval = make_eval();
    std::vector<double> out(static_cast<std::size_t>(n_out));
    for (;;) {
      const std::int64_t b = next_block.fetch_add(1);
      if (b >= n_blocks) break;
      const std::int64_t begin = b * kBlockSize;
      const std::int64_t end = std::min(begin + kBlockSize, n);
      auto& slot = partials[static_cast<std::size_t>(b)];
      for (std::int64_t i = begin; i < end; ++i) {
        eval(static_cast<std::uint64_t>(i), out.data());
        for (int c = 0; c < n_out; ++c)
          slot[static_cast<std::size_t>(c)].add(out[static_cast<std::size_t>(c)]);
      }
    }
  };

  const int workers = resolve_workers(cfg.workers);
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers - 1));
    for (int w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
  }

  std::vector<Welford> total(static_cast<std::size_t>(n_out));
  for (const auto& slot : partials)
    for (int c = 0; c < n_out; ++c)
      total[static_cast<std::size_t>(c)].merge(slot[static_cast<std::size_t>(c)]);
  return total;
}

// Stores n_out values per realization into a row-major vector. Workers write
// disjoint slots, so the result is scheduling-independent.
template <class Factory>
std::vector<double> collect_rows(const SimConfig& cfg, int n_out,
                                 Factory make_eval) {
  const std::int64_t n = cfg.num_realizations;
  std::vector<double> rows(static_cast<std::size_t>(n * n_out));
  const std::int64_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
  std::atomic<std::int64_t> next_block{0};

  auto run = [&]() {
    auto eval = make_eval();
    for (;;) {
      const std::int64_t b = next_block.fetch_add(1);
      if (b >= n_blocks) break;
      const std::int64_t begin = b * kBlockSize;
      const std::int64_t end = std::min(begin + kBlockSize, n);
      for (std::int64_t i = begin; i < end; ++i)
        eval(static_cast<std::uint64_t>(i),
             rows.data() + static_cast<std::size_t>(i * n_out));
    }
  };

  const int workers = resolve_workers(cfg.workers);
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers - 1));
    for (int w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
  }
  return rows;
}

// Per-worker point-process sampler for conditioned estimators; keeps the
// attenuations w_j = s_j^{-alpha} of the current realization.
class PhiSampler {
 public:
  PhiSampler(const SimConfig& cfg, const SimGeometry& geom)
      : cfg_(&cfg), geom_(&geom), alpha_(cfg.model.path_loss_exponent) {}

  void sample(std::uint64_t index) {
    RngStream rng(cfg_->seed, index);
    sample_points<false>(*geom_, rng, radii_, nullptr);
    attenuation_.resize(radii_.size());
    for (std::size_t j = 0; j < radii_.size(); ++j)
      attenuation_[j] = std::pow(radii_[j], -alpha_);
  }

  // sum_j log(1 + theta_r w_j) over the current realization.
  double sum_log(double theta_r) const {
    double s = 0.0;
    for (double w : attenuation_) s += std::log1p(theta_r * w);
    return s;
  }

 private:
  const SimConfig* cfg_;
  const SimGeometry* geom_;
  double alpha_;
  std::vector<double> radii_;
  std::vector<double> attenuation_;
};

// Per-worker sampler for naive estimators; draws the full fading matrix and
// keeps per-antenna interference sums.
class FadingSampler {
 public:
  FadingSampler(const SimConfig& cfg, const SimGeometry& geom)
      : cfg_(&cfg), geom_(&geom), alpha_(cfg.model.path_loss_exponent) {}

  void sample(std::uint64_t index) {
    RngStream rng(cfg_->seed, index);
    sample_points<false>(*geom_, rng, radii_, nullptr);
    const int na = cfg_->n_antennas;
    desired_.resize(static_cast<std::size_t>(na));
    for (auto& h : desired_) h = rng.next_exponential();
    interference_.assign(static_cast<std::size_t>(na), 0.0);
    for (double s : radii_) {
      const double w = std::pow(s, -alpha_);
      for (int k = 0; k < na; ++k)
        interference_[static_cast<std::size_t>(k)] +=
            rng.next_exponential() * w;
    }
  }

  // SIR_k > theta, including the deterministic far-field term.
  bool success(int antenna, double theta_r) const {
    const std::size_t k = static_cast<std::size_t>(antenna);
    return desired_[k] > theta_r * (interference_[k] + geom_->far_field_mean);
  }

  std::int64_t point_count() const {
    return static_cast<std::int64_t>(radii_.size());
  }

 private:
  const SimConfig* cfg_;
  const SimGeometry* geom_;
  double alpha_;
  std::vector<double> radii_;
  std::vector<double> desired_;
  std::vector<double> interference_;
};

inline double theta_r_of(const SimConfig& cfg, double theta) {
  check_threshold(theta);
  return theta *
         std::pow(cfg.model.link_distance, cfg.model.path_loss_exponent);
}

}  // namespace detail

/// Samples one interferer configuration with all fading draws. Realization
/// `index` is a pure function of (cfg.seed, index).
inline Realization sample_realization(const SimConfig& cfg,
                                      std::uint64_t index) {
  const SimGeometry geom = derive_geometry(cfg);
  RngStream rng(cfg.seed, index);
  Realization out;
  std::vector<double> radii;
  detail::sample_points<true>(geom, rng, radii, &out.points);
  out.desired_fading.resize(static_cast<std::size_t>(cfg.n_antennas));
  for (auto& h : out.desired_fading) h = rng.next_exponential();
  out.fading.resize(radii.size() * static_cast<std::size_t>(cfg.n_antennas));
  for (std::size_t j = 0; j < radii.size(); ++j)
    for (int k = 0; k < cfg.n_antennas; ++k)
      out.fading[j * static_cast<std::size_t>(cfg.n_antennas) +
                 static_cast<std::size_t>(k)] = rng.next_exponential();
  return out;
}

/// Per-antenna SIR values of a realization; +infinity when there is no
/// interferer.
inline std::vector<double> sir_at_antennas(const Realization& real,
                                           const ModelParams& m) {
  const int na = static_cast<int>(real.desired_fading.size());
  detail::require(na >= 1, "sir_at_antennas: needs at least one antenna");
  std::vector<double> interference(static_cast<std::size_t>(na), 0.0);
  for (std::size_t j = 0; j < real.points.size(); ++j) {
    const Point& pt = real.points[j];
    const double dist = std::hypot(pt.x, pt.y);
    const double w = std::pow(dist, -m.path_loss_exponent);
    for (int k = 0; k < na; ++k)
      interference[static_cast<std::size_t>(k)] +=
          real.fading[j * static_cast<std::size_t>(na) +
                      static_cast<std::size_t>(k)] *
          w;
  }
  const double signal_gain = std::pow(m.link_distance, -m.path_loss_exponent);
  std::vector<double> sir(static_cast<std::size_t>(na));
  for (int k = 0; k < na; ++k) {
    const std::size_t kk = static_cast<std::size_t>(k);
    sir[kk] = interference[kk] > 0.0
                  ? real.desired_fading[kk] * signal_gain / interference[kk]
                  : std::numeric_limits<double>::infinity();
  }
  return sir;
}

/// q(Phi) = prod_x (1 + theta_r ||x||^-alpha)^-1: the per-antenna success
/// probability given the points, with the fading integrated out. Independent
/// of the realization's fading draws.
inline double conditional_success(const Realization& real,
                                  const ModelParams& m, double theta) {
  detail::check_threshold(theta);
  const double theta_r =
      theta * std::pow(m.link_distance, m.path_loss_exponent);
  double s = 0.0;
  for (const Point& pt : real.points) {
    const double dist = std::hypot(pt.x, pt.y);
    s += std::log1p(theta_r * std::pow(dist, -m.path_loss_exponent));
  }
  return std::exp(-s);
}

/// Estimates P(all of the first n antennas exceed theta). The conditioned
/// estimator averages q(Phi)^n with the fading dimension integrated out
/// exactly; the naive one averages the success indicator.
inline Estimate estimate_joint_success(const SimConfig& cfg, int n,
                                       double theta, Method method) {
  detail::check_order(n);
  const SimGeometry geom = derive_geometry(cfg);
  const double theta_r = detail::theta_r_of(cfg, theta);

  std::vector<detail::Welford> acc;
  if (method == Method::conditioned) {
    acc = detail::accumulate_blocks(cfg, 1, [&]() {
      return [&cfg, &geom, theta_r, n,
              sampler = detail::PhiSampler(cfg, geom)](
                 std::uint64_t i, double* out) mutable {
        sampler.sample(i);
        out[0] = std::exp(-static_cast<double>(n) *
                          (sampler.sum_log(theta_r) +
                           theta_r * geom.far_field_mean));
      };
    });
  } else {
    if (n > cfg.n_antennas)
      throw std::invalid_argument(
          "estimate_joint_success: naive estimator needs n <= n_antennas");
    acc = detail::accumulate_blocks(cfg, 1, [&]() {
      return [&cfg, &geom, theta_r, n,
              sampler = detail::FadingSampler(cfg, geom)](
                 std::uint64_t i, double* out) mutable {
        sampler.sample(i);
        bool all = true;
        for (int k = 0; k < n && all; ++k) all = sampler.success(k, theta_r);
        out[0] = all ? 1.0 : 0.0;
      };
    });
  }
  return acc[0].to_estimate();
}

/// Estimates P(at least one of the first n antennas exceeds theta). The
/// conditioned estimator averages 1 - (1 - q(Phi))^n.
inline Estimate estimate_selection_combining(const SimConfig& cfg, int n,
                                             double theta, Method method) {
  detail::check_order(n);
  const SimGeometry geom = derive_geometry(cfg);
  const double theta_r = detail::theta_r_of(cfg, theta);

  std::vector<detail::Welford> acc;
  if (method == Method::conditioned) {
    acc = detail::accumulate_blocks(cfg, 1, [&]() {
      return [&cfg, &geom, theta_r, n,
              sampler = detail::PhiSampler(cfg, geom)](
                 std::uint64_t i, double* out) mutable {
        sampler.sample(i);
        const double q = std::exp(
            -(sampler.sum_log(theta_r) + theta_r * geom.far_field_mean));
        out[0] = n == 1 ? q : 1.0 - std::pow(1.0 - q, n);
      };
    });
  } else {
    if (n > cfg.n_antennas)
      throw std::invalid_argument(
          "estimate_selection_combining: naive estimator needs n <= "
          "n_antennas");
    acc = detail::accumulate_blocks(cfg, 1, [&]() {
      return [&cfg, &geom, theta_r, n,
              sampler = detail::FadingSampler(cfg, geom)](
                 std::uint64_t i, double* out) mutable {
        sampler.sample(i);
        bool any = false;
        for (int k = 0; k < n && !any; ++k) any = sampler.success(k, theta_r);
        out[0] = any ? 1.0 : 0.0;
      };
    });
  }
  return acc[0].to_estimate();
}

namespace detail {

inline constexpr int kBootstrapResamples = 200;

// Bootstrap standard error of a statistic of per-realization rows; resample
// streams live past the realization streams so they never collide.
template <class Stat>
double bootstrap_std_error(const SimConfig& cfg, const std::vector<double>& rows,
                           int n_out, Stat stat) {
  const std::int64_t n = cfg.num_realizations;
  std::vector<double> values;
  values.reserve(kBootstrapResamples);
  std::vector<double> sums(static_cast<std::size_t>(4), 0.0);
  for (int b = 0; b < kBootstrapResamples; ++b) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(n) +
                                static_cast<std::uint64_t>(b));
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
      const std::int64_t idx =
          static_cast<std::int64_t>(rng.next_uniform() * static_cast<double>(n));
      stat.accumulate(rows.data() + static_cast<std::size_t>(idx * n_out),
                      sums.data());
    }
    values.push_back(stat.finish(sums.data(), n));
  }
  Welford w;
  for (double v : values) w.add(v);
  return w.count > 1
             ? std::sqrt(w.m2 / static_cast<double>(w.count - 1))
             : 0.0;
}

struct ConditionedCorrStat {
  void accumulate(const double* row, double* sums) const {
    sums[0] += row[0];
    sums[1] += row[0] * row[0];
  }
  double finish(const double* sums, std::int64_t n) const {
    const double m1 = sums[0] / static_cast<double>(n);
    const double m2 = sums[1] / static_cast<double>(n);
    const double denom = m1 * (1.0 - m1);
    if (!(denom > 0.0))
      throw DegenerateVariance(
          "indicator correlation: empirical success probability is 0 or 1");
    return (m2 - m1 * m1) / denom;
  }
};

struct NaiveCorrStat {
  void accumulate(const double* row, double* sums) const {
    sums[0] += row[0];
    sums[1] += row[1];
    sums[2] += row[0] * row[1];
  }
  double finish(const double* sums, std::int64_t n) const {
    const double m1 = sums[0] / static_cast<double>(n);
    const double m2 = sums[1] / static_cast<double>(n);
    const double m12 = sums[2] / static_cast<double>(n);
    const double denom =
        std::sqrt(m1 * (1.0 - m1)) * std::sqrt(m2 * (1.0 - m2));
    if (!(denom > 0.0))
      throw DegenerateVariance(
          "indicator correlation: empirical success probability is 0 or 1");
    return (m12 - m1 * m2) / denom;
  }
};

}  // namespace detail

/// Estimates the Pearson correlation of the success indicators at two
/// antennas. The conditioned route uses the q moments; the naive route the
/// indicator pairs of the first two antennas. The standard error comes from
/// a 200-resample nonparametric bootstrap.
inline Estimate estimate_indicator_correlation(
    const SimConfig& cfg, double theta, Method method = Method::conditioned) {
  const SimGeometry geom = derive_geometry(cfg);
  const double theta_r = detail::theta_r_of(cfg, theta);

  Estimate e;
  e.count = cfg.num_realizations;
  if (method == Method::conditioned) {
    std::vector<double> rows = detail::collect_rows(cfg, 1, [&]() {
      return [&cfg, &geom, theta_r, sampler = detail::PhiSampler(cfg, geom)](
                 std::uint64_t i, double* out) mutable {
        sampler.sample(i);
        out[0] = std::exp(
            -(sampler.sum_log(theta_r) + theta_r * geom.far_field_mean));
      };
    });
    double sums[2] = {0.0, 0.0};
    detail::ConditionedCorrStat stat;
    for (std::int64_t i = 0; i < cfg.num_realizations; ++i)
      stat.accumulate(rows.data() + i, sums);
    e.mean = stat.finish(sums, cfg.num_realizations);
    e.std_error = detail::bootstrap_std_error(cfg, rows, 1, stat);
  } else {
    if (cfg.n_antennas < 2)
      throw std::invalid_argument(
          "estimate_indicator_correlation: naive estimator needs at least "
          "two antennas");
    std::vector<double> rows = detail::collect_rows(cfg, 2, [&]() {
      return [&cfg, &geom, theta_r,
              sampler = detail::FadingSampler(cfg, geom)](
                 std::uint64_t i, double* out) mutable {
        sampler.sample(i);
        out[0] = sampler.success(0, theta_r) ? 1.0 : 0.0;
        out[1] = sampler.success(1, theta_r) ? 1.0 : 0.0;
      };
    });
    double sums[3] = {0.0, 0.0, 0.0};
    detail::NaiveCorrStat stat;
    for (std::int64_t i = 0; i < cfg.num_realizations; ++i)
      stat.accumulate(rows.data() + 2 * i, sums);
    e.mean = stat.finish(sums, cfg.num_realizations);
    e.std_error = detail::bootstrap_std_error(cfg, rows, 2, stat);
  }
  return e;
}

/// Estimates P(SIR_1 > theta1, SIR_2 > theta2) by the conditioned estimator:
/// the per-realization value is q_1(Phi) q_2(Phi).
inline Estimate estimate_two_antenna_joint(const SimConfig& cfg, double theta1,
                                           double theta2) {
  const SimGeometry geom = derive_geometry(cfg);
  const double tr1 = detail::theta_r_of(cfg, theta1);
  const double tr2 = detail::theta_r_of(cfg, theta2);

  auto acc = detail::accumulate_blocks(cfg, 1, [&]() {
    return [&cfg, &geom, tr1, tr2, sampler = detail::PhiSampler(cfg, geom)](
               std::uint64_t i, double* out) mutable {
      sampler.sample(i);
      out[0] = std::exp(-((sampler.sum_log(tr1) + sampler.sum_log(tr2)) +
                          (tr1 + tr2) * geom.far_field_mean));
    };
  });
  return acc[0].to_estimate();
}

/// Conditioned estimates of P(N(theta) > k) = E[(1 - q)^k] for k = 0..k_max,
/// where N(theta) is the index of the first antenna whose SIR exceeds theta.
inline std::vector<Estimate> estimate_first_success_tail(const SimConfig& cfg,
                                                         double theta,
                                                         int k_max) {
  detail::require(k_max >= 1, "estimate_first_success_tail: k_max must be >= 1");
  const SimGeometry geom = derive_geometry(cfg);
  const double theta_r = detail::theta_r_of(cfg, theta);

  auto acc = detail::accumulate_blocks(cfg, k_max + 1, [&]() {
    return [&cfg, &geom, theta_r, k_max,
            sampler = detail::PhiSampler(cfg, geom)](
               std::uint64_t i, double* out) mutable {
      sampler.sample(i);
      const double q = std::exp(
          -(sampler.sum_log(theta_r) + theta_r * geom.far_field_mean));
      const double outage = 1.0 - q;
      out[0] = 1.0;
      double p = 1.0;
      for (int k = 1; k <= k_max; ++k) {
        p *= outage;
        out[k] = p;
      }
    };
  });
  std::vector<Estimate> out;
  out.reserve(acc.size());
  for (const auto& w : acc) out.push_back(w.to_estimate());
  return out;
}

/// Debug dump: one CSV record per realization with the point count, the
/// compensated q value per configured threshold, and the per-antenna success
/// bits per threshold.
inline void write_realization_dump(const SimConfig& cfg, std::ostream& os) {
  const SimGeometry geom = derive_geometry(cfg);
  os << "realization,points";
  for (std::size_t t = 0; t < cfg.thresholds.size(); ++t) os << ",q" << t;
  for (std::size_t t = 0; t < cfg.thresholds.size(); ++t)
    for (int k = 0; k < cfg.n_antennas; ++k)
      os << ",success" << t << "_a" << k;
  os << "\n";

  detail::FadingSampler fading(cfg, geom);
  detail::PhiSampler phi(cfg, geom);
  char buf[32];
  for (std::int64_t i = 0; i < cfg.num_realizations; ++i) {
    fading.sample(static_cast<std::uint64_t>(i));
    phi.sample(static_cast<std::uint64_t>(i));
    os << i << ',' << fading.point_count();
    for (double tr : geom.theta_r) {
      const double q =
          std::exp(-(phi.sum_log(tr) + tr * geom.far_field_mean));
      auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), q);
      os << ',' << std::string_view(buf, static_cast<std::size_t>(p - buf));
    }
    for (double tr : geom.theta_r)
      for (int k = 0; k < cfg.n_antennas; ++k)
        os << ',' << (fading.success(k, tr) ? 1 : 0);
    os << "\n";
  }
}

}  // namespace sirdiv
