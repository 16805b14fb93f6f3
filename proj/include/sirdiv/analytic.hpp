#pragma once

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sirdiv/params.hpp"
#include "sirdiv/specfun.hpp"

namespace sirdiv {

/// Largest selection-combining order the extended-precision sum supports.
/// The working precision grows linearly with the order; beyond this, use the
/// simulator estimate instead.
inline constexpr int kSelectionOrderCap = 4096;

/// Thrown when a requested selection-combining order exceeds the configured
/// precision budget.
struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Delta * theta^delta, the exponent scale every probability shares.
inline double exponent_scale(const NormalizedParams& p, double theta) {
  return p.contention * std::pow(theta, p.delta);
}

struct ScopedMpfr {
  mpfr_t v;
  explicit ScopedMpfr(mpfr_prec_t prec) { mpfr_init2(v, prec); }
  ~ScopedMpfr() { mpfr_clear(v); }
  ScopedMpfr(const ScopedMpfr&) = delete;
  ScopedMpfr& operator=(const ScopedMpfr&) = delete;
};

}  // namespace detail

/// P(SIR > theta) for a single-antenna receiver: exp(-Delta theta^delta).
inline double single_success_prob(const NormalizedParams& p, double theta) {
  detail::check_threshold(theta);
  return std::exp(-detail::exponent_scale(p, theta));
}

/// Probability that the SIR at all n antennas exceeds theta:
/// exp(-Delta theta^delta D_n(delta)).
inline double joint_success_prob(const NormalizedParams& p, int n,
                                 double theta) {
  detail::check_order(n);
  detail::check_threshold(theta);
  return std::exp(-detail::exponent_scale(p, theta) *
                  diversity_poly(n, p.delta));
}

/// The same joint probability if interference were independent across
/// antennas: exp(-Delta theta^delta n).
inline double independent_joint_prob(const NormalizedParams& p, int n,
                                     double theta) {
  detail::check_order(n);
  detail::check_threshold(theta);
  return std::exp(-detail::exponent_scale(p, theta) * n);
}

struct ProbBounds {
  double lower;
  double upper;
};

/// Bounds on the joint success probability induced by the bounds on D_n.
/// Strict bracketing holds for n >= 2.
inline ProbBounds joint_prob_bounds(const NormalizedParams& p, int n,
                                    double theta) {
  detail::check_order(n);
  detail::check_threshold(theta);
  const DiversityBounds b = diversity_poly_bounds(n, p.delta);
  const double s = detail::exponent_scale(p, theta);
  return {std::exp(-s * b.upper_asymptotic), std::exp(-s * b.lower)};
}

/// Diversity loss L(n) = log P_indep / log P_joint = n / D_n(delta)
/// = Gamma(1+delta) Gamma(n+1) / Gamma(n+delta), in the log domain so the
/// Gamma ratio stays finite for any n.
inline double diversity_loss(int n, double delta) {
  detail::check_order(n);
  detail::require(std::isfinite(delta) && delta > 0.0 && delta < 1.0,
                  "diversity_loss: delta must lie in (0, 1)");
  return std::exp(log_gamma(1.0 + delta) + log_gamma(n + 1.0) -
                  log_gamma(n + delta));
}

/// P(S_{k+1} | S_1 ... S_k) = exp(-Delta theta^delta D_k(delta) delta / k),
/// the ratio P_{k+1} / P_k through the recursion D_{k+1} = D_k (1 + delta/k).
inline double conditional_success_prob(const NormalizedParams& p, int k,
                                       double theta) {
  detail::check_order(k);
  detail::check_threshold(theta);
  return std::exp(-detail::exponent_scale(p, theta) *
                  diversity_poly(k, p.delta) * p.delta / k);
}

/// Pearson correlation of the per-antenna success indicators. Defined by
/// its limit 1 - delta when Delta theta^delta vanishes.
inline double indicator_correlation(const NormalizedParams& p, double theta) {
  detail::check_threshold(theta);
  const double a = detail::exponent_scale(p, theta);
  if (a == 0.0) return 1.0 - p.delta;
  return std::exp(-a * p.delta) * std::expm1(-a * (1.0 - p.delta)) /
         std::expm1(-a);
}

/// P(max_k SIR_k > theta) over n antennas via the alternating binomial sum
/// sum_k (-1)^{k+1} C(n,k) P_k. The binomials reach ~2^n while the result
/// stays in (0,1), so the sum runs at n + 64 bits of mantissa with exact
/// integer binomials; the double rounding happens only at the end.
inline double selection_combining_prob(const NormalizedParams& p, int n,
                                       double theta) {
  detail::check_order(n);
  detail::check_threshold(theta);
  if (n > kSelectionOrderCap)
    throw PrecisionExhausted(
        "selection_combining_prob: order exceeds the precision budget "
        "(n <= 4096); use the simulator estimate");
  if (theta == 0.0) return 1.0;
  if (n == 1) return single_success_prob(p, theta);

  const mpfr_prec_t prec = n + 64;
  detail::ScopedMpfr scale(prec), dlt(prec), dk(prec), term(prec), sum(prec),
      tmp(prec);
  detail::ScopedMpz binom;

  // scale = Delta * theta^delta
  mpfr_set_d(scale.v, theta, MPFR_RNDN);
  mpfr_set_d(dlt.v, p.delta, MPFR_RNDN);
  mpfr_pow(scale.v, scale.v, dlt.v, MPFR_RNDN);
  mpfr_mul_d(scale.v, scale.v, p.contention, MPFR_RNDN);

  mpfr_set_ui(dk.v, 1, MPFR_RNDN);  // D_1 = 1
  mpfr_set_zero(sum.v, 1);
  mpz_set_ui(binom.v, 1);

  for (int k = 1; k <= n; ++k) {
    mpz_mul_ui(binom.v, binom.v, static_cast<unsigned long>(n - k + 1));
    mpz_divexact_ui(binom.v, binom.v, static_cast<unsigned long>(k));
    // P_k = exp(-scale * D_k)
    mpfr_mul(term.v, scale.v, dk.v, MPFR_RNDN);
    mpfr_neg(term.v, term.v, MPFR_RNDN);
    mpfr_exp(term.v, term.v, MPFR_RNDN);
    mpfr_mul_z(term.v, term.v, binom.v, MPFR_RNDN);
    if (k % 2 == 1)
      mpfr_add(sum.v, sum.v, term.v, MPFR_RNDN);
    else
      mpfr_sub(sum.v, sum.v, term.v, MPFR_RNDN);
    // D_{k+1} = D_k (1 + delta/k)
    mpfr_div_ui(tmp.v, dlt.v, static_cast<unsigned long>(k), MPFR_RNDN);
    mpfr_add_ui(tmp.v, tmp.v, 1, MPFR_RNDN);
    mpfr_mul(dk.v, dk.v, tmp.v, MPFR_RNDN);
  }
  return mpfr_get_d(sum.v, MPFR_RNDN);
}

/// Selection combining under independent interference:
/// 1 - (1 - exp(-Delta theta^delta))^n.
inline double independent_selection_prob(const NormalizedParams& p, int n,
                                         double theta) {
  detail::check_order(n);
  detail::check_threshold(theta);
  if (theta == 0.0) return 1.0;
  const double log_outage = std::log1p(-single_success_prob(p, theta));
  return -std::expm1(n * log_outage);
}

/// P(SIR_1 > theta1, SIR_2 > theta2) for a two-antenna receiver:
/// exp(-Delta (theta1^{1+delta} - theta2^{1+delta}) / (theta1 - theta2)).
/// The difference quotient loses all digits on the diagonal, so near
/// theta1 = theta2 the closed-form limit exp(-Delta (1+delta) theta^delta)
/// is used instead.
inline double joint_two_antenna_success(const NormalizedParams& p,
                                        double theta1, double theta2) {
  detail::check_threshold(theta1);
  detail::check_threshold(theta2);
  double hi = std::max(theta1, theta2);
  double lo = std::min(theta1, theta2);
  double expo;
  if (hi - lo <= 1e-9 * std::max(hi, 1.0)) {
    const double mid = 0.5 * (hi + lo);
    expo = p.contention * (1.0 + p.delta) * std::pow(mid, p.delta);
  } else {
    expo = p.contention *
           (std::pow(hi, 1.0 + p.delta) - std::pow(lo, 1.0 + p.delta)) /
           (hi - lo);
  }
  return std::exp(-expo);
}

/// Joint SIR distribution P(SIR_1 < theta1, SIR_2 < theta2), by
/// inclusion-exclusion from the joint exceedance probability.
inline double joint_two_antenna_cdf(const NormalizedParams& p, double theta1,
                                    double theta2) {
  detail::check_threshold(theta1);
  detail::check_threshold(theta2);
  const double v = 1.0 - single_success_prob(p, theta1) -
                   single_success_prob(p, theta2) +
                   joint_two_antenna_success(p, theta1, theta2);
  return std::clamp(v, 0.0, 1.0);
}

/// The two-antenna exceedance probability if interference were independent:
/// exp(-Delta (theta1^delta + theta2^delta)).
inline double independent_two_antenna_success(const NormalizedParams& p,
                                              double theta1, double theta2) {
  detail::check_threshold(theta1);
  detail::check_threshold(theta2);
  return std::exp(-p.contention * (std::pow(theta1, p.delta) +
                                   std::pow(theta2, p.delta)));
}

}  // namespace sirdiv
