#pragma once

#include <gmp.h>
#include <mpfr.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sirdiv {

/// Largest order for which the exact rational coefficient expansion of the
/// diversity polynomial is offered. The coefficients are ratios of Stirling
/// numbers to (n-1)!; above this cap only point evaluation is supported.
inline constexpr int kCoefficientCap = 64;

namespace detail {

// Lanczos approximation with g = 607/128 and 15 terms (Godfrey's
// coefficients). Relative error of Gamma below 1e-15 on the positive axis.
inline constexpr double kLanczosG = 607.0 / 128.0;
inline constexpr double kLanczosCoeff[15] = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4,
    0.15808870322491248884e-3,  -0.21026444172410488319e-3,
    0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4,
    0.36899182659531622704e-5};
inline constexpr double kHalfLogTwoPi = 0.918938533204672741780329736406;

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

inline void check_threshold(double theta) {
  require(std::isfinite(theta) && theta >= 0.0,
          "threshold must be finite and >= 0");
}

inline void check_order(int n) { require(n >= 1, "antenna count must be >= 1"); }

// Compensated (Kahan) accumulator for long sums of small log terms.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double term) {
    double y = term - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct ScopedMpz {
  mpz_t v;
  ScopedMpz() { mpz_init(v); }
  ~ScopedMpz() { mpz_clear(v); }
  ScopedMpz(const ScopedMpz&) = delete;
  ScopedMpz& operator=(const ScopedMpz&) = delete;
};

struct ScopedMpq {
  mpq_t v;
  ScopedMpq() { mpq_init(v); }
  ~ScopedMpq() { mpq_clear(v); }
  ScopedMpq(const ScopedMpq&) = delete;
  ScopedMpq& operator=(const ScopedMpq&) = delete;
};

inline std::string mpq_to_string(const mpq_t q) {
  char* raw = mpq_get_str(nullptr, 10, q);
  std::string out(raw);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(raw, out.size() + 1);
  return out;
}

// Correctly rounded double of an exact rational.
inline double mpq_to_double(const mpq_t q) {
  mpfr_t t;
  mpfr_init2(t, 53);
  mpfr_set_q(t, q, MPFR_RNDN);
  double out = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return out;
}

}  // namespace detail

/// Natural logarithm of the gamma function for x > 0.
inline double log_gamma(double x) {
  detail::require(std::isfinite(x) && x > 0.0, "log_gamma: requires x > 0");
  if (x == 1.0 || x == 2.0) return 0.0;
  const double t = x + detail::kLanczosG - 0.5;
  double series = detail::kLanczosCoeff[0];
  for (int k = 1; k < 15; ++k) series += detail::kLanczosCoeff[k] / (x + k - 1);
  return detail::kHalfLogTwoPi + (x - 0.5) * std::log(t) - t + std::log(series);
}

/// ln beta(x, y) for x, y > 0.
inline double log_beta(double x, double y) {
  detail::require(std::isfinite(x) && x > 0.0 && std::isfinite(y) && y > 0.0,
                  "log_beta: requires positive arguments");
  return log_gamma(x) + log_gamma(y) - log_gamma(x + y);
}

/// beta(x, y) = Gamma(x) Gamma(y) / Gamma(x+y), evaluated in the log domain.
inline double beta(double x, double y) { return std::exp(log_beta(x, y)); }

namespace detail {

inline void check_poly_domain(int n, double x) {
  require(n >= 1, "diversity_poly: order must be >= 1");
  require(std::isfinite(x) && x >= 0.0 && x <= 1.0,
          "diversity_poly: argument must lie in [0, 1]");
}

}  // namespace detail

/// Diversity polynomial D_n(x) = Gamma(n+x) / (Gamma(n) Gamma(1+x)),
/// evaluated through the product prod_{i=1}^{n-1} (1 + x/i). Above n = 64 the
/// factors are accumulated as compensated log sums so rounding does not build
/// up over long products.
inline double diversity_poly(int n, double x) {
  detail::check_poly_domain(n, x);
  if (n <= 64) {
    double p = 1.0;
    for (int i = 1; i < n; ++i) p *= 1.0 + x / i;
    return p;
  }
  detail::CompensatedSum acc;
  for (int i = 1; i < n; ++i) acc.add(std::log1p(x / i));
  return std::exp(acc.sum);
}

/// Exact derivative D_n'(x) = D_n(x) * sum_{i=1}^{n-1} 1/(i+x).
inline double diversity_poly_derivative(int n, double x) {
  detail::check_poly_domain(n, x);
  if (n == 1) return 0.0;
  detail::CompensatedSum acc;
  for (int i = 1; i < n; ++i) acc.add(1.0 / (i + x));
  return diversity_poly(n, x) * acc.sum;
}

struct DiversityBounds {
  double lower;             // n^x
  double upper_asymptotic;  // n^x / Gamma(1+x)
  double upper_linear;      // 1 + (n-1) x, from convexity
};

/// Lower and upper bounds on D_n(x). The asymptotic upper bound is tight as
/// n grows; the linear one follows from convexity on [0, 1].
inline DiversityBounds diversity_poly_bounds(int n, double x) {
  detail::check_poly_domain(n, x);
  const double nx = std::pow(static_cast<double>(n), x);
  return {nx, nx * std::exp(-log_gamma(1.0 + x)), 1.0 + (n - 1) * x};
}

/// Coefficients of D_n as a polynomial in x; index k holds the coefficient
/// of x^k. `exact` carries each coefficient as a canonical "p" or "p/q"
/// rational string, `coeffs` the correctly rounded doubles.
struct PolynomialCoefficients {
  std::vector<double> coeffs;
  std::vector<std::string> exact;
};

/// Exact expansion of D_n(x) = (1/(n-1)!) prod_{i=1}^{n-1} (x + i) in integer
/// arithmetic. Throws std::out_of_range above kCoefficientCap.
inline PolynomialCoefficients diversity_poly_coefficients(int n) {
  detail::require(n >= 1, "diversity_poly_coefficients: order must be >= 1");
  if (n > kCoefficientCap)
    throw std::out_of_range(
        "diversity_poly_coefficients: exact expansion capped at n = 64; "
        "use diversity_poly for point evaluation");

  // Integer coefficients of prod (x + i), highest degree n-1.
  std::vector<detail::ScopedMpz> c(static_cast<std::size_t>(n));
  mpz_set_ui(c[0].v, 1);
  for (int i = 1; i < n; ++i) {
    // Multiply the degree-(i-1) polynomial by (x + i).
    for (int k = i; k >= 1; --k) {
      mpz_mul_ui(c[k].v, c[k].v, static_cast<unsigned long>(i));
      mpz_add(c[k].v, c[k].v, c[k - 1].v);
    }
    mpz_mul_ui(c[0].v, c[0].v, static_cast<unsigned long>(i));
  }

  detail::ScopedMpz factorial;
  mpz_fac_ui(factorial.v, static_cast<unsigned long>(n - 1));

  PolynomialCoefficients out;
  out.coeffs.reserve(static_cast<std::size_t>(n));
  out.exact.reserve(static_cast<std::size_t>(n));
  detail::ScopedMpq q;
  for (int k = 0; k < n; ++k) {
    mpq_set_num(q.v, c[k].v);
    mpq_set_den(q.v, factorial.v);
    mpq_canonicalize(q.v);
    out.coeffs.push_back(detail::mpq_to_double(q.v));
    out.exact.push_back(detail::mpq_to_string(q.v));
  }
  return out;
}

}  // namespace sirdiv
