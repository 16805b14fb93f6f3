// High-precision reference evaluations for tests, computed with MPFR at 256
// bits. These stay independent of the library's own double-precision paths.
#pragma once

#include <gmp.h>
#include <mpfr.h>

#include <string>
#include <vector>

namespace oracle {

inline constexpr mpfr_prec_t kPrec = 256;

inline double log_gamma(double x) {
  mpfr_t t;
  mpfr_init2(t, kPrec);
  mpfr_set_d(t, x, MPFR_RNDN);
  int sign = 0;
  mpfr_lgamma(t, &sign, t, MPFR_RNDN);
  const double out = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return out;
}

inline double beta(double x, double y) {
  mpfr_t a, b, c;
  mpfr_inits2(kPrec, a, b, c, nullptr);
  mpfr_set_d(a, x, MPFR_RNDN);
  mpfr_set_d(b, y, MPFR_RNDN);
  mpfr_add(c, a, b, MPFR_RNDN);
  mpfr_gamma(a, a, MPFR_RNDN);
  mpfr_gamma(b, b, MPFR_RNDN);
  mpfr_gamma(c, c, MPFR_RNDN);
  mpfr_mul(a, a, b, MPFR_RNDN);
  mpfr_div(a, a, c, MPFR_RNDN);
  const double out = mpfr_get_d(a, MPFR_RNDN);
  mpfr_clears(a, b, c, nullptr);
  return out;
}

inline double diversity_poly(int n, double x) {
  mpfr_t prod, term, xx;
  mpfr_inits2(kPrec, prod, term, xx, nullptr);
  mpfr_set_ui(prod, 1, MPFR_RNDN);
  mpfr_set_d(xx, x, MPFR_RNDN);
  for (int i = 1; i < n; ++i) {
    mpfr_div_ui(term, xx, static_cast<unsigned long>(i), MPFR_RNDN);
    mpfr_add_ui(term, term, 1, MPFR_RNDN);
    mpfr_mul(prod, prod, term, MPFR_RNDN);
  }
  const double out = mpfr_get_d(prod, MPFR_RNDN);
  mpfr_clears(prod, term, xx, nullptr);
  return out;
}

// Exact rational Horner evaluation of canonical "p/q" coefficient strings at
// an integer point; returns the sign of the result.
inline int rational_horner_sign(const std::vector<std::string>& coeffs,
                                long point) {
  mpq_t acc, term, x;
  mpq_inits(acc, term, x, nullptr);
  mpq_set_si(x, point, 1);
  mpq_set_ui(acc, 0, 1);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    mpq_mul(acc, acc, x);
    mpq_set_str(term, it->c_str(), 10);
    mpq_canonicalize(term);
    mpq_add(acc, acc, term);
  }
  const int sign = mpq_sgn(acc);
  mpq_clears(acc, term, x, nullptr);
  return sign;
}

// Exact rational sum of canonical coefficient strings, compared to n.
inline bool rational_sum_equals(const std::vector<std::string>& coeffs,
                                long expected) {
  mpq_t acc, term, want;
  mpq_inits(acc, term, want, nullptr);
  mpq_set_ui(acc, 0, 1);
  for (const auto& c : coeffs) {
    mpq_set_str(term, c.c_str(), 10);
    mpq_canonicalize(term);
    mpq_add(acc, acc, term);
  }
  mpq_set_si(want, expected, 1);
  const bool equal = mpq_equal(acc, want) != 0;
  mpq_clears(acc, term, want, nullptr);
  return equal;
}

}  // namespace oracle
