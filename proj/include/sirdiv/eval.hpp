#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sirdiv/analytic.hpp"
#include "sirdiv/params.hpp"
#include "sirdiv/specfun.hpp"
#include "sirdiv/table.hpp"

namespace sirdiv {

/// 13 significant digits, shortest form.
inline std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.13g", v);
  return buf;
}

/// Result of a named-quantity evaluation: one or more labeled values. The
/// label is empty for plain scalars.
struct EvalResult {
  std::vector<std::pair<std::string, std::string>> values;
};

namespace detail {

// Accepts both spelled-out and symbol parameter names.
inline std::string normalize_key(const std::string& key) {
  static const std::map<std::string, std::string> aliases = {
      {"Δ", "Delta"},   {"δ", "delta"},   {"θ", "theta"},  {"λ", "lambda"},
      {"α", "alpha"},   {"θ1", "theta1"}, {"θ₁", "theta1"}, {"θ2", "theta2"},
      {"θ₂", "theta2"},
  };
  const auto it = aliases.find(key);
  return it != aliases.end() ? it->second : key;
}

class EvalParams {
 public:
  explicit EvalParams(const std::vector<std::string>& tokens) {
    for (const auto& token : tokens) {
      const std::size_t eq = token.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("expected key=value, got '" + token + "'");
      const std::string key = normalize_key(token.substr(0, eq));
      if (values_.count(key))
        throw std::invalid_argument("duplicate parameter '" + key + "'");
      values_[key] = parse_double(token.substr(eq + 1), key.c_str());
    }
  }

  double number(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end())
      throw std::invalid_argument("missing parameter '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  int integer(const std::string& key) {
    const double v = number(key);
    const int n = static_cast<int>(v);
    if (static_cast<double>(n) != v)
      throw std::invalid_argument("parameter '" + key + "' must be an integer");
    return n;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  NormalizedParams model() {
    const bool normalized = has("Delta") || has("delta");
    const bool physical = has("lambda") || has("r") || has("alpha");
    if (normalized && physical)
      throw std::invalid_argument(
          "give either (Delta, delta) or (lambda, r, alpha), not both");
    if (physical) {
      return normalize(
          ModelParams(number("lambda"), number("r"), number("alpha")));
    }
    return {number("Delta"), number("delta")};
  }

  void finish() const {
    for (const auto& [key, value] : values_)
      if (!used_.count(key))
        throw std::invalid_argument("unexpected parameter '" + key + "'");
  }

 private:
  std::map<std::string, double> values_;
  std::set<std::string> used_;
};

}  // namespace detail

inline const std::vector<std::string>& eval_quantities() {
  static const std::vector<std::string> names = {
      "log_gamma",
      "beta",
      "diversity_poly",
      "diversity_poly_derivative",
      "diversity_poly_bounds",
      "diversity_poly_coefficients",
      "single_success_prob",
      "joint_success_prob",
      "independent_joint_prob",
      "joint_prob_bounds",
      "diversity_loss",
      "conditional_success_prob",
      "indicator_correlation",
      "selection_combining_prob",
      "independent_selection_prob",
      "joint_two_antenna_success",
      "joint_two_antenna_cdf",
      "independent_two_antenna_success",
  };
  return names;
}

/// Evaluates a registered closed-form quantity from key=value parameters.
/// Unknown quantities and unknown or missing keys are rejected.
inline EvalResult evaluate_quantity(const std::string& name,
                                    const std::vector<std::string>& tokens) {
  detail::EvalParams params(tokens);
  EvalResult out;
  auto scalar = [&out](double v) { out.values.emplace_back("", format_sig(v)); };

  if (name == "log_gamma") {
    scalar(log_gamma(params.number("x")));
  } else if (name == "beta") {
    scalar(beta(params.number("x"), params.number("y")));
  } else if (name == "diversity_poly") {
    scalar(diversity_poly(params.integer("n"), params.number("x")));
  } else if (name == "diversity_poly_derivative") {
    scalar(diversity_poly_derivative(params.integer("n"), params.number("x")));
  } else if (name == "diversity_poly_bounds") {
    const DiversityBounds b =
        diversity_poly_bounds(params.integer("n"), params.number("x"));
    out.values.emplace_back("lower", format_sig(b.lower));
    out.values.emplace_back("upper_asymptotic", format_sig(b.upper_asymptotic));
    out.values.emplace_back("upper_linear", format_sig(b.upper_linear));
  } else if (name == "diversity_poly_coefficients") {
    const PolynomialCoefficients c =
        diversity_poly_coefficients(params.integer("n"));
    for (std::size_t k = 0; k < c.coeffs.size(); ++k)
      out.values.emplace_back("c" + std::to_string(k),
                              format_sig(c.coeffs[k]) + " (" + c.exact[k] + ")");
  } else if (name == "single_success_prob") {
    scalar(single_success_prob(params.model(), params.number("theta")));
  } else if (name == "joint_success_prob") {
    scalar(joint_success_prob(params.model(), params.integer("n"),
                              params.number("theta")));
  } else if (name == "independent_joint_prob") {
    scalar(independent_joint_prob(params.model(), params.integer("n"),
                                  params.number("theta")));
  } else if (name == "joint_prob_bounds") {
    const ProbBounds b = joint_prob_bounds(params.model(), params.integer("n"),
                                           params.number("theta"));
    out.values.emplace_back("lower", format_sig(b.lower));
    out.values.emplace_back("upper", format_sig(b.upper));
  } else if (name == "diversity_loss") {
    scalar(diversity_loss(params.integer("n"), params.number("delta")));
  } else if (name == "conditional_success_prob") {
    scalar(conditional_success_prob(params.model(), params.integer("k"),
                                    params.number("theta")));
  } else if (name == "indicator_correlation") {
    scalar(indicator_correlation(params.model(), params.number("theta")));
  } else if (name == "selection_combining_prob") {
    scalar(selection_combining_prob(params.model(), params.integer("n"),
                                    params.number("theta")));
  } else if (name == "independent_selection_prob") {
    scalar(independent_selection_prob(params.model(), params.integer("n"),
                                      params.number("theta")));
  } else if (name == "joint_two_antenna_success") {
    scalar(joint_two_antenna_success(params.model(), params.number("theta1"),
                                     params.number("theta2")));
  } else if (name == "joint_two_antenna_cdf") {
    scalar(joint_two_antenna_cdf(params.model(), params.number("theta1"),
                                 params.number("theta2")));
  } else if (name == "independent_two_antenna_success") {
    scalar(independent_two_antenna_success(
        params.model(), params.number("theta1"), params.number("theta2")));
  } else {
    std::string known;
    for (const auto& q : eval_quantities()) known += "\n  " + q;
    throw std::invalid_argument("unknown quantity '" + name +
                                "'; known quantities:" + known);
  }
  params.finish();
  return out;
}

}  // namespace sirdiv
