#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sirdiv/specfun.hpp"

namespace sirdiv {

/// Gamma(1+delta) Gamma(1-delta) for delta in (0, 1): the constant that maps
/// interferer density into the success-probability exponent.
inline double interference_constant(double delta) {
  detail::require(std::isfinite(delta) && delta > 0.0 && delta < 1.0,
                  "interference_constant: delta must lie in (0, 1)");
  return std::exp(log_gamma(1.0 + delta) + log_gamma(1.0 - delta));
}

/// Physical network parameters together with the derived normalized
/// quantities they determine.
struct ModelParams {
  double intensity;           // interferers per unit area
  double link_distance;       // desired-link length
  double path_loss_exponent;  // must exceed 2, else interference diverges
  double delta;               // 2 / path_loss_exponent
  double contention;          // lambda pi r^2 Gamma(1+delta) Gamma(1-delta)

  ModelParams(double intensity_, double link_distance_,
              double path_loss_exponent_)
      : intensity(intensity_),
        link_distance(link_distance_),
        path_loss_exponent(path_loss_exponent_) {
    detail::require(std::isfinite(intensity) && intensity > 0.0,
                    "ModelParams: intensity must be positive");
    detail::require(std::isfinite(link_distance) && link_distance > 0.0,
                    "ModelParams: link distance must be positive");
    detail::require(std::isfinite(path_loss_exponent) &&
                        path_loss_exponent > 2.0,
                    "ModelParams: path loss exponent must exceed 2");
    delta = 2.0 / path_loss_exponent;
    contention = intensity * std::numbers::pi * link_distance * link_distance *
                 interference_constant(delta);
  }
};

/// The (contention, delta) pair all closed forms depend on. The physical
/// parameters enter only through these two numbers.
struct NormalizedParams {
  double contention;  // written Delta in most parameterizations
  double delta;

  NormalizedParams(double contention_, double delta_)
      : contention(contention_), delta(delta_) {
    detail::require(std::isfinite(contention) && contention > 0.0,
                    "NormalizedParams: contention must be positive");
    detail::require(std::isfinite(delta) && delta > 0.0 && delta < 1.0,
                    "NormalizedParams: delta must lie in (0, 1)");
  }
};

inline NormalizedParams normalize(const ModelParams& m) {
  return {m.contention, m.delta};
}

/// Canonical physical model with unit link distance reproducing the given
/// normalized pair.
inline ModelParams canonical_model(const NormalizedParams& p) {
  return {p.contention / (std::numbers::pi * interference_constant(p.delta)),
          1.0, 2.0 / p.delta};
}

}  // namespace sirdiv
