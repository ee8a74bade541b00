#pragma once

#include <limits>
#include <span>

#include "errors.hpp"

namespace aniso {

/// Order parameter of the aggregation family: any finite value >= 0, or
/// infinity. The constructor rejects negatives and NaN so downstream code
/// never re-validates.
class Alpha {
public:
  explicit Alpha(double value) : value_(value) {
    if (!(value >= 0.0)) {
      fail(ErrorCode::invalid_argument, "alpha must be >= 0 (or infinity)");
    }
  }

  static Alpha infinity() { return Alpha(std::numeric_limits<double>::infinity()); }

  double value() const noexcept { return value_; }
  bool is_infinite() const noexcept { return std::numeric_limits<double>::infinity() == value_; }

private:
  double value_;
};

/// Power mean M_p of nonnegative entries with exponent p = 1 - alpha:
/// alpha 0 -> arithmetic mean, 1 -> geometric, 2 -> harmonic, inf -> min.
/// Any zero entry with alpha >= 1 collapses the mean to 0. General alphas
/// run through log-sum-exp with entries clamped at 1e-300, so the result
/// stays finite for extreme scores and large alpha.
double power_mean(std::span<const double> x, Alpha alpha);

/// Aggregated anomaly score 2^(-power_mean(x, alpha)), in (0, 1]; higher
/// means more anomalous.
double aggregate(std::span<const double> x, Alpha alpha);

/// Renyi divergence R_alpha(p || q) between distributions given as
/// nonnegative vectors (p must sum to 1 within 1e-9). alpha 1 is the KL
/// limit, alpha 0 is -ln of q's mass on p's support, alpha inf is
/// ln max_i p_i/q_i. May return +infinity (absolute continuity failures).
double renyi_divergence(std::span<const double> p, std::span<const double> q, Alpha alpha);

/// Anomaly decision at threshold tau (inclusive).
inline bool classify(double score, double tau) { return score >= tau; }

}  // namespace aniso
