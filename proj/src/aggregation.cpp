#include "aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace aniso {

namespace {

constexpr double kLogFloor = 1e-300;

void check_entries(std::span<const double> x, const char* who) {
  if (x.empty()) fail(ErrorCode::empty_input, std::string(who) + " needs a nonempty vector");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0)) {
      fail(ErrorCode::negative_entry,
           std::string(who) + ": entry " + std::to_string(i) + " is negative or NaN");
    }
  }
}

}  // namespace

double power_mean(std::span<const double> x, Alpha alpha) {
  check_entries(x, "power_mean");
  const double n = static_cast<double>(x.size());
  const double a = alpha.value();

  if (alpha.is_infinite()) {
    return *std::min_element(x.begin(), x.end());
  }
  if (a == 0.0) {
    double sum = 0.0;
    for (double v : x) sum += v;
    return sum / n;
  }

  bool has_zero = false;
  for (double v : x) has_zero = has_zero || v == 0.0;
  if (has_zero && a >= 1.0) return 0.0;

  if (a == 1.0) {
    // Geometric mean, directly in log space.
    double log_sum = 0.0;
    for (double v : x) log_sum += std::log(v);
    return std::exp(log_sum / n);
  }

  // M_p(x) = exp((LSE_i(p ln x_i) - ln n) / p) with p = 1 - alpha. The
  // max-subtracted log-sum-exp keeps p ln x_i from overflowing for large
  // alpha; the clamp keeps ln finite when a zero slips through (alpha < 1,
  // where a zero entry contributes nothing in the limit).
  const double p = 1.0 - a;
  std::vector<double> scaled(x.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    scaled[i] = p * std::log(std::max(x[i], kLogFloor));
    peak = std::max(peak, scaled[i]);
  }
  double sum = 0.0;
  for (double s : scaled) sum += std::exp(s - peak);
  const double lse = peak + std::log(sum);
  return std::exp((lse - std::log(n)) / p);
}

double aggregate(std::span<const double> x, Alpha alpha) {
  return std::exp2(-power_mean(x, alpha));
}

double renyi_divergence(std::span<const double> p, std::span<const double> q, Alpha alpha) {
  if (p.size() != q.size()) {
    fail(ErrorCode::dimension_mismatch, "renyi_divergence: p and q differ in length");
  }
  check_entries(p, "renyi_divergence");
  check_entries(q, "renyi_divergence");
  double total = 0.0;
  for (double v : p) total += v;
  if (std::abs(total - 1.0) > 1e-9) {
    fail(ErrorCode::not_a_probability, "renyi_divergence: p must sum to 1");
  }

  const double inf = std::numeric_limits<double>::infinity();
  const double a = alpha.value();

  if (alpha.is_infinite()) {
    double worst = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == 0.0) continue;
      if (q[i] == 0.0) return inf;
      worst = std::max(worst, p[i] / q[i]);
    }
    return std::log(worst);
  }
  if (a == 0.0) {
    double mass = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] > 0.0) mass += q[i];
    }
    return -std::log(mass);
  }
  if (a == 1.0) {
    // KL divergence, with 0 ln(0/q) = 0 and p > 0 against q = 0 -> +inf.
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == 0.0) continue;
      if (q[i] == 0.0) return inf;
      kl += p[i] * std::log(p[i] / q[i]);
    }
    return kl;
  }

  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      if (a > 1.0) return inf;
      continue;  // q_i^(1-a) with a < 1 is 0^positive = 0
    }
    sum += std::pow(p[i], a) * std::pow(q[i], 1.0 - a);
  }
  return std::log(sum) / (a - 1.0);
}

}  // namespace aniso
