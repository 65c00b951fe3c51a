#include "relaylink/selection.hpp"

#include <algorithm>
#include <cmath>

#include "relaylink/errors.hpp"
#include "relaylink/specfun.hpp"

namespace relaylink {

namespace {

constexpr int kLogSpaceThreshold = 30;

void check_gamma(double gamma) {
  if (!(gamma >= 0.0)) domain_fail("SNR argument must be nonnegative");
}

double ln_binomial(int n, int k) {
  using specfun::ln_gamma;
  return ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0);
}

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

void validate(const SchedulingSpec& s) {
  if (s.k_total < 1) domain_fail("scheduling: K must be at least 1");
  if (s.n_order < 1 || s.n_order > s.k_total) domain_fail("scheduling: need 1 <= N <= K");
  if (!(s.uplink_mean_snr > 0.0) || !(s.downlink_mean_snr > 0.0)) {
    domain_fail("scheduling: mean SNRs must be positive");
  }
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (n > kLogSpaceThreshold) return std::exp(ln_binomial(n, k));
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

double best_select_cdf(const SchedulingSpec& s, double gamma) {
  validate(s);
  check_gamma(gamma);
  return std::pow(-std::expm1(-gamma / s.uplink_mean_snr), s.k_total);
}

double best_select_cdf_binomial_sum(const SchedulingSpec& s, double gamma) {
  SchedulingSpec best = s;
  best.n_order = 1;
  return nth_best_cdf_alternating(best, gamma);
}

double best_select_pdf(const SchedulingSpec& s, double gamma) {
  validate(s);
  check_gamma(gamma);
  const double x = gamma / s.uplink_mean_snr;
  const double f = -std::expm1(-x);
  return s.k_total * std::pow(f, s.k_total - 1) * std::exp(-x) / s.uplink_mean_snr;
}

double nth_best_cdf(const SchedulingSpec& s, double gamma) {
  validate(s);
  check_gamma(gamma);
  if (gamma == 0.0) return 0.0;
  const int k = s.k_total;
  const double x = gamma / s.uplink_mean_snr;
  const double log_f = std::log(-std::expm1(-x));
  // ln(1 - F) = -x exactly for the exponential law.
  double total = 0.0;
  for (int j = 0; j < s.n_order; ++j) {
    const double log_term = ln_binomial(k, j) - j * x + (k - j) * log_f;
    total += std::exp(log_term);
  }
  return std::clamp(total, 0.0, 1.0);
}

double nth_best_cdf_alternating(const SchedulingSpec& s, double gamma) {
  validate(s);
  check_gamma(gamma);
  const int k = s.k_total;
  const int n = s.n_order;
  const double x = gamma / s.uplink_mean_snr;
  const bool log_space = k > kLogSpaceThreshold;
  const double ln_lead = std::log(static_cast<double>(k)) + ln_binomial(k - 1, n - 1);
  const double lead = log_space ? 0.0 : k * binomial(k - 1, n - 1);

  CompensatedSum acc;
  for (int i = 0; i <= k - n; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    const double tail = -std::expm1(-(i + n) * x) / (i + n);
    double coeff;
    if (log_space) {
      coeff = std::exp(ln_lead + ln_binomial(k - n, i));
    } else {
      coeff = lead * binomial(k - n, i);
    }
    acc.add(sign * coeff * tail);
  }
  return std::clamp(acc.value(), 0.0, 1.0);
}

double downlink_cdf(const SchedulingSpec& s, double gamma) {
  validate(s);
  check_gamma(gamma);
  return -std::expm1(-gamma / s.downlink_mean_snr);
}

}  // namespace relaylink
