#pragma once

#include <string>
#include <variant>

#include "relaylink/rng.hpp"

namespace relaylink {

/// Exponentially distributed SNR of a Rayleigh-faded RF link.
struct RayleighParams {
  double mean_snr = 1.0;
};

/// alpha-mu SNR law: power parameter alpha, fading parameter mu.
struct AlphaMuParams {
  double alpha = 2.0;
  double mu = 1.0;
  double mean_snr = 1.0;

  bool operator==(const AlphaMuParams&) const = default;
};

/// Gamma-Gamma turbulence, large-scale shape eta and small-scale shape beta.
struct GammaGammaParams {
  double eta = 1.0;
  double beta = 1.0;
};

/// Fading law of one link. Named constructors cover the classical special
/// cases of the alpha-mu family.
class FadingModel {
 public:
  static FadingModel rayleigh(double mean_snr);
  static FadingModel alpha_mu(double alpha, double mu, double mean_snr);
  static FadingModel one_sided_gaussian(double mean_snr) { return alpha_mu(2.0, 0.5, mean_snr); }
  static FadingModel nakagami_m2(double mean_snr) { return alpha_mu(2.0, 2.0, mean_snr); }
  static FadingModel weibull(double mean_snr) { return alpha_mu(1.75, 1.0, mean_snr); }
  static FadingModel exponential_envelope(double mean_snr) { return alpha_mu(1.0, 1.0, mean_snr); }
  /// Looks up one of the names above ("rayleigh", "nakagami", ...).
  static FadingModel named(const std::string& name, double mean_snr);

  bool is_rayleigh() const { return std::holds_alternative<RayleighParams>(params_); }
  double mean_snr() const;
  double cdf(double gamma) const;
  double pdf(double gamma) const;

  /// Same law seen as alpha-mu; Rayleigh maps to alpha = 2, mu = 1.
  AlphaMuParams as_alpha_mu() const;

  const std::variant<RayleighParams, AlphaMuParams>& params() const { return params_; }

 private:
  explicit FadingModel(std::variant<RayleighParams, AlphaMuParams> p) : params_(p) {}
  std::variant<RayleighParams, AlphaMuParams> params_;
};

/// Transmit power, detector noise and (for optical hops) the electrical/optical
/// conversion ratios that turn a channel gain into an instantaneous SNR.
struct LinkBudget {
  double tx_power = 1.0;
  double noise_psd = 1.0;
  double eo_ratio = 1.0;
  double oe_ratio = 1.0;
  bool is_optical = false;
};

void validate(const RayleighParams& p);
void validate(const AlphaMuParams& p);
void validate(const GammaGammaParams& p);

double rayleigh_snr_pdf(const RayleighParams& p, double gamma);
double rayleigh_snr_cdf(const RayleighParams& p, double gamma);

/// Envelope density with scale omega.
double alpha_mu_envelope_pdf(double alpha, double mu, double omega, double h);
/// Envelope CDF with scale omega, P(mu, mu (h/omega)^alpha).
double alpha_mu_envelope_cdf(double alpha, double mu, double omega, double h);

double alpha_mu_snr_pdf(const AlphaMuParams& p, double gamma);
double alpha_mu_snr_cdf(const AlphaMuParams& p, double gamma);

/// Inverse-transform draw: gamma = mean_snr * (P^{-1}(mu, u) / mu)^{2/alpha}.
double alpha_mu_sample(const AlphaMuParams& p, double u);

/// n-th raw moment of a unit-mean Gamma-Gamma variate.
double gamma_gamma_moment(const GammaGammaParams& p, int n);
/// n-th raw moment of the alpha-mu envelope in the rho_bar^{-n} parametrization.
double alpha_mu_moment(double alpha, double mu, double rho_bar, int n);

/// Draw from Gamma(shape, 1) by inverse transform of one uniform.
double gamma_variate(double shape, RngStream& rng);
/// Product of unit-mean Gamma(eta) and Gamma(beta) variates.
double gamma_gamma_sample(const GammaGammaParams& p, RngStream& rng);

/// Instantaneous SNR; the optical path includes both conversion ratios.
double link_snr(const LinkBudget& budget, double channel_gain_sq);

/// Linear SNR from decibels and back.
double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace relaylink
