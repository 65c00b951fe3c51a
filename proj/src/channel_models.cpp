#include "relaylink/channel_models.hpp"

#include <cmath>

#include "relaylink/errors.hpp"
#include "relaylink/specfun.hpp"

namespace relaylink {

using specfun::ln_gamma;
using specfun::reg_lower_inc_gamma;

void validate(const RayleighParams& p) {
  if (!(p.mean_snr > 0.0)) domain_fail("Rayleigh mean SNR must be positive");
}

void validate(const AlphaMuParams& p) {
  if (!(p.alpha > 0.0) || !(p.mu > 0.0)) domain_fail("alpha-mu: alpha and mu must be positive");
  if (!(p.mean_snr > 0.0)) domain_fail("alpha-mu: mean SNR must be positive");
}

void validate(const GammaGammaParams& p) {
  if (!(p.eta > 0.0) || !(p.beta > 0.0)) domain_fail("Gamma-Gamma: eta and beta must be positive");
}

namespace {

void check_gamma(double gamma) {
  if (!(gamma >= 0.0)) domain_fail("SNR argument must be nonnegative");
}

}  // namespace

FadingModel FadingModel::rayleigh(double mean_snr) {
  RayleighParams p{mean_snr};
  validate(p);
  return FadingModel(p);
}

FadingModel FadingModel::alpha_mu(double alpha, double mu, double mean_snr) {
  AlphaMuParams p{alpha, mu, mean_snr};
  validate(p);
  return FadingModel(p);
}

FadingModel FadingModel::named(const std::string& name, double mean_snr) {
  if (name == "rayleigh") return rayleigh(mean_snr);
  if (name == "one_sided_gaussian") return one_sided_gaussian(mean_snr);
  if (name == "nakagami") return nakagami_m2(mean_snr);
  if (name == "weibull") return weibull(mean_snr);
  if (name == "exponential") return exponential_envelope(mean_snr);
  domain_fail("unknown fading model '" + name + "'");
}

double FadingModel::mean_snr() const {
  return std::visit([](const auto& p) { return p.mean_snr; }, params_);
}

AlphaMuParams FadingModel::as_alpha_mu() const {
  if (const auto* r = std::get_if<RayleighParams>(&params_)) return {2.0, 1.0, r->mean_snr};
  return std::get<AlphaMuParams>(params_);
}

double FadingModel::cdf(double gamma) const {
  if (const auto* r = std::get_if<RayleighParams>(&params_)) return rayleigh_snr_cdf(*r, gamma);
  return alpha_mu_snr_cdf(std::get<AlphaMuParams>(params_), gamma);
}

double FadingModel::pdf(double gamma) const {
  if (const auto* r = std::get_if<RayleighParams>(&params_)) return rayleigh_snr_pdf(*r, gamma);
  return alpha_mu_snr_pdf(std::get<AlphaMuParams>(params_), gamma);
}

double rayleigh_snr_pdf(const RayleighParams& p, double gamma) {
  validate(p);
  check_gamma(gamma);
  return std::exp(-gamma / p.mean_snr) / p.mean_snr;
}

double rayleigh_snr_cdf(const RayleighParams& p, double gamma) {
  validate(p);
  check_gamma(gamma);
  return -std::expm1(-gamma / p.mean_snr);
}

double alpha_mu_envelope_pdf(double alpha, double mu, double omega, double h) {
  if (!(alpha > 0.0) || !(mu > 0.0) || !(omega > 0.0)) {
    domain_fail("alpha-mu envelope: parameters must be positive");
  }
  if (!(h >= 0.0)) domain_fail("alpha-mu envelope: argument must be nonnegative");
  if (h == 0.0) {
    const double am = alpha * mu;
    if (am > 1.0) return 0.0;
    if (am < 1.0) return HUGE_VAL;
    return alpha * std::pow(mu, mu) / (std::exp(ln_gamma(mu)) * omega);
  }
  const double r = h / omega;
  const double log_pdf = std::log(alpha) + mu * std::log(mu) + (alpha * mu - 1.0) * std::log(r) -
                         ln_gamma(mu) - std::log(omega) - mu * std::pow(r, alpha);
  return std::exp(log_pdf);
}

double alpha_mu_envelope_cdf(double alpha, double mu, double omega, double h) {
  if (!(alpha > 0.0) || !(mu > 0.0) || !(omega > 0.0)) {
    domain_fail("alpha-mu envelope: parameters must be positive");
  }
  if (!(h >= 0.0)) domain_fail("alpha-mu envelope: argument must be nonnegative");
  return reg_lower_inc_gamma(mu, mu * std::pow(h / omega, alpha));
}

double alpha_mu_snr_pdf(const AlphaMuParams& p, double gamma) {
  validate(p);
  check_gamma(gamma);
  const double half_alpha = 0.5 * p.alpha;
  if (gamma == 0.0) {
    const double e = half_alpha * p.mu;
    if (e > 1.0) return 0.0;
    if (e < 1.0) return HUGE_VAL;
    return half_alpha * std::pow(p.mu, p.mu) / (std::exp(ln_gamma(p.mu)) * p.mean_snr);
  }
  const double r = gamma / p.mean_snr;
  const double log_pdf = std::log(half_alpha) - ln_gamma(p.mu) + p.mu * std::log(p.mu) +
                         (half_alpha * p.mu - 1.0) * std::log(r) - std::log(p.mean_snr) -
                         p.mu * std::pow(r, half_alpha);
  return std::exp(log_pdf);
}

double alpha_mu_snr_cdf(const AlphaMuParams& p, double gamma) {
  validate(p);
  check_gamma(gamma);
  return reg_lower_inc_gamma(p.mu, p.mu * std::pow(gamma / p.mean_snr, 0.5 * p.alpha));
}

double alpha_mu_sample(const AlphaMuParams& p, double u) {
  validate(p);
  if (!(u > 0.0 && u < 1.0)) domain_fail("alpha_mu_sample: u must lie in (0,1)");
  const double g = specfun::inv_reg_lower_inc_gamma(p.mu, u);
  return p.mean_snr * std::pow(g / p.mu, 2.0 / p.alpha);
}

double gamma_gamma_moment(const GammaGammaParams& p, int n) {
  validate(p);
  if (n < 1) domain_fail("moment order must be at least 1");
  const double log_m = -n * std::log(p.eta * p.beta) + ln_gamma(p.eta + n) +
                       ln_gamma(p.beta + n) - ln_gamma(p.eta) - ln_gamma(p.beta);
  return std::exp(log_m);
}

double alpha_mu_moment(double alpha, double mu, double rho_bar, int n) {
  if (!(alpha > 0.0) || !(mu > 0.0) || !(rho_bar > 0.0)) {
    domain_fail("alpha-mu moment: parameters must be positive");
  }
  if (n < 1) domain_fail("moment order must be at least 1");
  const double k = n / alpha;
  const double log_m = -n * std::log(rho_bar) + ln_gamma(mu + k) - k * std::log(mu) - ln_gamma(mu);
  return std::exp(log_m);
}

double gamma_variate(double shape, RngStream& rng) {
  return specfun::inv_reg_lower_inc_gamma(shape, rng.uniform());
}

double gamma_gamma_sample(const GammaGammaParams& p, RngStream& rng) {
  validate(p);
  const double x = gamma_variate(p.eta, rng) / p.eta;
  const double y = gamma_variate(p.beta, rng) / p.beta;
  return x * y;
}

double link_snr(const LinkBudget& budget, double channel_gain_sq) {
  if (!(budget.tx_power > 0.0) || !(budget.noise_psd > 0.0)) {
    domain_fail("link budget: power and noise must be positive");
  }
  if (!(channel_gain_sq >= 0.0)) domain_fail("link budget: channel gain must be nonnegative");
  double scale = budget.tx_power / budget.noise_psd;
  if (budget.is_optical) {
    if (!(budget.eo_ratio > 0.0 && budget.eo_ratio <= 1.0) ||
        !(budget.oe_ratio > 0.0 && budget.oe_ratio <= 1.0)) {
      domain_fail("link budget: conversion ratios must lie in (0,1]");
    }
    scale *= budget.eo_ratio * budget.oe_ratio;
  }
  return scale * channel_gain_sq;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace relaylink
