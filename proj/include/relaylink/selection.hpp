#pragma once

namespace relaylink {

/// Opportunistic scheduling among K i.i.d. Rayleigh uplinks: the relay serves
/// the node whose uplink SNR ranks n_order-th (1 = best).
struct SchedulingSpec {
  int k_total = 1;
  int n_order = 1;
  double uplink_mean_snr = 1.0;
  double downlink_mean_snr = 1.0;
};

void validate(const SchedulingSpec& s);

/// (1 - e^{-gamma/mean})^K.
double best_select_cdf(const SchedulingSpec& s, double gamma);
/// Alternating binomial expansion of the best-of-K CDF. Exposed for
/// cross-checking; loses relative precision when gamma << mean.
double best_select_cdf_binomial_sum(const SchedulingSpec& s, double gamma);
double best_select_pdf(const SchedulingSpec& s, double gamma);

/// CDF of the n_order-th largest of K exponential SNRs.
///
/// Evaluated as P(at most N-1 of K exceed gamma), a sum of positive terms
/// that keeps full relative precision down to gamma -> 0.
double nth_best_cdf(const SchedulingSpec& s, double gamma);
/// The same CDF through the alternating sum over k = 0..K-N, with
/// compensated summation.
double nth_best_cdf_alternating(const SchedulingSpec& s, double gamma);

/// Relay to selected node, 1 - e^{-gamma/downlink_mean}.
double downlink_cdf(const SchedulingSpec& s, double gamma);

/// Binomial coefficient as a double, exact for all practical K.
double binomial(int n, int k);

}  // namespace relaylink
