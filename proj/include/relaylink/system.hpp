#pragma once

#include <string_view>

#include "relaylink/channel_models.hpp"
#include "relaylink/selection.hpp"

namespace relaylink {

/// Two-way decode-and-forward scenario: K scheduled RF uplinks into the relay,
/// an alpha-mu hop (FSO or backup RF) between base station and relay in each
/// direction, and a Rayleigh downlink from the relay to the selected node.
struct SystemConfig {
  SchedulingSpec scheduling;
  AlphaMuParams sr_model;  ///< base station -> relay
  AlphaMuParams rs_model;  ///< relay -> base station
  double gamma_th = 1.0;
  double mod_a = 1.0;  ///< BPSK
  double mod_b = 1.0;
};

void validate(const SystemConfig& c);

/// Copy of `c` with all four mean SNRs set to `mean_snr`.
SystemConfig with_common_mean_snr(SystemConfig c, double mean_snr);

/// True when all four links share one mean SNR (relative tolerance 1e-12).
bool has_common_mean_snr(const SystemConfig& c);

enum class Method { exact, asymptotic, quadrature, monte_carlo };

std::string_view to_string(Method m);

struct PerfEstimate {
  double value = 0.0;
  Method method = Method::exact;
  double std_error = 0.0;  ///< Monte Carlo only
  long trials = 0;         ///< Monte Carlo only
};

}  // namespace relaylink
