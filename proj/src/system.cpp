#include "relaylink/system.hpp"

#include <cmath>

#include "relaylink/errors.hpp"

namespace relaylink {

void validate(const SystemConfig& c) {
  validate(c.scheduling);
  validate(c.sr_model);
  validate(c.rs_model);
  if (!(c.gamma_th >= 0.0)) domain_fail("outage threshold must be non-negative");
  if (!(c.mod_a > 0.0) || !(c.mod_b > 0.0)) domain_fail("modulation constants must be positive");
}

SystemConfig with_common_mean_snr(SystemConfig c, double mean_snr) {
  c.scheduling.uplink_mean_snr = mean_snr;
  c.scheduling.downlink_mean_snr = mean_snr;
  c.sr_model.mean_snr = mean_snr;
  c.rs_model.mean_snr = mean_snr;
  return c;
}

bool has_common_mean_snr(const SystemConfig& c) {
  const double ref = c.scheduling.uplink_mean_snr;
  auto same = [ref](double v) { return std::abs(v - ref) <= 1e-12 * std::abs(ref); };
  return same(c.scheduling.downlink_mean_snr) && same(c.sr_model.mean_snr) &&
         same(c.rs_model.mean_snr);
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::asymptotic: return "asymptotic";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

}  // namespace relaylink
