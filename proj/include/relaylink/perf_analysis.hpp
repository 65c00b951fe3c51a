#pragma once

#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "relaylink/mc_sim.hpp"
#include "relaylink/specfun.hpp"
#include "relaylink/system.hpp"

namespace relaylink {

/// First phase: selected uplink and base station both transmit to the relay.
double phase1_outage(const SystemConfig& c);
/// Second phase: relay transmits to the base station and the selected node.
double phase2_outage(const SystemConfig& c);

/// End-to-end CDF at gamma, i.e. the outage probability with threshold gamma.
double end_to_end_cdf(const SystemConfig& c, double gamma);

/// ST1 + ST2 - ST1 ST2.
PerfEstimate total_outage(const SystemConfig& c);

/// The same outage written out term by term in the selection sum and the
/// incomplete-gamma kernels, without going through phase1/phase2.
double total_outage_expanded(const SystemConfig& c);

/// CDF-based average symbol error probability,
///   (a sqrt(b) / (2 sqrt(pi))) * int_0^inf e^{-b g} g^{-1/2} F_tot(g) dg.
///
/// Substituting g = u^2 / b turns it into (a / (2 sqrt(pi))) * int e^{-u^2}
/// F_tot(u^2 / b) du over the real line. A Hermite rule evaluates that sum and
/// is cross-checked against adaptive Simpson on [0, sqrt(40)]; disagreement
/// above 1e-6 raises QuadratureFailure. The adaptive marker rule skips the
/// Hermite sum.
PerfEstimate asep(const SystemConfig& c, const specfun::QuadratureRule& rule);
PerfEstimate asep(const SystemConfig& c);

/// Adaptive Simpson value of the ASEP integral (tolerance 1e-10 absolute).
double asep_adaptive(const SystemConfig& c);
/// Hermite-sum value of the ASEP integral, no cross-check.
double asep_hermite(const SystemConfig& c, const specfun::QuadratureRule& rule);

/// True when F_tot(u^2/b) is smooth in u, so a Hermite rule converges
/// spectrally: every alpha-mu hop needs alpha and alpha*mu even integers.
bool hermite_friendly(const SystemConfig& c);

/// High-SNR outage: sum of the leading terms of the uplink, alpha-mu and
/// downlink CDFs. Requires a common mean SNR and identical alpha-mu hops.
PerfEstimate asymptotic_outage(const SystemConfig& c);

enum class Term { T1, T2, T3 };

std::string_view to_string(Term t);

struct AsymptoticReport {
  double diversity_order = 0.0;
  std::map<Term, double> term_order;   ///< K-N+1, alpha*mu/2, 1
  std::map<Term, double> coding_gain;  ///< Upsilon_i / gamma_th
  std::map<Term, double> coefficient;  ///< multiplier of (gamma_th/mean)^order
  std::set<Term> dominant;
};

AsymptoticReport classify_asymptotics(const SystemConfig& c);

enum class SweepVariable { mean_snr_db, k_total, n_order, gamma_th };

struct SweepRow {
  double x = 0.0;
  PerfEstimate exact;
  std::optional<PerfEstimate> asymptotic;
  std::optional<PerfEstimate> monte_carlo;
};

/// Outage along one axis. With `mc` set, a Monte-Carlo column is added; for the
/// mean-SNR axis every grid point reuses the same draws, rescaled.
std::vector<SweepRow> sweep(const SystemConfig& c, SweepVariable variable,
                            const std::vector<double>& grid,
                            const std::optional<McConfig>& mc = std::nullopt);

}  // namespace relaylink
