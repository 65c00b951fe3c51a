#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "relaylink/rng.hpp"
#include "relaylink/system.hpp"

namespace relaylink {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED2019A1FA3Bu;

struct McConfig {
  long trials = 1'000'000;
  std::uint64_t seed = kDefaultSeed;
  int workers = 1;
  long batch = 1 << 16;  ///< trials per block; one RNG substream per block
  /// Called after every finished block with (trials done, trials total).
  std::function<void(long, long)> progress;
};

void validate(const McConfig& m);

/// Instantaneous SNRs of one protocol round.
struct LinkDraw {
  double uplink_selected = 0.0;  ///< N*-th best of K exponential uplinks
  double sr = 0.0;
  double rs = 0.0;
  double downlink = 0.0;

  double end_to_end() const;
};

/// Draws one round from `rng` (K uplinks, then S->R, R->S, R->N*).
LinkDraw draw_links(const SystemConfig& c, RngStream& rng);

PerfEstimate simulate_outage(const SystemConfig& c, const McConfig& m);
PerfEstimate simulate_asep(const SystemConfig& c, const McConfig& m);

struct ScaledEstimates {
  std::vector<PerfEstimate> outage;
  std::vector<PerfEstimate> asep;
};

/// Runs `c` once and evaluates outage and ASEP for every mean-SNR multiplier in
/// `scales` (all four links scaled together) on the same draws.
ScaledEstimates simulate_scaled(const SystemConfig& c, const McConfig& m,
                                const std::vector<double>& scales);

}  // namespace relaylink
