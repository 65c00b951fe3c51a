#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "relaylink/mc_sim.hpp"
#include "relaylink/system.hpp"

namespace relaylink {

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

/// A scenario file: INI sections [scheduling], [uplink], [downlink],
/// [sr_link], [rs_link], [modulation], [mc], plus top-level `name` and
/// `gamma_th`. SNR-valued keys take linear values or a "db" suffix. Unknown
/// sections or keys are rejected.
struct Scenario {
  std::string name;
  SystemConfig system;
  McConfig mc;
  bool mc_trials_set = false;  ///< [mc] trials present in the file
  bool mc_seed_set = false;
};

Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);

/// Canonical text form; parse_scenario(serialize_scenario(s)) reproduces s.
std::string serialize_scenario(const Scenario& s);

/// "20db", "20 dB" or "100" -> linear value.
double parse_snr(const std::string& text);

}  // namespace relaylink
