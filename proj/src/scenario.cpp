#include "relaylink/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace relaylink {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"", {"name", "gamma_th"}},
      {"scheduling", {"k_total", "n_order"}},
      {"uplink", {"mean_snr"}},
      {"downlink", {"mean_snr"}},
      {"sr_link", {"model", "alpha", "mu", "mean_snr"}},
      {"rs_link", {"model", "alpha", "mu", "mean_snr"}},
      {"modulation", {"a", "b"}},
      {"mc", {"trials", "seed", "workers", "batch"}},
  };
  return s;
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw ScenarioError("'" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 0);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw ScenarioError("'" + key + "': expected an integer, got '" + text + "'");
  }
  return v;
}

unsigned long long parse_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 0);
  if (t.empty() || t[0] == '-' || end != t.c_str() + t.size()) {
    throw ScenarioError("'" + key + "': expected an unsigned integer, got '" + text + "'");
  }
  return v;
}

void check_schema(const pt::ptree& root) {
  for (const auto& [key, node] : root) {
    if (node.empty()) {
      if (!schema().at("").contains(key)) throw ScenarioError("unknown top-level key '" + key + "'");
      continue;
    }
    auto section = schema().find(key);
    if (section == schema().end() || key.empty()) {
      throw ScenarioError("unknown section [" + key + "]");
    }
    for (const auto& [sub, leaf] : node) {
      if (!section->second.contains(sub)) {
        throw ScenarioError("unknown key '" + sub + "' in [" + key + "]");
      }
    }
  }
}

std::string required(const pt::ptree& root, const std::string& path) {
  auto v = root.get_optional<std::string>(pt::ptree::path_type(path, '.'));
  if (!v) throw ScenarioError("missing required key '" + path + "'");
  return *v;
}

AlphaMuParams parse_hop(const pt::ptree& root, const std::string& section) {
  const double mean = parse_snr(required(root, section + ".mean_snr"));
  const auto model = root.get_optional<std::string>(section + ".model");
  const auto alpha = root.get_optional<std::string>(section + ".alpha");
  const auto mu = root.get_optional<std::string>(section + ".mu");
  if (model) {
    if (alpha || mu) throw ScenarioError("[" + section + "]: give either model or alpha/mu");
    try {
      return FadingModel::named(trim(*model), mean).as_alpha_mu();
    } catch (const std::domain_error& e) {
      throw ScenarioError("[" + section + "]: " + e.what());
    }
  }
  if (!alpha || !mu) throw ScenarioError("[" + section + "]: needs alpha and mu (or model)");
  return {parse_real(section + ".alpha", *alpha), parse_real(section + ".mu", *mu), mean};
}

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double parse_snr(const std::string& text) {
  std::string t = trim(text);
  std::string lower = t;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower.size() > 2 && lower.ends_with("db")) {
    return db_to_linear(parse_real("snr", t.substr(0, t.size() - 2)));
  }
  return parse_real("snr", t);
}

Scenario parse_scenario(std::istream& in) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ScenarioError(e.what());
  }
  check_schema(root);

  Scenario s;
  s.name = trim(root.get<std::string>("name", "scenario"));
  if (auto g = root.get_optional<std::string>("gamma_th")) s.system.gamma_th = parse_snr(*g);

  SchedulingSpec& sch = s.system.scheduling;
  sch.k_total = static_cast<int>(parse_integer("scheduling.k_total", required(root, "scheduling.k_total")));
  if (auto n = root.get_optional<std::string>("scheduling.n_order")) {
    sch.n_order = static_cast<int>(parse_integer("scheduling.n_order", *n));
  }
  sch.uplink_mean_snr = parse_snr(required(root, "uplink.mean_snr"));
  sch.downlink_mean_snr = parse_snr(required(root, "downlink.mean_snr"));
  s.system.sr_model = parse_hop(root, "sr_link");
  s.system.rs_model = parse_hop(root, "rs_link");

  if (auto a = root.get_optional<std::string>("modulation.a")) s.system.mod_a = parse_real("modulation.a", *a);
  if (auto b = root.get_optional<std::string>("modulation.b")) s.system.mod_b = parse_real("modulation.b", *b);

  if (auto v = root.get_optional<std::string>("mc.trials")) {
    s.mc.trials = static_cast<long>(parse_integer("mc.trials", *v));
    s.mc_trials_set = true;
  }
  if (auto v = root.get_optional<std::string>("mc.seed")) {
    s.mc.seed = parse_unsigned("mc.seed", *v);
    s.mc_seed_set = true;
  }
  if (auto v = root.get_optional<std::string>("mc.workers")) {
    s.mc.workers = static_cast<int>(parse_integer("mc.workers", *v));
  }
  if (auto v = root.get_optional<std::string>("mc.batch")) {
    s.mc.batch = static_cast<long>(parse_integer("mc.batch", *v));
  }

  try {
    validate(s.system);
    validate(s.mc);
  } catch (const std::domain_error& e) {
    throw ScenarioError(e.what());
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  return parse_scenario(in);
}

std::string serialize_scenario(const Scenario& s) {
  const SystemConfig& c = s.system;
  std::ostringstream out;
  out << "name = " << s.name << "\n";
  out << "gamma_th = " << fmt_real(c.gamma_th) << "\n\n";
  out << "[scheduling]\n"
      << "k_total = " << c.scheduling.k_total << "\n"
      << "n_order = " << c.scheduling.n_order << "\n\n";
  out << "[uplink]\nmean_snr = " << fmt_real(c.scheduling.uplink_mean_snr) << "\n\n";
  out << "[downlink]\nmean_snr = " << fmt_real(c.scheduling.downlink_mean_snr) << "\n\n";
  for (const auto& [section, hop] : {std::pair{"sr_link", &c.sr_model}, std::pair{"rs_link", &c.rs_model}}) {
    out << "[" << section << "]\n"
        << "alpha = " << fmt_real(hop->alpha) << "\n"
        << "mu = " << fmt_real(hop->mu) << "\n"
        << "mean_snr = " << fmt_real(hop->mean_snr) << "\n\n";
  }
  out << "[modulation]\n"
      << "a = " << fmt_real(c.mod_a) << "\n"
      << "b = " << fmt_real(c.mod_b) << "\n\n";
  out << "[mc]\n";
  if (s.mc_trials_set) out << "trials = " << s.mc.trials << "\n";
  if (s.mc_seed_set) out << "seed = " << s.mc.seed << "\n";
  out << "workers = " << s.mc.workers << "\n"
      << "batch = " << s.mc.batch << "\n";
  return out.str();
}

}  // namespace relaylink
