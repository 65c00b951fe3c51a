#include "relaylink/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "relaylink/gg_fit.hpp"
#include "relaylink/perf_analysis.hpp"
#include "relaylink/scenario.hpp"

namespace relaylink::cli {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string axis(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes to --out when given, otherwise to `fallback`.
class CsvSink {
 public:
  CsvSink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) *stream_ << ',';
      *stream_ << cells[i];
    }
    *stream_ << '\n';
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

struct SweepOptions {
  std::string scenario;
  std::string sweep;
  long mc_trials = 0;
  std::string out;
  std::string seed;
  int workers = 0;
  bool progress = false;
};

struct Prepared {
  Scenario scenario;
  std::optional<McConfig> mc;
  std::vector<double> snr_db;
  bool swept = false;
};

Prepared prepare(const SweepOptions& o, std::ostream& err) {
  Prepared p;
  p.scenario = load_scenario(o.scenario);
  if (!o.sweep.empty()) {
    p.snr_db = parse_range(o.sweep);
    p.swept = true;
  }
  if (o.mc_trials > 0 || p.scenario.mc_trials_set) {
    McConfig m = p.scenario.mc;
    if (o.mc_trials > 0) m.trials = o.mc_trials;
    if (o.workers > 0) m.workers = o.workers;
    m.seed = resolve_seed(o.seed, p.scenario.mc_seed_set, p.scenario.mc.seed);
    if (o.progress) {
      m.progress = [&err](long done, long total) {
        err << "mc: " << done << "/" << total << " trials\n";
      };
    }
    validate(m);
    p.mc = m;
  }
  return p;
}

// Rows evaluated either along the sweep or once at the scenario's own SNRs.
std::vector<SystemConfig> sweep_configs(const Prepared& p) {
  std::vector<SystemConfig> out;
  if (!p.swept) {
    out.push_back(p.scenario.system);
    return out;
  }
  for (double db : p.snr_db) out.push_back(with_common_mean_snr(p.scenario.system, db_to_linear(db)));
  return out;
}

std::string snr_label(const Prepared& p, std::size_t i) {
  if (p.swept) return axis(p.snr_db[i]);
  const SystemConfig& c = p.scenario.system;
  return has_common_mean_snr(c) ? axis(linear_to_db(c.scheduling.uplink_mean_snr)) : "";
}

ScaledEstimates run_mc(const Prepared& p) {
  if (p.swept) {
    std::vector<double> scales;
    for (double db : p.snr_db) scales.push_back(db_to_linear(db));
    if (scales.empty()) return {};
    return simulate_scaled(with_common_mean_snr(p.scenario.system, 1.0), *p.mc, scales);
  }
  return simulate_scaled(p.scenario.system, *p.mc, {1.0});
}

int cmd_outage(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  const Prepared p = prepare(o, err);
  const std::vector<SystemConfig> configs = sweep_configs(p);
  CsvSink csv(o.out, out);
  csv.row({"snr_db", "outage_exact", "outage_asymptotic", "outage_mc", "mc_stderr"});

  ScaledEstimates mc;
  if (p.mc) mc = run_mc(p);

  bool tripped = false;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const SystemConfig& c = configs[i];
    const double exact = total_outage(c).value;
    std::string asym;
    if (has_common_mean_snr(c) && c.sr_model.alpha == c.rs_model.alpha && c.sr_model.mu == c.rs_model.mu) {
      asym = num(asymptotic_outage(c).value);
    }
    std::string mc_val, mc_se;
    if (p.mc) {
      const PerfEstimate& e = mc.outage[i];
      mc_val = num(e.value);
      mc_se = num(e.std_error);
      const double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(e.trials));
      if (sigma > 0.0 && std::abs(e.value - exact) > 5.0 * sigma) {
        err << "self-check: outage MC " << e.value << " vs exact " << exact << " at row " << i
            << " exceeds 5 sigma\n";
        tripped = true;
      }
    }
    csv.row({snr_label(p, i), num(exact), asym, mc_val, mc_se});
  }
  return tripped ? kSelfCheck : kOk;
}

int cmd_asep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  const Prepared p = prepare(o, err);
  const std::vector<SystemConfig> configs = sweep_configs(p);
  CsvSink csv(o.out, out);
  csv.row({"snr_db", "asep_quadrature", "asep_mc", "mc_stderr"});

  ScaledEstimates mc;
  if (p.mc) mc = run_mc(p);

  bool tripped = false;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const double quad = asep(configs[i]).value;
    std::string mc_val, mc_se;
    if (p.mc) {
      const PerfEstimate& e = mc.asep[i];
      mc_val = num(e.value);
      mc_se = num(e.std_error);
      if (e.std_error > 0.0 && std::abs(e.value - quad) > 5.0 * e.std_error) {
        err << "self-check: ASEP MC " << e.value << " vs quadrature " << quad << " at row " << i
            << " exceeds 5 sigma\n";
        tripped = true;
      }
    }
    csv.row({snr_label(p, i), num(quad), mc_val, mc_se});
  }
  return tripped ? kSelfCheck : kOk;
}

struct KSweepOptions {
  std::vector<std::string> scenarios;
  std::string k_range = "1..10";
  std::string out;
  double snr_db = NAN;
  bool n_equals_k = false;
};

int cmd_ksweep(const KSweepOptions& o, std::ostream& out) {
  std::vector<Scenario> scenarios;
  for (const auto& path : o.scenarios) scenarios.push_back(load_scenario(path));
  const std::vector<int> ks = parse_int_range(o.k_range);

  CsvSink csv(o.out, out);
  std::vector<std::string> header{"K"};
  for (const auto& s : scenarios) header.push_back("outage_exact_" + s.name);
  csv.row(header);

  for (int k : ks) {
    std::vector<std::string> row{std::to_string(k)};
    for (const auto& s : scenarios) {
      SystemConfig c = s.system;
      if (!std::isnan(o.snr_db)) c = with_common_mean_snr(c, db_to_linear(o.snr_db));
      c.scheduling.k_total = k;
      if (o.n_equals_k) c.scheduling.n_order = k;
      row.push_back(c.scheduling.n_order <= k ? num(total_outage(c).value) : "");
    }
    csv.row(row);
  }
  return kOk;
}

struct FitOptionsCli {
  double eta = 0.0;
  double beta = 0.0;
  bool json = false;
  long draws = 1'000'000;
  std::string seed;
};

int cmd_fit(const FitOptionsCli& o, std::ostream& out, std::ostream& err) {
  const GammaGammaParams gg{o.eta, o.beta};
  FitResult fit;
  bool converged = true;
  try {
    fit = fit_alpha_mu(gg);
  } catch (const FitNonConvergence& e) {
    fit = e.best();
    converged = false;
    err << "fit: " << e.what() << "\n";
  }

  std::optional<FitDiagnostics> diag;
  if (converged && o.draws > 0) {
    RngStream rng = rng_stream(resolve_seed(o.seed, false, 0), 0);
    diag = fit_diagnostics(fit, gg, o.draws, rng);
  }

  if (o.json) {
    nlohmann::json j{{"eta", o.eta},          {"beta", o.beta},
                     {"alpha", fit.alpha},    {"mu", fit.mu},
                     {"rho_bar", fit.rho_bar}, {"residual", fit.residual_norm},
                     {"iterations", fit.iterations}, {"converged", converged}};
    if (diag) {
      j["ks_distance"] = diag->ks_distance;
      j["fourth_moment_rel_error"] = diag->fourth_moment_rel_error;
      j["draws"] = diag->draws;
    }
    out << j.dump(2) << "\n";
  } else {
    char line[512];
    std::snprintf(line, sizeof line, "%-8s %-8s %-10s %-10s %-12s %-10s %-10s %-10s\n", "eta",
                  "beta", "alpha", "mu", "rho_bar", "residual", "ks", "m4_relerr");
    out << line;
    std::snprintf(line, sizeof line, "%-8.4g %-8.4g %-10.6g %-10.6g %-12.6g %-10.3g %-10s %-10s\n",
                  o.eta, o.beta, fit.alpha, fit.mu, fit.rho_bar, fit.residual_norm,
                  diag ? axis(diag->ks_distance).c_str() : "-",
                  diag ? axis(diag->fourth_moment_rel_error).c_str() : "-");
    out << line;
  }
  return converged ? kOk : kNonConvergence;
}

void add_sweep_options(CLI::App* cmd, SweepOptions& o) {
  cmd->add_option("scenario", o.scenario, "Scenario file")->required();
  cmd->add_option("--sweep-snr", o.sweep, "Common mean SNR sweep start:stop:step in dB");
  cmd->add_option("--mc", o.mc_trials, "Monte-Carlo trials (adds MC columns)");
  cmd->add_option("--out", o.out, "CSV output path (default: stdout)");
  cmd->add_option("--seed", o.seed, "RNG seed (overrides RELAYLINK_SEED and the scenario)");
  cmd->add_option("--workers", o.workers, "Monte-Carlo worker threads");
  cmd->add_flag("--progress", o.progress, "Report Monte-Carlo progress on stderr");
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw UsageError("bad range '" + text + "'");
    parts.push_back(v);
  }
  if (parts.size() != 3) throw UsageError("range must be start:stop:step, got '" + text + "'");
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0)) throw UsageError("range step must be positive");
  std::vector<double> out;
  for (long i = 0;; ++i) {
    const double v = start + i * step;
    if (v > stop + 1e-9 * step) break;
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_int_range(const std::string& text) {
  std::string a, b;
  if (auto pos = text.find(".."); pos != std::string::npos) {
    a = text.substr(0, pos);
    b = text.substr(pos + 2);
  } else if (auto colon = text.find(':'); colon != std::string::npos) {
    a = text.substr(0, colon);
    b = text.substr(colon + 1);
  } else {
    a = b = text;
  }
  char* end_a = nullptr;
  char* end_b = nullptr;
  const long lo = std::strtol(a.c_str(), &end_a, 10);
  const long hi = std::strtol(b.c_str(), &end_b, 10);
  if (a.empty() || b.empty() || *end_a != '\0' || *end_b != '\0' || lo < 1 || hi < lo) {
    throw UsageError("bad integer range '" + text + "'");
  }
  std::vector<int> out;
  for (long k = lo; k <= hi; ++k) out.push_back(static_cast<int>(k));
  return out;
}

unsigned long long resolve_seed(const std::string& flag_value, bool scenario_has_seed,
                                unsigned long long scenario_seed) {
  auto parse = [](const std::string& s, const char* what) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 0);
    if (s.empty() || s[0] == '-' || *end != '\0') throw UsageError(std::string("bad seed from ") + what);
    return v;
  };
  if (!flag_value.empty()) return parse(flag_value, "--seed");
  if (const char* env = std::getenv("RELAYLINK_SEED"); env && *env) return parse(env, "RELAYLINK_SEED");
  if (scenario_has_seed) return scenario_seed;
  return kDefaultSeed;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-way relay performance analysis over alpha-mu / Gamma-Gamma links", "relaylink"};
  app.require_subcommand(1);

  FitOptionsCli fit_opts;
  auto* fit = app.add_subcommand("fit", "Fit alpha-mu to Gamma-Gamma turbulence by moment matching");
  fit->add_option("--eta", fit_opts.eta, "Gamma-Gamma eta")->required()->check(CLI::PositiveNumber);
  fit->add_option("--beta", fit_opts.beta, "Gamma-Gamma beta")->required()->check(CLI::PositiveNumber);
  fit->add_flag("--json", fit_opts.json, "Print JSON");
  fit->add_option("--draws", fit_opts.draws, "Samples for the KS diagnostic (0 disables)");
  fit->add_option("--seed", fit_opts.seed, "RNG seed for the diagnostic");

  SweepOptions outage_opts;
  auto* outage = app.add_subcommand("outage", "Exact, asymptotic and Monte-Carlo outage as CSV");
  add_sweep_options(outage, outage_opts);

  SweepOptions asep_opts;
  auto* asep_cmd = app.add_subcommand("asep", "Average symbol error probability as CSV");
  add_sweep_options(asep_cmd, asep_opts);

  KSweepOptions k_opts;
  auto* ksweep = app.add_subcommand("ksweep", "Outage versus number of nodes K");
  ksweep->add_option("scenarios", k_opts.scenarios, "Scenario files, one CSV column each")->required();
  ksweep->add_option("--k", k_opts.k_range, "K range, e.g. 1..10");
  ksweep->add_option("--out", k_opts.out, "CSV output path (default: stdout)");
  ksweep->add_option("--snr-db", k_opts.snr_db, "Override every mean SNR (dB)");
  ksweep->add_flag("--n-equals-k", k_opts.n_equals_k, "Select the worst node (N = K)");

  std::vector<std::string> argv_store{"relaylink"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (fit->parsed()) return cmd_fit(fit_opts, out, err);
    if (outage->parsed()) return cmd_outage(outage_opts, out, err);
    if (asep_cmd->parsed()) return cmd_asep(asep_opts, out, err);
    if (ksweep->parsed()) return cmd_ksweep(k_opts, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ScenarioError& e) {
    err << "scenario error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NonConvergence& e) {
    err << "solver error: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const QuadratureFailure& e) {
    err << "quadrature error: " << e.what() << "\n";
    return kSelfCheck;
  }
  return kUsage;
}

}  // namespace relaylink::cli
