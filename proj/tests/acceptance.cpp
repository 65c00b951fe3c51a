#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "relaylink/channel_models.hpp"
#include "relaylink/commands.hpp"
#include "relaylink/gg_fit.hpp"
#include "relaylink/mc_sim.hpp"
#include "relaylink/perf_analysis.hpp"
#include "relaylink/scenario.hpp"
#include "relaylink/selection.hpp"
#include "relaylink/specfun.hpp"
#include "oracles.hpp"

using namespace relaylink;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SystemConfig scenario(const std::string& file) {
  return load_scenario(std::string(RELAYLINK_SCENARIO_DIR) + "/" + file).system;
}

SystemConfig with_order(SystemConfig c, int k, int n) {
  c.scheduling.k_total = k;
  c.scheduling.n_order = n;
  return c;
}

std::vector<double> db_grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (double x = lo; x <= hi + 1e-9; x += step) g.push_back(x);
  return g;
}

std::string label(const SystemConfig& c, const std::string& name) {
  std::ostringstream s;
  s << name << " K=" << c.scheduling.k_total << " N=" << c.scheduling.n_order;
  return s.str();
}

/// Common mean SNR in dB at which the outage equals `target`.
double snr_at_outage(const SystemConfig& c, double target) {
  auto f = [&](double db) {
    return std::log(total_outage(with_common_mean_snr(c, db_to_linear(db))).value / target);
  };
  double lo = -30.0, hi = 120.0;
  for (int i = 0; i < 200 && hi - lo > 1e-9; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Report {
  int failures = 0;
  void line(int id, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

void table_fit(Report& r) {
  struct Row {
    const char* name;
    GammaGammaParams p;
    double alpha, mu;
  };
  const Row rows[] = {{"very weak", {21.5, 19.8}, 2.34, 2.21},
                      {"weak (a)", {9.70, 8.2}, 1.68, 1.85},
                      {"weak (b)", {8.65, 7.14}, 2.00, 1.3695},
                      {"severe (a)", {4.0, 1.84}, 0.537, 2.022},
                      {"severe (b)", {4.34, 1.30}, 0.579, 2.723}};
  bool ok = true;
  std::ostringstream d;
  const auto t0 = Clock::now();
  std::vector<FitResult> fits;
  for (const Row& row : rows) fits.push_back(fit_alpha_mu(row.p));
  const double elapsed = seconds_since(t0);
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const FitResult& f = fits[i];
    const bool hit = std::abs(f.alpha - rows[i].alpha) <= 0.05 && std::abs(f.mu - rows[i].mu) <= 0.05 &&
                     f.residual_norm <= 1e-8;
    ok = ok && hit;
    char buf[200];
    std::snprintf(buf, sizeof buf, "\n    %-10s fit (%.4f, %.4f) table (%.4f, %.4f) residual %.1e %s", rows[i].name,
                  f.alpha, f.mu, rows[i].alpha, rows[i].mu, f.residual_norm, hit ? "ok" : "off");
    d << buf;
  }
  ok = ok && elapsed < 1.0;
  r.line(1, ok, "fit time " + std::to_string(elapsed) + " s" + d.str());
}

struct NamedConfig {
  std::string name;
  SystemConfig config;
};

std::vector<NamedConfig> outage_configs() {
  std::vector<NamedConfig> out;
  const std::pair<const char*, const char*> files[] = {{"nakagami", "fig3_nakagami.ini"},
                                                       {"exponential", "fig3_exponential.ini"},
                                                       {"rayleigh", "fig3_rayleigh.ini"},
                                                       {"very weak", "fig4_very_weak.ini"},
                                                       {"severe", "fig4_severe.ini"}};
  for (const auto& [name, file] : files) {
    for (int n : {1, 3}) {
      const SystemConfig c = with_order(scenario(file), 3, n);
      out.push_back({label(c, name), c});
    }
  }
  return out;
}

void outage_vs_mc(Report& r) {
  const long trials = 10'000'000;
  const std::vector<double> grid = db_grid(0.0, 40.0, 5.0);
  std::vector<double> scales;
  for (double db : grid) scales.push_back(db_to_linear(db));
  bool ok = true;
  std::ostringstream d;
  for (const NamedConfig& nc : outage_configs()) {
    McConfig m;
    m.trials = trials;
    const auto t0 = Clock::now();
    const ScaledEstimates est = simulate_scaled(with_common_mean_snr(nc.config, 1.0), m, scales);
    const double elapsed = seconds_since(t0);
    double worst = 0.0;
    int checked = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double exact = total_outage(with_common_mean_snr(nc.config, scales[i])).value;
      if (exact < 1e-5) continue;
      const double se = std::sqrt(exact * (1.0 - exact) / trials);
      worst = std::max(worst, std::abs(est.outage[i].value - exact) / se);
      ++checked;
    }
    const bool hit = worst <= 3.0;
    ok = ok && hit;
    char buf[200];
    std::snprintf(buf, sizeof buf, "\n    %-22s %d points, max |exact-mc|/stderr %.2f, %.1f s %s", nc.name.c_str(),
                  checked, worst, elapsed, hit ? "ok" : "off");
    d << buf;
  }
  r.line(2, ok, "1e7 trials per config, 0..40 dB" + d.str());
}

void exponential_closed_form(Report& r) {
  SystemConfig c;
  c.sr_model = {2.0, 1.0, 1.0};
  c.rs_model = {2.0, 1.0, 1.0};
  c.scheduling = {1, 1, 1.0, 1.0};
  c.gamma_th = 1.0;
  double worst = 0.0;
  for (double db : db_grid(0.0, 60.0, 1.0)) {
    const double mean = db_to_linear(db);
    const double exact = total_outage(with_common_mean_snr(c, mean)).value;
    const double closed = -std::expm1(-4.0 * c.gamma_th / mean);
    worst = std::max(worst, std::abs(exact - closed) / closed);
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "max relative error %.2e over 0..60 dB", worst);
  r.line(3, worst <= 1e-14, buf);
}

void asep_vs_mc(Report& r) {
  std::vector<NamedConfig> configs;
  for (const char* file : {"fig5_nakagami.ini", "fig5_rayleigh.ini", "fig5_one_sided_gaussian.ini"}) {
    for (int k : {1, 10}) {
      const SystemConfig c = with_order(scenario(file), k, 1);
      configs.push_back({label(c, file), c});
    }
  }
  for (const char* file : {"fig7_very_weak.ini", "fig7_weak.ini"}) {
    for (int k : {1, 5}) {
      const SystemConfig c = with_order(scenario(file), k, 1);
      configs.push_back({label(c, file), c});
    }
  }
  const long trials = 10'000'000;
  const std::vector<double> grid = db_grid(0.0, 40.0, 5.0);
  std::vector<double> scales;
  for (double db : grid) scales.push_back(db_to_linear(db));
  bool ok = true;
  std::ostringstream d;
  for (const NamedConfig& nc : configs) {
    McConfig m;
    m.trials = trials;
    const ScaledEstimates est = simulate_scaled(with_common_mean_snr(nc.config, 1.0), m, scales);
    double worst = 0.0;
    double worst_sigma = 0.0;
    double noise = 0.0;
    int checked = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double q = asep(with_common_mean_snr(nc.config, scales[i])).value;
      if (q < 1e-5) continue;
      worst = std::max(worst, std::abs(est.asep[i].value / q - 1.0));
      worst_sigma = std::max(worst_sigma, std::abs(est.asep[i].value - q) / est.asep[i].std_error);
      noise = std::max(noise, est.asep[i].std_error / q);
      ++checked;
    }
    const bool hit = worst <= 0.02;
    ok = ok && hit;
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "\n    %-38s %d points, max relative gap %.4f (%.2f stderr; mc relative stderr up to %.4f) %s",
                  nc.name.c_str(), checked, worst, worst_sigma, noise, hit ? "ok" : "off");
    d << buf;
  }

  SystemConfig e;
  e.sr_model = {2.0, 1.0, 40.0};
  e.rs_model = {2.0, 1.0, 40.0};
  e.scheduling = {1, 1, 40.0, 40.0};
  McConfig m;
  m.trials = trials;
  const PerfEstimate mc = simulate_asep(e, m);
  const bool oracle_hit = std::abs(mc.value - 0.023277) <= 3.0 * mc.std_error;
  ok = ok && oracle_hit;
  char buf[200];
  std::snprintf(buf, sizeof buf, "\n    all-exponential mean 40: mc %.6f +- %.1e vs 0.023277, quadrature %.7f %s", mc.value,
                mc.std_error, asep(e).value, oracle_hit ? "ok" : "off");
  d << buf;
  r.line(4, ok, "1e7 trials per config, 0..40 dB" + d.str());
}

void diversity_slopes(Report& r) {
  bool ok = true;
  std::ostringstream d;
  for (const NamedConfig& nc : outage_configs()) {
    const double p50 = total_outage(with_common_mean_snr(nc.config, db_to_linear(50.0))).value;
    const double p60 = total_outage(with_common_mean_snr(nc.config, db_to_linear(60.0))).value;
    const double slope = std::log10(p50 / p60);
    const AsymptoticReport rep = classify_asymptotics(nc.config);
    const bool hit = std::abs(slope / rep.diversity_order - 1.0) <= 0.05;
    ok = ok && hit;
    std::string dom;
    for (Term t : rep.dominant) dom += std::string(dom.empty() ? "" : ",") + std::string(to_string(t));
    char buf[200];
    std::snprintf(buf, sizeof buf, "\n    %-22s slope %.4f expected %.4f dominant {%s} %s", nc.name.c_str(), slope,
                  rep.diversity_order, dom.c_str(), hit ? "ok" : "off");
    d << buf;
  }
  r.line(5, ok, "log-log slope over 50..60 dB" + d.str());
}

void figure_checks(Report& r) {
  const SystemConfig nak = scenario("fig3_nakagami.ini");
  const double nak_gap = snr_at_outage(with_order(nak, 3, 3), 1e-3) - snr_at_outage(with_order(nak, 3, 1), 1e-3);
  const SystemConfig sev = scenario("fig4_severe.ini");
  const double sev_gap = snr_at_outage(with_order(sev, 3, 3), 1e-3) - snr_at_outage(with_order(sev, 3, 1), 1e-3);
  const bool nak_ok = std::abs(nak_gap - 5.0) <= 1.5;
  const bool sev_ok = std::abs(sev_gap - 2.0) <= 1.0;

  bool k_ok = true;
  std::ostringstream kd;
  for (const char* file : {"fig4_very_weak.ini", "fig4_severe.ini"}) {
    const SystemConfig c = scenario(file);
    const double at5 = snr_at_outage(with_order(c, 5, 1), 1e-3);
    double beyond = 0.0;
    for (int k = 6; k <= 10; ++k) beyond = std::max(beyond, at5 - snr_at_outage(with_order(c, k, 1), 1e-3));
    const bool hit = beyond < 0.2;
    k_ok = k_ok && hit;
    char buf[160];
    std::snprintf(buf, sizeof buf, "\n    %-20s gain from K=5 to K<=10 %.4f dB %s", file, beyond, hit ? "ok" : "off");
    kd << buf;
  }
  char buf[300];
  std::snprintf(buf, sizeof buf,
                "SNR at outage 1e-3\n    nakagami K=3 N 1->3 gap %.3f dB (target 5 +- 1.5) %s"
                "\n    severe   K=3 N 1->3 gap %.3f dB (target 2 +- 1) %s",
                nak_gap, nak_ok ? "ok" : "off", sev_gap, sev_ok ? "ok" : "off");
  r.line(6, nak_ok && sev_ok && k_ok, buf + kd.str());
}

void identities(Report& r) {
  double kernel_worst = 0.0;
  int points = 0;
  for (double mu : {0.5, 1.37, 2.21, 4.0, 7.5}) {
    for (double z : {0.05, 0.6, 1.9, 4.2}) {
      // The kernel is Gamma(mu) P(mu, z); compare on the CDF scale.
      const double norm = std::exp(specfun::ln_gamma(mu));
      const double cdf = specfun::meijer_g_cdf_kernel(z, mu) / norm;
      const double contour = oracle::meijer_g_mellin_barnes(z, mu, std::min(0.5, 0.5 * mu)) / norm;
      kernel_worst = std::max(kernel_worst, std::abs(cdf - contour));
      kernel_worst = std::max(kernel_worst, std::abs(cdf - specfun::reg_lower_inc_gamma(mu, z)));
      ++points;
    }
  }
  double sum_worst = 0.0;
  double nth_worst = 0.0;
  for (int k = 1; k <= 12; ++k) {
    for (double g : {0.01, 0.2, 0.9, 2.5, 7.0, 20.0}) {
      const SchedulingSpec s{k, 1, 1.7, 1.7};
      const double product = best_select_cdf(s, g);
      sum_worst = std::max(sum_worst, std::abs(product - best_select_cdf_binomial_sum(s, g)));
      nth_worst = std::max(nth_worst, std::abs(nth_best_cdf(s, g) - best_select_cdf_binomial_sum(s, g)));
    }
  }
  const bool ok = points == 20 && kernel_worst <= 1e-6 && sum_worst <= 1e-12 && nth_worst <= 1e-12;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "kernel CDF vs contour integral at %d points %.1e, product vs sum %.1e, N=1 order statistic vs sum %.1e",
                points, kernel_worst, sum_worst, nth_worst);
  r.line(7, ok, buf);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void determinism(Report& r) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "relaylink_acceptance";
  std::filesystem::create_directories(dir);
  const std::string file = std::string(RELAYLINK_SCENARIO_DIR) + "/fig4_severe.ini";
  auto run = [&](int workers, const std::string& tag) {
    const std::filesystem::path out = dir / ("outage_" + tag + ".csv");
    std::ostringstream o, e;
    const int code = cli::run({"outage", file, "--sweep-snr", "0:30:5", "--mc", "400000", "--seed", "2019",
                               "--workers", std::to_string(workers), "--out", out.string()},
                              o, e);
    return code == cli::kOk ? slurp(out) : std::string();
  };
  const std::string first = run(4, "a");
  const std::string again = run(4, "b");
  bool ok = !first.empty() && first == again;
  std::ostringstream d;
  d << "repeat run " << (first == again ? "identical" : "differs");
  for (int w : {1, 2, 4, 8}) {
    const bool same = run(w, "w" + std::to_string(w)) == first;
    ok = ok && same;
    d << ", workers " << w << (same ? " identical" : " differs");
  }
  std::filesystem::remove_all(dir);
  r.line(8, ok, d.str());
}

}  // namespace

int main() {
  Report r;
  const auto t0 = Clock::now();
  table_fit(r);
  outage_vs_mc(r);
  exponential_closed_form(r);
  asep_vs_mc(r);
  diversity_slopes(r);
  figure_checks(r);
  identities(r);
  determinism(r);
  std::printf("%d of 8 criteria passed in %.0f s\n", 8 - r.failures, seconds_since(t0));
  return r.failures == 0 ? 0 : 1;
}
