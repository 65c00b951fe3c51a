#include "relaylink/perf_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "relaylink/errors.hpp"

namespace relaylink {

using specfun::QuadratureKind;
using specfun::QuadratureRule;

namespace {

constexpr double kAsepTolerance = 1e-10;
constexpr double kCrossCheckTolerance = 1e-6;
// e^{-u^2} < 5e-18 beyond this point.
const double kAsepUpper = std::sqrt(40.0);
constexpr int kAsepPanels = 16;

double union_of(double p, double q) { return p + q - p * q; }

bool is_even_integer(double v) {
  const double r = std::round(v);
  return std::abs(v - r) <= 1e-12 * std::max(1.0, std::abs(v)) &&
         static_cast<long long>(r) % 2 == 0;
}

}  // namespace

double end_to_end_cdf(const SystemConfig& c, double gamma) {
  validate(c);
  if (!(gamma >= 0.0)) domain_fail("end_to_end_cdf: SNR must be nonnegative");
  const double st1 = union_of(nth_best_cdf(c.scheduling, gamma), alpha_mu_snr_cdf(c.sr_model, gamma));
  const double st2 = union_of(downlink_cdf(c.scheduling, gamma), alpha_mu_snr_cdf(c.rs_model, gamma));
  return union_of(st1, st2);
}

double phase1_outage(const SystemConfig& c) {
  validate(c);
  return union_of(nth_best_cdf(c.scheduling, c.gamma_th), alpha_mu_snr_cdf(c.sr_model, c.gamma_th));
}

double phase2_outage(const SystemConfig& c) {
  validate(c);
  return union_of(downlink_cdf(c.scheduling, c.gamma_th), alpha_mu_snr_cdf(c.rs_model, c.gamma_th));
}

PerfEstimate total_outage(const SystemConfig& c) {
  const double st1 = phase1_outage(c);
  const double st2 = phase2_outage(c);
  return {std::clamp(union_of(st1, st2), 0.0, 1.0), Method::exact};
}

double total_outage_expanded(const SystemConfig& c) {
  validate(c);
  const SchedulingSpec& s = c.scheduling;
  const double g = c.gamma_th;

  const double selected = nth_best_cdf_alternating(s, g);
  auto kernel_cdf = [g](const AlphaMuParams& p) {
    const double z = p.mu * std::pow(g / p.mean_snr, 0.5 * p.alpha);
    return specfun::meijer_g_cdf_kernel(z, p.mu) / std::exp(specfun::ln_gamma(p.mu));
  };
  const double g_sr = kernel_cdf(c.sr_model);
  const double g_rs = kernel_cdf(c.rs_model);
  const double survive_down = std::exp(-g / s.downlink_mean_snr);

  const double st1 = selected * (1.0 - g_sr) + g_sr;
  const double st2 = 1.0 - survive_down * (1.0 - g_rs);
  return st1 + st2 * (1.0 - selected) * (1.0 - g_sr);
}

bool hermite_friendly(const SystemConfig& c) {
  for (const AlphaMuParams* p : {&c.sr_model, &c.rs_model}) {
    if (!is_even_integer(p->alpha) || !is_even_integer(p->alpha * p->mu)) return false;
  }
  return true;
}

double asep_hermite(const SystemConfig& c, const QuadratureRule& rule) {
  validate(c);
  if (rule.kind != QuadratureKind::hermite || rule.nodes.size() != rule.weights.size() ||
      rule.nodes.empty()) {
    domain_fail("asep_hermite: needs a non-empty Hermite rule");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    if (rule.weights[i] == 0.0) continue;
    const double u = rule.nodes[i];
    sum += rule.weights[i] * end_to_end_cdf(c, u * u / c.mod_b);
  }
  return c.mod_a / (2.0 * std::sqrt(std::numbers::pi)) * sum;
}

double asep_adaptive(const SystemConfig& c) {
  validate(c);
  const double scale = c.mod_a / std::sqrt(std::numbers::pi);
  auto integrand = [&c](double u) { return std::exp(-u * u) * end_to_end_cdf(c, u * u / c.mod_b); };
  const double panel_tol = kAsepTolerance / scale / kAsepPanels;
  double total = 0.0;
  for (int i = 0; i < kAsepPanels; ++i) {
    const double lo = kAsepUpper * i / kAsepPanels;
    const double hi = kAsepUpper * (i + 1) / kAsepPanels;
    const auto r = specfun::adaptive_simpson(integrand, lo, hi, panel_tol);
    if (!r.converged) throw QuadratureFailure("asep: adaptive Simpson hit its depth limit");
    total += r.value;
  }
  return scale * total;
}

PerfEstimate asep(const SystemConfig& c, const QuadratureRule& rule) {
  const double adaptive = asep_adaptive(c);
  if (rule.kind == QuadratureKind::adaptive) {
    return {std::clamp(adaptive, 0.0, 0.5 * c.mod_a), Method::quadrature};
  }
  const double hermite = asep_hermite(c, rule);
  if (std::abs(hermite - adaptive) > kCrossCheckTolerance) {
    std::ostringstream msg;
    msg << "asep: Hermite (" << hermite << ") and adaptive (" << adaptive
        << ") quadrature disagree";
    throw QuadratureFailure(msg.str());
  }
  return {std::clamp(hermite, 0.0, 0.5 * c.mod_a), Method::quadrature};
}

PerfEstimate asep(const SystemConfig& c) { return asep(c, QuadratureRule::adaptive()); }

namespace {

void require_asymptotic_preconditions(const SystemConfig& c) {
  validate(c);
  if (!has_common_mean_snr(c)) domain_fail("asymptotics need one common mean SNR on all links");
  if (c.sr_model.alpha != c.rs_model.alpha || c.sr_model.mu != c.rs_model.mu) {
    domain_fail("asymptotics need identical alpha-mu parameters on S->R and R->S");
  }
}

// Multipliers of (gamma_th / mean)^order for the three terms.
double uplink_coefficient(const SchedulingSpec& s) {
  const int d = s.k_total - s.n_order + 1;
  return binomial(s.k_total - 1, s.n_order - 1) * s.k_total / d;
}

// Both alpha-mu hops: 2 * mu^mu / (mu Gamma(mu)), the leading term of
// P(mu, mu x^{alpha/2}) counted twice.
double alpha_mu_coefficient(const AlphaMuParams& p) {
  return 2.0 * std::exp((p.mu - 1.0) * std::log(p.mu) - specfun::ln_gamma(p.mu));
}

}  // namespace

PerfEstimate asymptotic_outage(const SystemConfig& c) {
  require_asymptotic_preconditions(c);
  const double x = c.gamma_th / c.scheduling.uplink_mean_snr;
  const double d1 = c.scheduling.k_total - c.scheduling.n_order + 1;
  const double d2 = 0.5 * c.sr_model.alpha * c.sr_model.mu;
  const double value = uplink_coefficient(c.scheduling) * std::pow(x, d1) +
                       alpha_mu_coefficient(c.sr_model) * std::pow(x, d2) + x;
  return {std::min(value, 1.0), Method::asymptotic};
}

std::string_view to_string(Term t) {
  switch (t) {
    case Term::T1: return "T1";
    case Term::T2: return "T2";
    case Term::T3: return "T3";
  }
  return "?";
}

AsymptoticReport classify_asymptotics(const SystemConfig& c) {
  require_asymptotic_preconditions(c);
  AsymptoticReport r;
  r.term_order[Term::T1] = c.scheduling.k_total - c.scheduling.n_order + 1;
  r.term_order[Term::T2] = 0.5 * c.sr_model.alpha * c.sr_model.mu;
  r.term_order[Term::T3] = 1.0;
  r.coefficient[Term::T1] = uplink_coefficient(c.scheduling);
  r.coefficient[Term::T2] = alpha_mu_coefficient(c.sr_model);
  r.coefficient[Term::T3] = 1.0;

  r.diversity_order = std::min({r.term_order[Term::T1], r.term_order[Term::T2], 1.0});
  for (const auto& [term, order] : r.term_order) {
    // coefficient * x^d == (upsilon / x)^{-d}  =>  upsilon = coefficient^{-1/d}
    const double upsilon = std::pow(r.coefficient[term], -1.0 / order);
    r.coding_gain[term] = upsilon / c.gamma_th;
    if (std::abs(order - r.diversity_order) <= 1e-9 * r.diversity_order) r.dominant.insert(term);
  }
  return r;
}

std::vector<SweepRow> sweep(const SystemConfig& c, SweepVariable variable,
                            const std::vector<double>& grid, const std::optional<McConfig>& mc) {
  validate(c);
  std::vector<SystemConfig> configs;
  configs.reserve(grid.size());
  for (double x : grid) {
    SystemConfig p = c;
    switch (variable) {
      case SweepVariable::mean_snr_db: p = with_common_mean_snr(c, db_to_linear(x)); break;
      case SweepVariable::k_total: p.scheduling.k_total = static_cast<int>(std::lround(x)); break;
      case SweepVariable::n_order: p.scheduling.n_order = static_cast<int>(std::lround(x)); break;
      case SweepVariable::gamma_th: p.gamma_th = x; break;
    }
    validate(p);
    configs.push_back(p);
  }

  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SweepRow row;
    row.x = grid[i];
    row.exact = total_outage(configs[i]);
    const SystemConfig& p = configs[i];
    if (has_common_mean_snr(p) && p.sr_model.alpha == p.rs_model.alpha &&
        p.sr_model.mu == p.rs_model.mu) {
      row.asymptotic = asymptotic_outage(p);
    }
    rows.push_back(row);
  }

  if (mc && !grid.empty()) {
    if (variable == SweepVariable::mean_snr_db) {
      std::vector<double> scales;
      scales.reserve(grid.size());
      for (double x : grid) scales.push_back(db_to_linear(x));
      const ScaledEstimates est = simulate_scaled(with_common_mean_snr(c, 1.0), *mc, scales);
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i].monte_carlo = est.outage[i];
    } else {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].monte_carlo = simulate_outage(configs[i], *mc);
      }
    }
  }
  return rows;
}

}  // namespace relaylink
