#include "relaylink/gg_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "relaylink/specfun.hpp"

namespace relaylink {

namespace {

using specfun::ln_gamma;
using Vec2 = std::array<double, 2>;

struct MomentTargets {
  double log_ratio2;
  double log_ratio3;
};

MomentTargets targets_for(const GammaGammaParams& p) {
  const double m1 = std::log(gamma_gamma_moment(p, 1));
  const double m2 = std::log(gamma_gamma_moment(p, 2));
  const double m3 = std::log(gamma_gamma_moment(p, 3));
  return {m2 - 2.0 * m1, m3 - 3.0 * m1};
}

// ln of Gamma(mu + n/alpha) / Gamma(mu); the mu^{n/alpha} factors cancel in the ratios.
double log_shape_moment(double alpha, double mu, int n) {
  return ln_gamma(mu + n / alpha) - ln_gamma(mu);
}

Vec2 residual(const MomentTargets& t, double log_alpha, double log_mu) {
  const double alpha = std::exp(log_alpha);
  const double mu = std::exp(log_mu);
  const double g1 = log_shape_moment(alpha, mu, 1);
  const double g2 = log_shape_moment(alpha, mu, 2);
  const double g3 = log_shape_moment(alpha, mu, 3);
  return {g2 - 2.0 * g1 - t.log_ratio2, g3 - 3.0 * g1 - t.log_ratio3};
}

double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }

bool finite(const Vec2& v) { return std::isfinite(v[0]) && std::isfinite(v[1]); }

struct NewtonOutcome {
  double log_alpha;
  double log_mu;
  double res;
  int iterations;
};

NewtonOutcome damped_newton(const MomentTargets& t, double log_alpha, double log_mu,
                            int max_iterations) {
  Vec2 r = residual(t, log_alpha, log_mu);
  double rn = finite(r) ? norm(r) : std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < max_iterations && rn > 1e-14; ++it) {
    constexpr double h = 1e-6;
    const Vec2 ra_p = residual(t, log_alpha + h, log_mu);
    const Vec2 ra_m = residual(t, log_alpha - h, log_mu);
    const Vec2 rm_p = residual(t, log_alpha, log_mu + h);
    const Vec2 rm_m = residual(t, log_alpha, log_mu - h);
    const double j00 = (ra_p[0] - ra_m[0]) / (2 * h);
    const double j10 = (ra_p[1] - ra_m[1]) / (2 * h);
    const double j01 = (rm_p[0] - rm_m[0]) / (2 * h);
    const double j11 = (rm_p[1] - rm_m[1]) / (2 * h);
    const double det = j00 * j11 - j01 * j10;
    if (!std::isfinite(det) || det == 0.0) break;
    double da = -(j11 * r[0] - j01 * r[1]) / det;
    double dm = -(-j10 * r[0] + j00 * r[1]) / det;
    // Cap steps in log space so one iteration changes a parameter by at most e^2.
    const double cap = 2.0 / std::max({1.0, std::abs(da), std::abs(dm)});
    if (cap < 2.0) {
      da *= cap;
      dm *= cap;
    }

    double lambda = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving) {
      const Vec2 trial = residual(t, log_alpha + lambda * da, log_mu + lambda * dm);
      if (finite(trial) && norm(trial) < rn) {
        log_alpha += lambda * da;
        log_mu += lambda * dm;
        r = trial;
        rn = norm(trial);
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) break;
  }
  return {log_alpha, log_mu, rn, it};
}

FitResult finish(const GammaGammaParams& p, const NewtonOutcome& n, double tol, bool grid) {
  FitResult f;
  f.alpha = std::exp(n.log_alpha);
  f.mu = std::exp(n.log_mu);
  // First-moment equation solved for rho_bar.
  f.rho_bar = std::exp(ln_gamma(f.mu + 1.0 / f.alpha) - std::log(f.mu) / f.alpha -
                       ln_gamma(f.mu)) /
              gamma_gamma_moment(p, 1);
  f.residual_norm = moment_residual(p, f.alpha, f.mu, f.rho_bar);
  f.iterations = n.iterations;
  f.converged = std::isfinite(f.residual_norm) && f.residual_norm <= tol;
  f.used_grid_fallback = grid;
  return f;
}

}  // namespace

double moment_residual(const GammaGammaParams& p, double alpha, double mu, double rho_bar) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const double rel = alpha_mu_moment(alpha, mu, rho_bar, n) / gamma_gamma_moment(p, n) - 1.0;
    worst = std::max(worst, std::abs(rel));
  }
  return worst;
}

FitResult fit_alpha_mu(const GammaGammaParams& p, const FitOptions& opts) {
  validate(p);
  if (!(opts.alpha0 > 0.0) || !(opts.mu0 > 0.0)) domain_fail("fit: initial guess must be positive");
  const MomentTargets t = targets_for(p);

  const NewtonOutcome first =
      damped_newton(t, std::log(opts.alpha0), std::log(opts.mu0), opts.max_iterations);
  FitResult best = finish(p, first, opts.tolerance, false);
  if (best.converged) return best;

  // Grid fallback.
  double best_res = std::numeric_limits<double>::infinity();
  double seed_a = 0.0;
  double seed_m = 0.0;
  const double la0 = std::log(opts.grid_alpha_min);
  const double la1 = std::log(opts.grid_alpha_max);
  const double lm0 = std::log(opts.grid_mu_min);
  const double lm1 = std::log(opts.grid_mu_max);
  for (int i = 0; i < opts.grid_alpha_points; ++i) {
    const double la = la0 + (la1 - la0) * i / (opts.grid_alpha_points - 1);
    for (int j = 0; j < opts.grid_mu_points; ++j) {
      const double lm = lm0 + (lm1 - lm0) * j / (opts.grid_mu_points - 1);
      const Vec2 r = residual(t, la, lm);
      if (finite(r) && norm(r) < best_res) {
        best_res = norm(r);
        seed_a = la;
        seed_m = lm;
      }
    }
  }
  if (std::isfinite(best_res)) {
    NewtonOutcome polished = damped_newton(t, seed_a, seed_m, opts.max_iterations);
    polished.iterations += first.iterations;
    FitResult fallback = finish(p, polished, opts.tolerance, true);
    if (fallback.converged) return fallback;
    if (!(fallback.residual_norm >= best.residual_norm)) best = fallback;
  }
  throw FitNonConvergence("alpha-mu moment fit did not converge", best);
}

FitDiagnostics fit_diagnostics(const FitResult& fit, const GammaGammaParams& p, long draws,
                               RngStream& rng) {
  validate(p);
  if (draws < 1) domain_fail("fit_diagnostics: need at least one draw");
  std::vector<double> xs(static_cast<std::size_t>(draws));
  for (auto& x : xs) x = gamma_gamma_sample(p, rng);
  std::sort(xs.begin(), xs.end());

  const double n = static_cast<double>(draws);
  double ks = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = alpha_mu_envelope_cdf(fit.alpha, fit.mu, fit.envelope_scale(), xs[i]);
    ks = std::max({ks, f - i / n, (i + 1) / n - f});
  }
  FitDiagnostics d;
  d.ks_distance = ks;
  d.fourth_moment_rel_error =
      alpha_mu_moment(fit.alpha, fit.mu, fit.rho_bar, 4) / gamma_gamma_moment(p, 4) - 1.0;
  d.draws = draws;
  return d;
}

}  // namespace relaylink
