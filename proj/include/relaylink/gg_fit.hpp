#pragma once

#include <string>

#include "relaylink/channel_models.hpp"
#include "relaylink/errors.hpp"
#include "relaylink/rng.hpp"

namespace relaylink {

/// alpha-mu parameters matched to the first three Gamma-Gamma moments.
/// rho_bar follows the moment form E[X^n] = rho_bar^{-n} Gamma(mu + n/alpha) /
/// (mu^{n/alpha} Gamma(mu)), so the envelope scale is 1 / rho_bar.
struct FitResult {
  double alpha = 0.0;
  double mu = 0.0;
  double rho_bar = 0.0;
  double residual_norm = 0.0;  ///< max relative error over the three moment equations
  int iterations = 0;
  bool converged = false;
  bool used_grid_fallback = false;

  double envelope_scale() const { return 1.0 / rho_bar; }
};

struct FitOptions {
  double alpha0 = 2.0;
  double mu0 = 1.5;
  double tolerance = 1e-8;
  int max_iterations = 200;
  /// Fallback grid, log-spaced.
  double grid_alpha_min = 0.05;
  double grid_alpha_max = 10.0;
  double grid_mu_min = 0.05;
  double grid_mu_max = 200.0;
  int grid_alpha_points = 120;
  int grid_mu_points = 160;
};

/// Thrown when neither Newton nor the grid fallback reaches the tolerance.
class FitNonConvergence : public NonConvergence {
 public:
  FitNonConvergence(const std::string& what, FitResult best)
      : NonConvergence(what), best_(best) {}
  const FitResult& best() const { return best_; }

 private:
  FitResult best_;
};

/// Moment-matching fit of alpha-mu to Gamma-Gamma(eta, beta).
///
/// rho_bar is eliminated through the first moment, leaving the scale-free
/// ratios E[X^2]/E[X]^2 and E[X^3]/E[X]^3 to be matched in (alpha, mu). The
/// 2-D system is solved by damped Newton in (ln alpha, ln mu) with a central
/// difference Jacobian, halving the step until the residual drops. If that
/// stalls, a log-spaced grid search seeds a second Newton polish.
FitResult fit_alpha_mu(const GammaGammaParams& p, const FitOptions& opts = {});

/// Max relative error of the three moment equations at (alpha, mu, rho_bar).
double moment_residual(const GammaGammaParams& p, double alpha, double mu, double rho_bar);

struct FitDiagnostics {
  double ks_distance = 0.0;
  double fourth_moment_rel_error = 0.0;
  long draws = 0;
};

/// Kolmogorov-Smirnov distance between `draws` Gamma-Gamma samples and the
/// fitted alpha-mu envelope CDF, plus the relative error of the 4th moment.
FitDiagnostics fit_diagnostics(const FitResult& fit, const GammaGammaParams& p, long draws,
                               RngStream& rng);

}  // namespace relaylink
