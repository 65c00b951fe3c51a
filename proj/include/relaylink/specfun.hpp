#pragma once

#include <functional>
#include <vector>

namespace relaylink::specfun {

/// Natural log of the complete gamma function, x > 0.
double ln_gamma(double x);

/// Regularized lower incomplete gamma P(a, x) = gamma_inc(a, x) / Gamma(a).
///
/// Power series below x = a + 1, modified-Lentz continued fraction for the
/// complement above it. Throws std::domain_error for a <= 0 or x < 0.
double reg_lower_inc_gamma(double a, double x);

/// Complement Q(a, x) = 1 - P(a, x), computed directly so that upper tails
/// keep their relative precision.
double reg_upper_inc_gamma(double a, double x);

/// Solves P(a, x) = p for x. Halley/Newton steps kept inside a bisection
/// bracket; throws NonConvergence after 200 iterations.
double inv_reg_lower_inc_gamma(double a, double p);

/// G^{1,1}_{1,2}[z | 1; mu, 0], which reduces to the unregularized lower
/// incomplete gamma gamma_inc(mu, z).
double meijer_g_cdf_kernel(double z, double mu);

enum class QuadratureKind { hermite, adaptive };

/// Nodes/weights of a fixed rule, or an empty marker selecting adaptive
/// Simpson integration.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  QuadratureKind kind = QuadratureKind::adaptive;

  static QuadratureRule adaptive() { return {}; }
};

/// Gauss-Hermite rule for the weight exp(-u^2) on the whole real line.
/// Nodes ascend. For large n the outermost weights underflow to zero.
QuadratureRule hermite_rule(int n);

struct AdaptiveResult {
  double value = 0.0;
  bool converged = true;
  long evaluations = 0;
};

/// Adaptive Simpson on [lo, hi] with an absolute tolerance. Leaves that reach the depth limit
/// still count as converged when their summed error estimate stays within the tolerance.
AdaptiveResult adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                                double tol, int max_depth = 48);

}  // namespace relaylink::specfun
