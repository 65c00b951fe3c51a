#include "relaylink/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "relaylink/errors.hpp"

namespace relaylink::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxSeriesTerms = 100000;

// log of x^a e^-x / Gamma(a), the common prefactor of P and Q.
double log_prefactor(double a, double x) { return a * std::log(x) - x - ln_gamma(a); }

// Sum of x^n / (a (a+1) ... (a+n)); P(a,x) = prefactor * sum.
double lower_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) {
      return sum * std::exp(log_prefactor(a, x));
    }
  }
  throw NonConvergence("incomplete gamma series did not converge");
}

// Continued fraction for Q(a,x), modified Lentz.
double upper_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxSeriesTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      return std::exp(log_prefactor(a, x)) * h;
    }
  }
  throw NonConvergence("incomplete gamma continued fraction did not converge");
}

void check_args(double a, double x) {
  if (!(a > 0.0)) domain_fail("incomplete gamma: shape must be positive");
  if (!(x >= 0.0)) domain_fail("incomplete gamma: argument must be nonnegative");
}

}  // namespace

double ln_gamma(double x) {
  if (!(x > 0.0)) domain_fail("ln_gamma: argument must be positive");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double reg_lower_inc_gamma(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return lower_series(a, x);
  return 1.0 - upper_fraction(a, x);
}

double reg_upper_inc_gamma(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - lower_series(a, x);
  return upper_fraction(a, x);
}

double inv_reg_lower_inc_gamma(double a, double p) {
  if (!(a > 0.0)) domain_fail("inverse incomplete gamma: shape must be positive");
  if (!(p > 0.0 && p < 1.0)) domain_fail("inverse incomplete gamma: p must lie in (0,1)");

  if (a == 1.0) return -std::log1p(-p);

  const double q = 1.0 - p;
  const bool use_upper = p > 0.5;
  const double gln = ln_gamma(a);
  const double a1 = a - 1.0;
  const double lna1 = a > 1.0 ? std::log(a1) : 0.0;
  const double afac = a > 1.0 ? std::exp(a1 * (lna1 - 1.0) - gln) : 0.0;

  // Starting point (Wilson-Hilferty for a > 1, small-a power law otherwise).
  double x;
  if (a > 1.0) {
    const double pp = p < 0.5 ? p : q;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
    if (p < 0.5) z = -z;
    x = std::max(1e-3, a * std::pow(1.0 - 1.0 / (9.0 * a) - z / (3.0 * std::sqrt(a)), 3));
  } else {
    const double t = 1.0 - a * (0.253 + a * 0.12);
    x = p < t ? std::pow(p / t, 1.0 / a) : 1.0 - std::log1p(-(p - t) / (1.0 - t));
  }

  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  if (!(x > lo && std::isfinite(x))) x = a;

  for (int iter = 0; iter < 200; ++iter) {
    // err = P(a,x) - p, evaluated on whichever side keeps precision.
    const double err = use_upper ? q - reg_upper_inc_gamma(a, x) : reg_lower_inc_gamma(a, x) - p;
    if (err == 0.0) return x;
    if (err > 0.0) {
      hi = x;
    } else {
      lo = x;
    }

    const double dens =
        a > 1.0 ? afac * std::exp(-(x - a1) + a1 * (std::log(x) - lna1))
                : std::exp(-x + a1 * std::log(x) - gln);
    double next = x;
    if (dens > 0.0 && std::isfinite(dens)) {
      const double u = err / dens;
      const double step = u / (1.0 - 0.5 * std::min(1.0, u * (a1 / x - 1.0)));
      next = x - step;
    }
    if (!(next > lo && next < hi)) next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * x;

    const double delta = std::abs(next - x);
    x = next;
    if (delta <= 1e-12 * x || (std::isfinite(hi) && hi - lo <= 4.0 * kEps * hi)) return x;
  }
  throw NonConvergence("inverse incomplete gamma: no convergence for a=" + std::to_string(a) +
                       ", p=" + std::to_string(p));
}

double meijer_g_cdf_kernel(double z, double mu) {
  check_args(mu, z);
  return std::exp(ln_gamma(mu)) * reg_lower_inc_gamma(mu, z);
}

namespace {

// Orthonormal Hermite functions psi_n(x) = p_n(x) e^{-x^2/2}; returns {psi_n, psi_{n-1}}.
std::pair<double, double> hermite_function(int n, double x) {
  double cur = std::exp(-0.5 * x * x) / std::pow(std::numbers::pi, 0.25);
  double prev = 0.0;
  for (int j = 0; j < n; ++j) {
    const double next = x * std::sqrt(2.0 / (j + 1)) * cur - std::sqrt(static_cast<double>(j) / (j + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

double hermite_root(int n, double lo, double hi) {
  double f_lo = hermite_function(n, lo).first;
  double x = 0.5 * (lo + hi);
  for (int its = 0; its < 200; ++its) {
    const auto [f, f_prev] = hermite_function(n, x);
    if (f == 0.0) return x;
    if ((f > 0.0) == (f_lo > 0.0)) {
      lo = x;
      f_lo = f;
    } else {
      hi = x;
    }
    const double slope = std::sqrt(2.0 * n) * f_prev - x * f;
    double next = slope != 0.0 ? x - f / slope : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x)) || hi - lo <= 4.0 * kEps * hi) return next;
    x = next;
  }
  throw NonConvergence("hermite_rule: root polishing failed at n=" + std::to_string(n));
}

}  // namespace

QuadratureRule hermite_rule(int n) {
  if (n < 2 || n > 512) domain_fail("hermite_rule: order must lie in [2, 512]");

  // Zeros are spaced at least ~pi / sqrt(2n+1) apart and lie below sqrt(2n+1).
  const double edge = std::sqrt(2.0 * n + 1.0);
  const double h = 0.2 * std::numbers::pi / edge;
  std::vector<double> positive;
  double x0 = 0.5 * h;
  double f0 = hermite_function(n, x0).first;
  while (x0 < edge + 1.0) {
    const double x1 = x0 + h;
    const double f1 = hermite_function(n, x1).first;
    if ((f0 > 0.0) != (f1 > 0.0)) positive.push_back(hermite_root(n, x0, x1));
    x0 = x1;
    f0 = f1;
  }
  if (static_cast<int>(positive.size()) != n / 2) {
    throw NonConvergence("hermite_rule: found " + std::to_string(positive.size()) + " of " +
                         std::to_string(n / 2) + " positive nodes at n=" + std::to_string(n));
  }

  std::vector<double> roots;
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) roots.push_back(-*it);
  if (n % 2 == 1) roots.push_back(0.0);
  roots.insert(roots.end(), positive.begin(), positive.end());

  // w = e^{-x^2} / (n psi_{n-1}(x)^2), formed in logs so the tails underflow cleanly.
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    const double prev = hermite_function(n, roots[i]).second;
    w[i] = std::exp(-roots[i] * roots[i] - std::log(static_cast<double>(n)) - 2.0 * std::log(std::abs(prev)));
  }
  return {std::move(roots), std::move(w), QuadratureKind::hermite};
}

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  long evaluations = 0;
  double unresolved = 0.0;
};

double simpson_step(SimpsonState& s, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = s.f(lm);
  const double frm = s.f(rm);
  s.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) {
    s.unresolved += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_step(s, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(s, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

AdaptiveResult adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                                double tol, int max_depth) {
  SimpsonState s{f};
  const double fa = f(lo);
  const double fb = f(hi);
  const double fm = f(0.5 * (lo + hi));
  s.evaluations = 3;
  const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
  const double value = simpson_step(s, lo, hi, fa, fm, fb, whole, tol, max_depth);
  return {value, s.unresolved <= tol, s.evaluations};
}

}  // namespace relaylink::specfun
