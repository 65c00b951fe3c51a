#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "relaylink/mc_sim.hpp"
#include "relaylink/perf_analysis.hpp"

using namespace relaylink;
using doctest::Approx;

namespace {

SystemConfig make(int k, int n, AlphaMuParams hop, double mean, double gamma_th) {
  SystemConfig c;
  c.scheduling = {k, n, mean, mean};
  hop.mean_snr = mean;
  c.sr_model = hop;
  c.rs_model = hop;
  c.gamma_th = gamma_th;
  return c;
}

McConfig trials(long n) {
  McConfig m;
  m.trials = n;
  return m;
}

}  // namespace

TEST_SUITE("mc_sim") {

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(validate(trials(999)), std::domain_error);
  McConfig m = trials(1000);
  m.workers = 0;
  CHECK_THROWS_AS(validate(m), std::domain_error);
  m.workers = 1;
  m.batch = 0;
  CHECK_THROWS_AS(validate(m), std::domain_error);
}

TEST_CASE("one protocol round") {
  const SystemConfig c = make(6, 2, {2.34, 2.21, 1.0}, 10.0, 1.0);
  RngStream a = rng_stream(5, 0);
  RngStream b = rng_stream(5, 0);
  const LinkDraw d = draw_links(c, a);
  std::vector<double> up(6);
  for (double& u : up) u = -10.0 * std::log1p(-b.uniform());
  std::sort(up.begin(), up.end(), std::greater<>());
  CHECK(d.uplink_selected == up[1]);
  CHECK(d.sr == alpha_mu_sample(c.sr_model, b.uniform()));
  CHECK(d.rs == alpha_mu_sample(c.rs_model, b.uniform()));
  CHECK(d.downlink == -10.0 * std::log1p(-b.uniform()));
  CHECK(d.end_to_end() == std::min({d.uplink_selected, d.sr, d.rs, d.downlink}));
}

TEST_CASE("zero threshold never trips an outage") {
  const PerfEstimate e = simulate_outage(make(3, 1, {2.0, 2.0, 1.0}, 1.0, 0.0), trials(10000));
  CHECK(e.value == 0.0);
  CHECK(e.method == Method::monte_carlo);
  CHECK(e.trials == 10000);
}

TEST_CASE("all-exponential outage matches 1 - e^-4") {
  const PerfEstimate e = simulate_outage(make(1, 1, {2.0, 1.0, 1.0}, 1.0, 1.0), trials(10'000'000));
  const double exact = 1.0 - std::exp(-4.0);
  CHECK(e.std_error == Approx(std::sqrt(e.value * (1.0 - e.value) / 1e7)).epsilon(1e-12));
  CHECK(std::abs(e.value - exact) < 3.0 * std::sqrt(exact * (1.0 - exact) / 1e7));
}

TEST_CASE("very-weak turbulence sweep matches the exact outage") {
  const SystemConfig base = make(3, 1, {2.34, 2.21, 1.0}, 1.0, 1.0);
  std::vector<double> scales;
  for (double db = 0.0; db <= 40.0; db += 5.0) scales.push_back(db_to_linear(db));
  const long n = 2'000'000;
  const ScaledEstimates est = simulate_scaled(base, trials(n), scales);
  REQUIRE(est.outage.size() == scales.size());
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double exact = total_outage(with_common_mean_snr(base, scales[i])).value;
    CAPTURE(i);
    CHECK(std::abs(est.outage[i].value - exact) < 3.0 * std::sqrt(exact * (1.0 - exact) / n));
  }
}

TEST_CASE("scaled run equals separate runs at each SNR") {
  const SystemConfig base = make(3, 2, {2.0, 2.0, 1.0}, 1.0, 1.0);
  const McConfig m = trials(5000);
  const ScaledEstimates est = simulate_scaled(base, m, {1.0});
  CHECK(est.outage[0].value == simulate_outage(base, m).value);
  CHECK(est.asep[0].value == simulate_asep(base, m).value);
}

TEST_CASE("ASEP estimates") {
  SUBCASE("vanishing SNR gives a/2") {
    SystemConfig c = make(1, 1, {2.0, 1.0, 1.0}, 1e-300, 1.0);
    c.mod_a = 2.0;
    CHECK(simulate_asep(c, trials(10000)).value == Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("all-exponential links at mean SNR 40") {
    const PerfEstimate e = simulate_asep(make(1, 1, {2.0, 1.0, 1.0}, 40.0, 1.0), trials(10'000'000));
    CHECK(std::abs(e.value - 0.023277) < 3.0 * e.std_error);
    CHECK(std::abs(e.value - 0.5 * (1.0 - std::sqrt(10.0 / 11.0))) < 3.0 * e.std_error);
  }
  SUBCASE("quadrature agrees within 2%") {
    const SystemConfig c = make(5, 1, {2.34, 2.21, 1.0}, db_to_linear(15.0), 1.0);
    const PerfEstimate e = simulate_asep(c, trials(1'000'000));
    CHECK(std::abs(e.value / asep(c).value - 1.0) < 0.02);
  }
}

TEST_CASE("determinism and partition invariance") {
  const SystemConfig c = make(4, 2, {0.579, 2.022, 1.0}, 10.0, 1.0);
  McConfig m = trials(300'000);
  m.batch = 4096;
  const ScaledEstimates ref = simulate_scaled(c, m, {0.1, 1.0, 10.0});
  const ScaledEstimates again = simulate_scaled(c, m, {0.1, 1.0, 10.0});
  for (int workers : {1, 2, 3, 4, 8}) {
    m.workers = workers;
    const ScaledEstimates est = simulate_scaled(c, m, {0.1, 1.0, 10.0});
    for (std::size_t i = 0; i < 3; ++i) {
      CAPTURE(workers);
      CHECK(est.outage[i].value == ref.outage[i].value);
      CHECK(est.asep[i].value == ref.asep[i].value);
      CHECK(est.asep[i].std_error == ref.asep[i].std_error);
      CHECK(again.asep[i].value == ref.asep[i].value);
    }
  }

  SUBCASE("a different seed changes the estimate") {
    McConfig other = trials(300'000);
    other.batch = 4096;
    other.seed = 1;
    CHECK(simulate_scaled(c, other, {1.0}).asep[0].value != ref.asep[1].value);
  }
}

TEST_CASE("progress callback") {
  McConfig m = trials(10'000);
  m.batch = 3000;
  m.workers = 2;
  std::vector<long> seen;
  m.progress = [&](long done, long total) {
    CHECK(total == 10'000);
    seen.push_back(done);
  };
  (void)simulate_outage(make(2, 1, {2.0, 1.0, 1.0}, 5.0, 1.0), m);
  REQUIRE(seen.size() == 4);
  CHECK(seen.back() == 10'000);
  CHECK(std::is_sorted(seen.begin(), seen.end()));
}

}
