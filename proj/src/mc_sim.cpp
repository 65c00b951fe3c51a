#include "relaylink/mc_sim.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "relaylink/errors.hpp"
#include "relaylink/specfun.hpp"

namespace relaylink {

namespace {

// Per-block partial sums, one entry per SNR scale.
struct BlockTally {
  std::vector<long> outages;
  std::vector<double> err_sum;
  std::vector<double> err_sq_sum;
  long trials = 0;
};

double exponential_draw(double mean, RngStream& rng) { return -mean * std::log1p(-rng.uniform()); }

BlockTally run_block(const SystemConfig& c, const McConfig& m, const std::vector<double>& scales,
                     long block, long trials) {
  RngStream rng = rng_stream(m.seed, static_cast<std::uint64_t>(block));
  BlockTally t;
  t.outages.assign(scales.size(), 0);
  t.err_sum.assign(scales.size(), 0.0);
  t.err_sq_sum.assign(scales.size(), 0.0);
  t.trials = trials;
  const double half_a = 0.5 * c.mod_a;
  for (long i = 0; i < trials; ++i) {
    const double g = draw_links(c, rng).end_to_end();
    for (std::size_t j = 0; j < scales.size(); ++j) {
      const double ge = scales[j] * g;
      if (ge <= c.gamma_th) ++t.outages[j];
      // a * Q(sqrt(2 b ge)) = (a/2) erfc(sqrt(b ge))
      const double err = half_a * std::erfc(std::sqrt(c.mod_b * ge));
      t.err_sum[j] += err;
      t.err_sq_sum[j] += err * err;
    }
  }
  return t;
}

ScaledEstimates run(const SystemConfig& c, const McConfig& m, const std::vector<double>& scales) {
  validate(c);
  validate(m);
  for (double s : scales) {
    if (!(s > 0.0)) domain_fail("Monte Carlo: SNR scale must be positive");
  }
  const long blocks = (m.trials + m.batch - 1) / m.batch;
  std::vector<BlockTally> tallies(static_cast<std::size_t>(blocks));

  std::mutex progress_mutex;
  long done = 0;
  auto work = [&](int worker) {
    // Contiguous block ranges per worker.
    const long begin = blocks * worker / m.workers;
    const long end = blocks * (worker + 1) / m.workers;
    for (long b = begin; b < end; ++b) {
      const long n = std::min(m.batch, m.trials - b * m.batch);
      tallies[static_cast<std::size_t>(b)] = run_block(c, m, scales, b, n);
      if (m.progress) {
        std::lock_guard lock(progress_mutex);
        done += n;
        m.progress(done, m.trials);
      }
    }
  };
  if (m.workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(m.workers));
    for (int w = 0; w < m.workers; ++w) pool.emplace_back(work, w);
  }

  // Reduction in block order.
  ScaledEstimates out;
  const double n = static_cast<double>(m.trials);
  for (std::size_t j = 0; j < scales.size(); ++j) {
    long count = 0;
    double sum = 0.0;
    double sq = 0.0;
    for (const BlockTally& t : tallies) {
      count += t.outages[j];
      sum += t.err_sum[j];
      sq += t.err_sq_sum[j];
    }
    const double p = count / n;
    out.outage.push_back({p, Method::monte_carlo, std::sqrt(p * (1.0 - p) / n), m.trials});
    const double mean = sum / n;
    const double var = std::max(0.0, sq / n - mean * mean);
    out.asep.push_back({mean, Method::monte_carlo, std::sqrt(var / n), m.trials});
  }
  return out;
}

}  // namespace

void validate(const McConfig& m) {
  if (m.trials < 1000) domain_fail("Monte Carlo: need at least 1000 trials");
  if (m.workers < 1) domain_fail("Monte Carlo: need at least one worker");
  if (m.batch < 1) domain_fail("Monte Carlo: batch must be positive");
}

double LinkDraw::end_to_end() const { return std::min({uplink_selected, sr, rs, downlink}); }

LinkDraw draw_links(const SystemConfig& c, RngStream& rng) {
  const SchedulingSpec& s = c.scheduling;
  // K is small in practice; stack buffer up to 64 nodes.
  double stack_buf[64];
  std::vector<double> heap_buf;
  double* up = stack_buf;
  if (s.k_total > 64) {
    heap_buf.resize(static_cast<std::size_t>(s.k_total));
    up = heap_buf.data();
  }
  for (int k = 0; k < s.k_total; ++k) up[k] = exponential_draw(s.uplink_mean_snr, rng);
  // N-th largest; equal values are interchangeable, so ties need no extra rule.
  std::nth_element(up, up + (s.n_order - 1), up + s.k_total, std::greater<>());

  LinkDraw d;
  d.uplink_selected = up[s.n_order - 1];
  d.sr = alpha_mu_sample(c.sr_model, rng.uniform());
  d.rs = alpha_mu_sample(c.rs_model, rng.uniform());
  d.downlink = exponential_draw(s.downlink_mean_snr, rng);
  return d;
}

PerfEstimate simulate_outage(const SystemConfig& c, const McConfig& m) {
  return run(c, m, {1.0}).outage.front();
}

PerfEstimate simulate_asep(const SystemConfig& c, const McConfig& m) {
  return run(c, m, {1.0}).asep.front();
}

ScaledEstimates simulate_scaled(const SystemConfig& c, const McConfig& m,
                                const std::vector<double>& scales) {
  return run(c, m, scales);
}

}  // namespace relaylink
