#pragma once

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "diqss/protocol.hpp"
#include "diqss/rng.hpp"

// Closed-form finite-statistics calculators for the correctness,
// completeness and concentration bounds, plus the empirical abort-rate
// experiment that validates them. Outputs are raw bound values; nothing is
// clipped to [0,1] during computation.

namespace diqss {

// Correctness failure bound d^(-eps_EC) of the hash check.
inline double epsilon_correct(int hash_tag_len, int dim) {
  if (hash_tag_len < 1) throw std::invalid_argument("epsilon_correct: eps_EC must be >= 1");
  if (dim < 2) throw std::invalid_argument("epsilon_correct: d must be >= 2");
  return std::pow(static_cast<double>(dim), -static_cast<double>(hash_tag_len));
}

// Completeness bound (1 - mu(1 - exp(-2 eta^2)))^M + eta. The negative
// exponent is the Hoeffding tail exp(-2 eta^2 j) averaged over the binomial
// test-round count. The sign-flipped variant exp(+2 eta^2) exceeds 1 for
// every eta and makes the bound vacuous; it is kept for comparison only.
inline double epsilon_complete(double mu, double eta, int rounds) {
  if (mu <= 0.0 || mu >= 1.0) throw std::invalid_argument("epsilon_complete: mu in (0,1)");
  if (eta <= 0.0) throw std::invalid_argument("epsilon_complete: eta must be > 0");
  if (rounds < 1) throw std::invalid_argument("epsilon_complete: M must be >= 1");
  return std::pow(1.0 - mu * (1.0 - std::exp(-2.0 * eta * eta)), rounds) + eta;
}

inline double epsilon_complete_sign_flipped(double mu, double eta, int rounds) {
  return std::pow(1.0 - mu * (1.0 - std::exp(2.0 * eta * eta)), rounds) + eta;
}

// Hoeffding deviation delta = sqrt(ln(1/eps_test) / (2 sum_i T_i)).
inline double hoeffding_delta(double eps_test, long long test_rounds) {
  if (eps_test <= 0.0 || eps_test >= 1.0)
    throw std::invalid_argument("hoeffding_delta: eps_test in (0,1)");
  if (test_rounds < 1) throw std::invalid_argument("hoeffding_delta: T must be >= 1");
  return std::sqrt(std::log(1.0 / eps_test) / (2.0 * static_cast<double>(test_rounds)));
}

// Serfling deviation lambda = sqrt( M(T+1) / (2 T^2 (M-T)) * ln(1/eps_qss) ).
inline double serfling_lambda(long long rounds, long long test_rounds, double eps_qss) {
  if (test_rounds < 1 || test_rounds >= rounds)
    throw std::invalid_argument("serfling_lambda: need 1 <= T < M");
  if (eps_qss <= 0.0 || eps_qss > 1.0)
    throw std::invalid_argument("serfling_lambda: eps_qss in (0,1]");
  const double m = static_cast<double>(rounds);
  const double t = static_cast<double>(test_rounds);
  return std::sqrt(m * (t + 1.0) / (2.0 * t * t * (m - t)) * std::log(1.0 / eps_qss));
}

struct WilsonInterval {
  double lo = 0;
  double hi = 1;
};

// Wilson score interval; z defaults to the two-sided 95% quantile.
inline WilsonInterval wilson_interval(long long successes, long long trials,
                                      double z = 1.959963984540054) {
  if (trials < 1) throw std::invalid_argument("wilson_interval: trials must be >= 1");
  const double nf = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / nf;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nf;
  const double center = (phat + z2 / (2.0 * nf)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf)) / denom;
  return WilsonInterval{std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct AbortRateResult {
  int trials = 0;
  int test_aborts = 0;
  int ec_aborts = 0;
  int completed = 0;
  double abort_rate = 0;  // any abort
  WilsonInterval abort_ci;
  WilsonInterval test_abort_ci;
  double mean_c = 0;  // over trials with a defined C
};

// Runs the protocol repeatedly with per-trial derived seeds and reports
// empirical abort rates with Wilson 95% intervals. Deterministic for any
// worker count: trial t always uses substream (kStreamTrial, t).
inline AbortRateResult abort_rate_experiment(const ProtocolConfig& config, int trials,
                                             int workers = 1) {
  if (trials < 1) throw std::invalid_argument("abort_rate_experiment: trials must be >= 1");
  config.validate();

  std::vector<AbortKind> kinds(static_cast<std::size_t>(trials));
  std::vector<double> cs(static_cast<std::size_t>(trials));
  auto run_range = [&](int lo, int hi) {
    for (int t = lo; t < hi; ++t) {
      ProtocolConfig c = config;
      c.seed = derive_seed(config.seed, kStreamTrial, static_cast<std::uint64_t>(t));
      const ProtocolRun r = run(c);
      kinds[static_cast<std::size_t>(t)] = r.result.aborted;
      cs[static_cast<std::size_t>(t)] = r.result.c_statistic;
    }
  };

  if (workers <= 1) {
    run_range(0, trials);
  } else {
    const int w = std::min(workers, trials);
    std::vector<std::thread> threads;
    for (int t = 0; t < w; ++t) {
      const int lo = trials * t / w;
      const int hi = trials * (t + 1) / w;
      threads.emplace_back([&, lo, hi] { run_range(lo, hi); });
    }
    for (auto& th : threads) th.join();
  }

  AbortRateResult out;
  out.trials = trials;
  double c_sum = 0;
  int c_count = 0;
  for (int t = 0; t < trials; ++t) {
    switch (kinds[static_cast<std::size_t>(t)]) {
      case AbortKind::kTestAbort: ++out.test_aborts; break;
      case AbortKind::kEcAbort: ++out.ec_aborts; break;
      case AbortKind::kNone: ++out.completed; break;
    }
    const double c = cs[static_cast<std::size_t>(t)];
    if (!std::isnan(c)) {
      c_sum += c;
      ++c_count;
    }
  }
  const int aborts = out.test_aborts + out.ec_aborts;
  out.abort_rate = static_cast<double>(aborts) / static_cast<double>(trials);
  out.abort_ci = wilson_interval(aborts, trials);
  out.test_abort_ci = wilson_interval(out.test_aborts, trials);
  out.mean_c = c_count ? c_sum / c_count : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace diqss
