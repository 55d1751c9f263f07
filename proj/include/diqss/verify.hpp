#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "diqss/analysis.hpp"
#include "diqss/adversary.hpp"
#include "diqss/bell.hpp"
#include "diqss/game.hpp"
#include "diqss/protocol.hpp"
#include "diqss/quantum.hpp"

// The oracle-equivalence suite behind `diqss verify`: every closed-form
// claim is checked against an independent computation path (enumeration,
// brute force, Monte Carlo). Each check is one named pass/fail line.

namespace diqss {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline void check(std::vector<CheckResult>& out, const std::string& name, bool pass,
                  const std::string& detail = {}) {
  out.push_back(CheckResult{name, pass, detail});
}

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace detail

inline std::vector<CheckResult> run_verification() {
  using detail::check;
  using detail::num;
  std::vector<CheckResult> out;

  // Character algebra: homomorphism and orthogonality.
  {
    bool homo = true, ortho = true;
    for (int d : {2, 3, 4, 6}) {
      for (int n = 0; n < d; ++n)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            if (std::abs(chi(n, j, d) * chi(n, k, d) - chi(n, mod_add(j, k, d), d)) > 1e-12)
              homo = false;
      for (int j = 0; j < d; ++j) {
        Complex s = 0;
        for (int n = 0; n < d; ++n) s += chi(n, j, d);
        if (std::abs(s - Complex(j == 0 ? d : 0)) > 1e-9) ortho = false;
      }
    }
    check(out, "characters: homomorphism", homo);
    check(out, "characters: orthogonality", ortho);
  }

  // Bases orthonormal, observables unitary with P^d = I, and the character
  // decomposition sum_a conj(chi_n(a)) proj_a = P^n.
  {
    bool ortho = true, power_id = true, decomp = true;
    for (int d : {2, 3, 4, 6}) {
      for (Convention conv : {Convention::kMainText, Convention::kAppendixA}) {
        for (int setting : {0, 1}) {
          const Matrix v = measurement_basis(setting, d, conv);
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
              Complex g = 0;
              for (int c = 0; c < d; ++c) g += std::conj(v.at(a, c)) * v.at(b, c);
              if (std::abs(g - Complex(a == b ? 1 : 0)) > 1e-9) ortho = false;
            }
          const Matrix pd = observable_power(setting, d, d, conv);
          for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
              if (std::abs(pd.at(r, c) - Complex(r == c ? 1 : 0)) > 1e-9) power_id = false;
          for (int n = 1; n < d; ++n) {
            const Matrix pn = observable_power(setting, d, n, conv);
            Matrix sum(d);
            for (int a = 0; a < d; ++a) {
              const Complex coef = std::conj(chi(n, a, d));
              for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c)
                  sum.at(r, c) += coef * v.at(a, r) * std::conj(v.at(a, c));
            }
            for (int r = 0; r < d; ++r)
              for (int c = 0; c < d; ++c)
                if (std::abs(sum.at(r, c) - pn.at(r, c)) > 1e-9) decomp = false;
          }
        }
      }
    }
    check(out, "bases: orthonormal", ortho);
    check(out, "observables: P^d = I", power_id);
    check(out, "observables: character decomposition equals P^n", decomp);
  }

  // Quantum Bell value d-1 under both conventions.
  {
    bool pass = true;
    std::ostringstream detail;
    for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {2, 4}, {3, 4}}) {
      for (Convention conv : {Convention::kMainText, Convention::kAppendixA}) {
        const double q = bell_quantum_value(n, d, conv);
        if (std::abs(q - (d - 1)) > 1e-9) {
          pass = false;
          detail << " (" << n << "," << d << "," << convention_name(conv) << ")=" << num(q);
        }
      }
    }
    check(out, "bell: quantum value equals d-1", pass, detail.str());
  }

  // Brute-force LHV maxima against the formula bound.
  {
    bool sound = true, attained = true;
    for (auto [n, d, expect] : std::vector<std::tuple<int, int, double>>{
             {2, 2, 1.0}, {3, 2, 0.5}, {4, 2, 0.5}, {3, 4, 2.0}}) {
      const double lhv = lhv_maximize(n, d).value;
      const double bound = classical_bound(n, d);
      if (lhv > bound + 1e-9) sound = false;
      if (std::abs(lhv - expect) > 1e-9) attained = false;
    }
    check(out, "bell: lhv_max <= formula bound", sound);
    check(out, "bell: lhv_max matches known values", attained);
  }

  // Odd d: no quantum advantage.
  {
    const double q = bell_quantum_value(3, 3);
    check(out, "bell: odd d shows no violation", q <= classical_bound(3, 3) + 1e-9,
          "quantum(3,3)=" + num(q));
  }

  // Fourier identity p = (1 + B)/(2d) for the quantum strategy and for
  // every deterministic strategy on small instances.
  {
    bool pass = true;
    for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}}) {
      const GameSpec spec(n, d);
      if (std::abs(quantum_win_prob(spec) -
                   (1.0 + bell_quantum_value(n, d)) / (2.0 * d)) > 1e-9)
        pass = false;
      std::uint64_t total = 1;
      for (int k = 0; k < 2 * n; ++k) total *= static_cast<std::uint64_t>(d);
      std::vector<int> values(static_cast<std::size_t>(2 * n));
      for (std::uint64_t idx = 0; idx < total; ++idx) {
        detail::decode_assignment(idx, d, values);
        const ClassicalStrategy s{n, d, values};
        const double p = strategy_win_prob(s);
        const double b = bell_of_assignment(s.as_lhv());
        if (std::abs(p - (1.0 + b) / (2.0 * d)) > 1e-9) pass = false;
      }
    }
    check(out, "game: Fourier identity p = (1+B)/(2d)", pass);
  }

  // Game values: enumeration oracle, character path, classical maxima, and
  // the flagged paper closed form.
  {
    const GameSpec g32(3, 2);
    const double q32 = quantum_win_prob(g32);
    const double c32 = win_prob_via_characters(g32);
    check(out, "game: quantum_win_prob(3,2) = 0.5", std::abs(q32 - 0.5) <= 1e-9, num(q32));
    check(out, "game: character path agrees with oracle", std::abs(c32 - q32) <= 1e-9);
    const double best32 = classical_win_maximize(g32).value;
    const double best22 = classical_win_maximize(GameSpec(2, 2)).value;
    check(out, "game: classical max (3,2) = 0.375, (2,2) = 0.5",
          std::abs(best32 - 0.375) <= 1e-12 && std::abs(best22 - 0.5) <= 1e-12);
    check(out, "game: classical max = (1 + lhv_max)/(2d)",
          std::abs(best32 - (1.0 + lhv_maximize(3, 2).value) / 4.0) <= 1e-12);
    check(out, "game: paper closed form 3/4 flagged against oracle 1/2",
          std::abs(paper_win_prob(2) - 0.75) <= 1e-12 && std::abs(q32 - 0.5) <= 1e-9);
  }

  // GHZ support: all-X outcomes sum to 0 (mod d), and the masked share
  // recovers the secret exactly.
  {
    bool support = true, recover = true;
    for (int d : {2, 4}) {
      const std::vector<int> zeros(3, 0);
      const ProbTable table = joint_distribution(ghz(3, d), zeros);
      RandomStream rng(derive_seed(7, kStreamRound, static_cast<std::uint64_t>(d)));
      for (int i = 0; i < 10'000; ++i) {
        const auto a = sample_outcome(table, rng);
        if ((a[0] + a[1] + a[2]) % d != 0) support = false;
        const int secret = rng.below(d);
        const int sprime = share_round(secret, a[0], d);
        const std::vector<int> shares(a.begin() + 1, a.end());
        if (recover_round(sprime, shares, d) != secret) recover = false;
      }
    }
    check(out, "protocol: all-X outcome sums are 0 (mod d)", support);
    check(out, "protocol: share/recover round-trips the secret", recover);
  }

  // Adversary predictions.
  {
    const double none = predicted_c(AttackModel::none(), 3, 2);
    const double noise = predicted_c(AttackModel::white_noise(0.8), 3, 2);
    const double icept = predicted_c(AttackModel::intercept_resend({1}), 3, 2);
    const auto best = classical_win_maximize(GameSpec(3, 2));
    const double cls = predicted_c(AttackModel::deterministic_devices(best.strategy), 3, 2);
    check(out, "adversary: predicted C (honest) = 0.5", std::abs(none - 0.5) <= 1e-12);
    check(out, "adversary: predicted C (noise v=0.8) = 0.45",
          std::abs(noise - 0.45) <= 1e-12, num(noise));
    check(out, "adversary: predicted C (intercept) = 0.25",
          std::abs(icept - 0.25) <= 1e-12, num(icept));
    check(out, "adversary: predicted C (best classical) = classical max",
          std::abs(cls - best.value) <= 1e-12);
  }

  // Hash family: equal inputs agree; Monte Carlo collision rate within the
  // two-universal bound.
  {
    RandomStream rng(derive_seed(11, kStreamHash, 0));
    bool agree = true;
    int collisions = 0;
    const int pairs = 2000, len = 32, tag = 10, d = 2;
    for (int i = 0; i < pairs; ++i) {
      const HashFunction h = hash_sample(d, len, tag, rng);
      std::vector<int> a(len), b(len);
      for (auto& v : a) v = rng.below(d);
      do {
        for (auto& v : b) v = rng.below(d);
      } while (b == a);
      const DitString sa(a, d), sb(b, d);
      if (hash_apply(h, sa) != hash_apply(h, sa)) agree = false;
      if (hash_apply(h, sa) == hash_apply(h, sb)) ++collisions;
    }
    const double bound = epsilon_correct(tag, d);
    const double sigma = std::sqrt(bound * (1 - bound) / pairs);
    check(out, "hash: deterministic on equal inputs", agree);
    check(out, "hash: collision rate within p^-m + 3 sigma",
          static_cast<double>(collisions) / pairs <= bound + 3 * sigma,
          num(static_cast<double>(collisions) / pairs));
  }

  // Calculator spot values.
  {
    check(out, "analysis: hoeffding_delta(0.01, 200)",
          std::abs(hoeffding_delta(0.01, 200) - 0.10729830131446737) <= 1e-12);
    check(out, "analysis: serfling_lambda(1000, 500, 0.01)",
          std::abs(serfling_lambda(1000, 500, 0.01) - 0.09606644082467163) <= 1e-12);
    check(out, "analysis: epsilon_complete(0.5, 0.1, 1000)",
          std::abs(epsilon_complete(0.5, 0.1, 1000) - 0.10004772759416486) <= 1e-12);
    check(out, "analysis: epsilon_correct(10, 2) = 2^-10",
          epsilon_correct(10, 2) == 9.765625e-4);
  }

  // End-to-end honest run: completes, recovers exactly, and is reproducible.
  {
    ProtocolConfig config;
    config.seed = 7;
    const ProtocolRun a = run(config);
    const ProtocolRun b = run(config);
    bool reproducible = transcript_csv(a.transcript) == transcript_csv(b.transcript);
    check(out, "protocol: honest run completes with exact recovery",
          a.result.aborted == AbortKind::kNone &&
              a.result.dealer_secret == a.result.recovered_secret &&
              a.result.hash_verdict == HashVerdict::kMatch);
    check(out, "protocol: identical seeds give identical transcripts", reproducible);
    bool audit_ok = true;
    try {
      audit_party_isolation(a.transcript, a.result.aborted);
    } catch (const std::logic_error&) {
      audit_ok = false;
    }
    check(out, "protocol: transcript leaks no key-round outcomes", audit_ok);
  }

  return out;
}

}  // namespace diqss
