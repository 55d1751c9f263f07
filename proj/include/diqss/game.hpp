#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <variant>
#include <vector>

#include "diqss/bell.hpp"
#include "diqss/ditmath.hpp"
#include "diqss/quantum.hpp"
#include "diqss/rng.hpp"

// The N-partite d-dimensional XOR game: win on sum_k a_k = f(x) (mod d),
// never on f(x) = bottom. Exhaustive Born-rule enumeration is the ground
// truth for the quantum value; the character expansion and the closed form
// (1 + (d-1)/2)/d are computed alongside for comparison.

namespace diqss {

struct GameSpec {
  int num_players;
  int dim;

  GameSpec(int n, int d) : num_players(n), dim(d) {
    if (n < 2) throw std::invalid_argument("GameSpec: N must be >= 2");
    if (d < 2 || d % 2 != 0) throw std::invalid_argument("GameSpec: d must be even and >= 2");
  }
};

inline bool win(const GameInput& x, std::span<const int> answers, int dim) {
  if (static_cast<int>(answers.size()) != x.n)
    throw std::invalid_argument("win: answer length != N");
  const FValue f = game_f(x, dim);
  if (f.bottom) return false;
  long long s = 0;
  for (int a : answers) {
    if (a < 0 || a >= dim) throw std::invalid_argument("win: answer out of [0, d)");
    s += a;
  }
  return static_cast<int>(s % dim) == f.value;
}

// Exact winning probability of the GHZ strategy, by direct enumeration of
// Born-rule outcome distributions over all inputs. Independent of the
// character algebra; serves as the oracle the other routes must match.
inline double quantum_win_prob(const GameSpec& spec,
                               Convention conv = Convention::kMainText) {
  const StateVector psi = ghz(spec.num_players, spec.dim);
  double total = 0;
  for (std::uint32_t mask = 0; mask < (1u << spec.num_players); ++mask) {
    const GameInput x(mask, spec.num_players);
    const FValue f = game_f(x, spec.dim);
    if (f.bottom) continue;
    const ProbTable table = joint_distribution(psi, x.bits(), conv);
    for (std::size_t i = 0; i < table.p.size(); ++i) {
      if (table.p[i] == 0) continue;
      const auto a = decode_outcome(i, spec.num_players, spec.dim);
      long long s = 0;
      for (int v : a) s += v;
      if (static_cast<int>(s % spec.dim) == f.value) total += table.p[i];
    }
  }
  return total / std::ldexp(1.0, spec.num_players);
}

// Conditional win probability for one input (1 for every valid input when
// the Bell value reaches d-1).
inline double quantum_win_prob_given(const GameSpec& spec, const GameInput& x,
                                     Convention conv = Convention::kMainText) {
  const FValue f = game_f(x, spec.dim);
  if (f.bottom) return 0.0;
  const ProbTable table =
      joint_distribution(ghz(spec.num_players, spec.dim), x.bits(), conv);
  double total = 0;
  for (std::size_t i = 0; i < table.p.size(); ++i) {
    if (table.p[i] == 0) continue;
    const auto a = decode_outcome(i, spec.num_players, spec.dim);
    long long s = 0;
    for (int v : a) s += v;
    if (static_cast<int>(s % spec.dim) == f.value) total += table.p[i];
  }
  return total;
}

// Character expansion of the win probability. The correct constant term is
// (#valid inputs)/(2^N d) = 1/(2d): the n = 0 character contributes only on
// inputs with f(x) != bottom. Taking the constant as 1/d instead counts the
// bottom inputs too and inflates the value by 1/(2d); both are exposed, and
// the corrected one is canonical (it matches the enumeration oracle).
struct CharacterExpansion {
  double value = 0;                // with the corrected 1/(2d) constant
  double paper_constant_value = 0; // with the 1/d constant of paper_win_prob
  double character_sum = 0;        // 2^-N sum_x sum_n chi_n(f(x)) <A^n...>
};

inline CharacterExpansion character_expansion(const GameSpec& spec,
                                              Convention conv = Convention::kMainText) {
  const StateVector psi = ghz(spec.num_players, spec.dim);
  Complex sum = 0;
  for (std::uint32_t mask = 0; mask < (1u << spec.num_players); ++mask) {
    const GameInput x(mask, spec.num_players);
    const FValue f = game_f(x, spec.dim);
    if (f.bottom) continue;
    for (int n = 1; n < spec.dim; ++n)
      sum += chi(n, f.value, spec.dim) * product_correlator(psi, x.bits(), n, conv);
  }
  const double character_sum = sum.real() / std::ldexp(1.0, spec.num_players);
  const double d = spec.dim;
  CharacterExpansion out;
  out.character_sum = character_sum;
  out.value = (0.5 + character_sum) / d;
  out.paper_constant_value = (1.0 + character_sum) / d;
  return out;
}

inline double win_prob_via_characters(const GameSpec& spec,
                                      Convention conv = Convention::kMainText) {
  return character_expansion(spec, conv).value;
}

// The closed form p_w = (1/d)(1 + (d-1)/2) that the 1/d constant term
// produces, reported side by side with the enumeration oracle; the two
// disagree (0.75 vs 0.5 at d = 2).
inline double paper_win_prob(int dim) {
  if (dim < 2) throw std::invalid_argument("paper_win_prob: d must be >= 2");
  return (1.0 + 0.5 * (dim - 1)) / static_cast<double>(dim);
}

// Deterministic response table: responses[2*player + question].
struct ClassicalStrategy {
  int num_players = 2;
  int dim = 2;
  std::vector<int> responses;

  int respond(int player, int question) const {
    return responses[static_cast<std::size_t>(2 * player + question)];
  }

  void validate() const {
    if (responses.size() != static_cast<std::size_t>(2 * num_players))
      throw std::invalid_argument("ClassicalStrategy: need 2N responses");
    for (int v : responses)
      if (v < 0 || v >= dim)
        throw std::invalid_argument("ClassicalStrategy: response out of [0, d)");
  }

  LhvAssignment as_lhv() const { return LhvAssignment{num_players, dim, responses}; }
};

inline double strategy_win_prob(const ClassicalStrategy& strategy) {
  strategy.validate();
  const int n = strategy.num_players;
  const int d = strategy.dim;
  int wins = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const GameInput x(mask, n);
    const FValue f = game_f(x, d);
    if (f.bottom) continue;
    long long s = 0;
    for (int j = 0; j < n; ++j) s += strategy.respond(j, x.bit(j));
    if (static_cast<int>(s % d) == f.value) ++wins;
  }
  return static_cast<double>(wins) / std::ldexp(1.0, n);
}

struct StrategySearchResult {
  double value = 0;
  ClassicalStrategy strategy;
  std::uint64_t index = 0;
};

// Exhaustive maximum over all d^(2N) deterministic strategies. Shared
// randomness cannot beat a deterministic extreme point, so this is the
// classical value of the game. Same ordering and tie-break contract as
// lhv_maximize.
inline StrategySearchResult classical_win_maximize(const GameSpec& spec, int workers = 1) {
  std::uint64_t total = 1;
  for (int k = 0; k < 2 * spec.num_players; ++k) {
    if (total > kLhvSearchCap / static_cast<std::uint64_t>(spec.dim))
      throw std::length_error("classical_win_maximize: d^(2N) exceeds the search cap");
    total *= static_cast<std::uint64_t>(spec.dim);
  }
  const int n = spec.num_players;
  const int d = spec.dim;

  std::vector<std::uint32_t> valid_masks;
  std::vector<int> f_values;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const FValue f = game_f(GameInput(mask, n), d);
    if (f.bottom) continue;
    valid_masks.push_back(mask);
    f_values.push_back(f.value);
  }

  struct Best {
    int wins = -1;
    std::uint64_t index = 0;
  };
  auto scan = [&](std::uint64_t lo, std::uint64_t hi) {
    Best best;
    std::vector<int> responses(static_cast<std::size_t>(2 * n));
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      detail::decode_assignment(idx, d, responses);
      int wins = 0;
      for (std::size_t xi = 0; xi < valid_masks.size(); ++xi) {
        const std::uint32_t mask = valid_masks[xi];
        long long s = 0;
        for (int j = 0; j < n; ++j)
          s += responses[static_cast<std::size_t>(2 * j + ((mask >> j) & 1u))];
        if (static_cast<int>(s % d) == f_values[xi]) ++wins;
      }
      if (wins > best.wins) {
        best.wins = wins;
        best.index = idx;
      }
    }
    return best;
  };

  Best best;
  if (workers <= 1) {
    best = scan(0, total);
  } else {
    const int w = std::min<std::uint64_t>(workers, total ? total : 1);
    std::vector<Best> partial(static_cast<std::size_t>(w));
    std::vector<std::thread> threads;
    for (int t = 0; t < w; ++t) {
      const std::uint64_t lo = total * t / w;
      const std::uint64_t hi = total * (t + 1) / w;
      threads.emplace_back([&, t, lo, hi] { partial[static_cast<std::size_t>(t)] = scan(lo, hi); });
    }
    for (auto& th : threads) th.join();
    best = partial[0];
    for (std::size_t t = 1; t < partial.size(); ++t) {
      const Best& b = partial[t];
      if (b.wins > best.wins || (b.wins == best.wins && b.index < best.index))
        best = b;
    }
  }

  ClassicalStrategy strategy{n, d, std::vector<int>(static_cast<std::size_t>(2 * n))};
  detail::decode_assignment(best.index, d, strategy.responses);
  return StrategySearchResult{static_cast<double>(best.wins) / std::ldexp(1.0, n),
                              std::move(strategy), best.index};
}

// Ideal GHZ devices (visibility 1).
struct QuantumPlay {};

using PlayModel = std::variant<QuantumPlay, ClassicalStrategy, SourceModel>;

// Monte Carlo: R i.i.d. rounds with uniformly random questions; returns the
// empirical win rate.
inline double simulate_rounds(const GameSpec& spec, const PlayModel& play,
                              long long rounds, RandomStream& rng,
                              Convention conv = Convention::kMainText) {
  if (rounds < 1) throw std::invalid_argument("simulate_rounds: rounds must be >= 1");
  const int n = spec.num_players;

  // Tables per settings mask for the sampled models.
  std::vector<ProbTable> tables;
  const ClassicalStrategy* strategy = std::get_if<ClassicalStrategy>(&play);
  if (strategy == nullptr) {
    const SourceModel src = std::holds_alternative<QuantumPlay>(play)
                                ? SourceModel(n, spec.dim, 1.0)
                                : std::get<SourceModel>(play);
    tables.reserve(1u << n);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
      tables.push_back(source_distribution(src, GameInput(mask, n).bits(), conv));
  }

  long long wins = 0;
  std::vector<int> answers(static_cast<std::size_t>(n));
  for (long long r = 0; r < rounds; ++r) {
    std::uint32_t mask = 0;
    for (int k = 0; k < n; ++k)
      mask |= static_cast<std::uint32_t>(rng.below(2)) << k;
    const GameInput x(mask, n);
    if (strategy != nullptr) {
      for (int k = 0; k < n; ++k)
        answers[static_cast<std::size_t>(k)] = strategy->respond(k, x.bit(k));
    } else {
      answers = sample_outcome(tables[mask], rng);
    }
    if (win(x, answers, spec.dim)) ++wins;
  }
  return static_cast<double>(wins) / static_cast<double>(rounds);
}

}  // namespace diqss
