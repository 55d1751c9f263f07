#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "diqss/game.hpp"

using namespace diqss;

TEST_CASE("win predicate", "[game]") {
  CHECK(win(GameInput::from_bits({0, 0, 0}), std::vector<int>{0, 0, 0}, 2));
  CHECK(win(GameInput::from_bits({1, 1, 0}), std::vector<int>{1, 0, 0}, 4));
  // odd-weight questions are never winnable
  for (int a0 : {0, 1})
    for (int a1 : {0, 1})
      for (int a2 : {0, 1})
        CHECK_FALSE(win(GameInput::from_bits({1, 0, 0}), std::vector<int>{a0, a1, a2}, 2));
  CHECK_THROWS_AS(win(GameInput::from_bits({0, 0}), std::vector<int>{0}, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(win(GameInput::from_bits({0, 0}), std::vector<int>{0, 2}, 2),
                  std::invalid_argument);
}

TEST_CASE("GameSpec requires even dimension", "[game]") {
  CHECK_THROWS_AS(GameSpec(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(GameSpec(1, 2), std::invalid_argument);
  CHECK_NOTHROW(GameSpec(2, 6));
}

TEST_CASE("quantum win probability is one half", "[game]") {
  // The game is defined against the main-text observables; the Appendix-A
  // convention is a bell-module flag only (its correlations satisfy the
  // sign-flipped condition sum a = -f instead).
  CHECK(quantum_win_prob(GameSpec(3, 2)) == Catch::Approx(0.5).margin(1e-9));
  CHECK(quantum_win_prob(GameSpec(2, 2)) == Catch::Approx(0.5).margin(1e-9));
  CHECK(quantum_win_prob(GameSpec(3, 4)) == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("character expansion agrees with the enumeration oracle", "[game]") {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {2, 4}, {3, 4}}) {
    const GameSpec spec(n, d);
    CHECK(win_prob_via_characters(spec) ==
          Catch::Approx(quantum_win_prob(spec)).margin(1e-9));
  }
  // identity against the Bell value: p = (1/d)(1/2 + B/2)
  const GameSpec s24(2, 4);
  CHECK(win_prob_via_characters(s24) ==
        Catch::Approx((0.5 + bell_quantum_value(2, 4) / 2.0) / 4.0).margin(1e-9));
  // the paper-constant variant differs by exactly 1/(2d)
  const CharacterExpansion ce = character_expansion(s24);
  CHECK(ce.paper_constant_value - ce.value == Catch::Approx(1.0 / 8.0).margin(1e-12));
}

TEST_CASE("paper closed form", "[game]") {
  CHECK(paper_win_prob(2) == Catch::Approx(0.75));
  CHECK(paper_win_prob(4) == Catch::Approx(0.625));
  CHECK(paper_win_prob(6) == Catch::Approx(7.0 / 12.0).margin(1e-12));
}

TEST_CASE("classical maxima by brute force", "[game]") {
  CHECK(classical_win_maximize(GameSpec(3, 2)).value == Catch::Approx(0.375));
  CHECK(classical_win_maximize(GameSpec(2, 2)).value == Catch::Approx(0.5));
  CHECK(classical_win_maximize(GameSpec(4, 2)).value == Catch::Approx(0.375));
}

TEST_CASE("classical search is deterministic across workers", "[game]") {
  const StrategySearchResult one = classical_win_maximize(GameSpec(3, 4), 1);
  const StrategySearchResult four = classical_win_maximize(GameSpec(3, 4), 4);
  CHECK(one.value == four.value);
  CHECK(one.index == four.index);
  CHECK(one.strategy.responses == four.strategy.responses);
}

TEST_CASE("Fourier identity holds per strategy", "[game]") {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}}) {
    std::uint64_t total = 1;
    for (int k = 0; k < 2 * n; ++k) total *= static_cast<std::uint64_t>(d);
    std::vector<int> responses(static_cast<std::size_t>(2 * n));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      detail::decode_assignment(idx, d, responses);
      const ClassicalStrategy s{n, d, responses};
      CHECK(strategy_win_prob(s) ==
            Catch::Approx((1.0 + bell_of_assignment(s.as_lhv())) / (2.0 * d))
                .margin(1e-9));
    }
  }
  // and for the quantum strategy
  CHECK(quantum_win_prob(GameSpec(3, 4)) ==
        Catch::Approx((1.0 + bell_quantum_value(3, 4)) / 8.0).margin(1e-9));
}

TEST_CASE("classical game value matches the LHV maximum", "[game]") {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 4}}) {
    const double game_max = classical_win_maximize(GameSpec(n, d)).value;
    const double lhv = lhv_maximize(n, d).value;
    CHECK(game_max == Catch::Approx((1.0 + lhv) / (2.0 * d)).margin(1e-12));
  }
}

TEST_CASE("quantum beats classical for N >= 3, ties at N = 2", "[game]") {
  CHECK(quantum_win_prob(GameSpec(3, 2)) >
        classical_win_maximize(GameSpec(3, 2)).value);
  CHECK(quantum_win_prob(GameSpec(3, 4)) >
        classical_win_maximize(GameSpec(3, 4)).value);
  CHECK(quantum_win_prob(GameSpec(2, 2)) ==
        Catch::Approx(classical_win_maximize(GameSpec(2, 2)).value).margin(1e-9));
}

TEST_CASE("per-valid-input certainty of the quantum strategy", "[game]") {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{3, 2}, {3, 4}}) {
    const GameSpec spec(n, d);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      const GameInput x(mask, n);
      if (game_f(x, d).bottom) continue;
      CHECK(quantum_win_prob_given(spec, x) == Catch::Approx(1.0).margin(1e-9));
    }
  }
}

TEST_CASE("Monte Carlo rounds track the analytic values", "[game]") {
  const long long rounds = 100'000;
  const GameSpec spec(3, 2);

  RandomStream rng1(2024);
  const double q = simulate_rounds(spec, QuantumPlay{}, rounds, rng1);
  CHECK(std::abs(q - 0.5) < 3 * std::sqrt(0.25 / rounds));

  RandomStream rng2(2025);
  const ClassicalStrategy best = classical_win_maximize(spec).strategy;
  const double c = simulate_rounds(spec, best, rounds, rng2);
  CHECK(std::abs(c - 0.375) < 3 * std::sqrt(0.375 * 0.625 / rounds));

  RandomStream rng3(2026);
  const double w = simulate_rounds(spec, SourceModel(3, 2, 0.0), rounds, rng3);
  CHECK(std::abs(w - 0.25) < 3 * std::sqrt(0.25 * 0.75 / rounds));
}
