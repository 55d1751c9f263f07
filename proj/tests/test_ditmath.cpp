#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "diqss/ditmath.hpp"
#include "diqss/rng.hpp"

using namespace diqss;

TEST_CASE("mod_add on dits", "[ditmath]") {
  CHECK(mod_add(Dit(1, 2), Dit(1, 2)).value == 0);
  CHECK(mod_add(Dit(3, 4), Dit(3, 4)).value == 2);
  for (int x = 0; x < 6; ++x) CHECK(mod_add(Dit(0, 6), Dit(x, 6)).value == x);
  CHECK_THROWS_AS(mod_add(Dit(0, 2), Dit(0, 4)), std::invalid_argument);
}

TEST_CASE("Dit constructor enforces range", "[ditmath]") {
  CHECK_THROWS_AS(Dit(2, 2), std::invalid_argument);
  CHECK_THROWS_AS(Dit(-1, 4), std::invalid_argument);
  CHECK_THROWS_AS(Dit(0, 1), std::invalid_argument);
  CHECK_NOTHROW(Dit(2, 3));  // odd moduli allowed at this layer
}

TEST_CASE("omega_pow evaluates half-step exponents", "[ditmath]") {
  CHECK(std::abs(omega_pow(HalfExponent{0, 5}) - std::complex<double>(1, 0)) < 1e-12);
  CHECK(std::abs(omega_pow(HalfExponent{1, 2}) - std::complex<double>(0, 1)) < 1e-12);
  CHECK(std::abs(omega_pow(HalfExponent{2, 4}) - std::complex<double>(0, 1)) < 1e-12);
  for (int d : {2, 3, 4, 6, 8})
    for (long long k = -2 * d; k <= 2 * d; ++k)
      CHECK(std::abs(std::abs(omega_pow(HalfExponent{k, d})) - 1.0) < 1e-12);
}

TEST_CASE("omega_pow is a homomorphism on the half-step grid", "[ditmath]") {
  RandomStream rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + rng.below(7);
    const HalfExponent t{rng.below(4 * d) - 2 * d, d};
    const HalfExponent s{rng.below(4 * d) - 2 * d, d};
    CHECK(std::abs(omega_pow(t) * omega_pow(s) - omega_pow(t + s)) < 1e-12);
  }
}

TEST_CASE("half exponents compare modulo 2d", "[ditmath]") {
  CHECK(HalfExponent{1, 3} == HalfExponent{7, 3});
  CHECK(HalfExponent{-1, 3} == HalfExponent{5, 3});
  CHECK(!(HalfExponent{1, 3} == HalfExponent{2, 3}));
}

TEST_CASE("characters", "[ditmath]") {
  for (int d : {2, 3, 4, 6})
    for (int j = 0; j < d; ++j)
      CHECK(std::abs(chi(0, j, d) - std::complex<double>(1, 0)) < 1e-12);
  CHECK(std::abs(chi(1, 1, 2) - std::complex<double>(-1, 0)) < 1e-12);
  CHECK(std::abs(chi(2, 3, 4) - std::complex<double>(-1, 0)) < 1e-12);

  // homomorphism chi_n(j) chi_n(k) = chi_n(j+k)
  for (int d : {2, 3, 4, 6, 8})
    for (int n = 0; n < d; ++n)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          CHECK(std::abs(chi(n, j, d) * chi(n, k, d) - chi(n, mod_add(j, k, d), d)) <
                1e-12);

  // orthogonality: sum_n chi_n(j) = d [j = 0]
  for (int d : {2, 3, 4, 6, 8})
    for (int j = 0; j < d; ++j) {
      std::complex<double> s = 0;
      for (int n = 0; n < d; ++n) s += chi(n, j, d);
      CHECK(std::abs(s - std::complex<double>(j == 0 ? d : 0, 0)) < 1e-9);
    }
}

TEST_CASE("game_f", "[ditmath]") {
  CHECK(game_f(GameInput::from_bits({1, 0, 0}), 2) == FValue::bot());
  CHECK(game_f(GameInput::from_bits({1, 0, 0}), 6) == FValue::bot());
  CHECK(game_f(GameInput::from_bits({0, 0, 0, 0}), 4) == FValue::of(0));
  CHECK(game_f(GameInput::from_bits({1, 1, 0}), 4) == FValue::of(1));
  CHECK(game_f(GameInput::from_bits({1, 1, 1, 1, 1, 1}), 2) == FValue::of(1));
}

TEST_CASE("game_f is bottom exactly on odd weight", "[ditmath]") {
  for (int n = 2; n <= 6; ++n)
    for (int d : {2, 3, 4}) {
      int bottoms = 0;
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        const GameInput x(mask, n);
        const FValue f = game_f(x, d);
        CHECK(f.bottom == (x.weight() % 2 == 1));
        if (f.bottom) ++bottoms;
        else CHECK(f.value == (x.weight() / 2) % d);
      }
      CHECK(bottoms == (1 << (n - 1)));
    }
}

TEST_CASE("GameInput round-trips bits", "[ditmath]") {
  const GameInput x = GameInput::from_bits({1, 0, 1, 1});
  CHECK(x.weight() == 3);
  CHECK(x.bits() == std::vector<int>{1, 0, 1, 1});
  CHECK_THROWS_AS(GameInput::from_bits({0, 2}), std::invalid_argument);
}
