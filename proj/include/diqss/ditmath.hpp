#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

// Exact arithmetic over Z_d and over the half-step exponent grid of the d-th
// root of unity. Phases are kept as integer counts of half-steps (denominator
// 2d) and only turned into complex numbers at the final evaluation, so
// correlator products accumulate without floating-point drift.

namespace diqss {

// A value in Z_d. The protocol layer restricts d to even values; this module
// accepts any d >= 2 so the odd-d cases stay testable.
struct Dit {
  int value = 0;
  int modulus = 2;

  Dit() = default;
  Dit(int v, int d) : value(v), modulus(d) {
    if (d < 2) throw std::invalid_argument("Dit: modulus must be >= 2");
    if (v < 0 || v >= d) throw std::invalid_argument("Dit: value out of [0, d)");
  }
};

inline int mod_add(int a, int b, int d) {
  int r = (a + b) % d;
  return r < 0 ? r + d : r;
}

inline Dit mod_add(Dit a, Dit b) {
  if (a.modulus != b.modulus)
    throw std::invalid_argument("mod_add: modulus mismatch");
  return Dit(mod_add(a.value, b.value, a.modulus), a.modulus);
}

inline int mod_neg(int a, int d) {
  int r = (-a) % d;
  return r < 0 ? r + d : r;
}

// omega^(numerator/2) with omega = exp(2*pi*i/d). Exponents are equal iff
// their numerators agree modulo 2d.
struct HalfExponent {
  long long numerator = 0;
  int d = 2;

  long long normalized() const {
    const long long m = 2LL * d;
    long long r = numerator % m;
    return r < 0 ? r + m : r;
  }

  HalfExponent operator+(const HalfExponent& o) const {
    if (d != o.d) throw std::invalid_argument("HalfExponent: modulus mismatch");
    return HalfExponent{numerator + o.numerator, d};
  }

  bool operator==(const HalfExponent& o) const {
    return d == o.d && normalized() == o.normalized();
  }
};

inline std::complex<double> omega_pow(const HalfExponent& t) {
  return std::polar(1.0, std::numbers::pi * static_cast<double>(t.normalized()) /
                             static_cast<double>(t.d));
}

// omega^k for an integer exponent k.
inline std::complex<double> omega_int_pow(long long k, int d) {
  return omega_pow(HalfExponent{2 * k, d});
}

// Group character chi_n(j) = omega^(-n j).
inline std::complex<double> chi(int n, int j, int d) {
  return omega_int_pow(-static_cast<long long>(n) * j, d);
}

inline std::complex<double> chi(int n, Dit j) { return chi(n, j.value, j.modulus); }

// A joint question: one bit per party. Party k's bit is bit k of the mask,
// which makes iterating all 2^N inputs a plain counter loop.
struct GameInput {
  std::uint32_t mask = 0;
  int n = 2;

  GameInput(std::uint32_t m, int num_parties) : mask(m), n(num_parties) {
    if (n < 2 || n > 30) throw std::invalid_argument("GameInput: need 2 <= N <= 30");
    if (m >> n) throw std::invalid_argument("GameInput: mask wider than N");
  }

  static GameInput from_bits(const std::vector<int>& bits) {
    std::uint32_t m = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
      if (bits[k] != 0 && bits[k] != 1)
        throw std::invalid_argument("GameInput: bits must be 0/1");
      m |= static_cast<std::uint32_t>(bits[k]) << k;
    }
    return GameInput(m, static_cast<int>(bits.size()));
  }

  int bit(int k) const { return static_cast<int>((mask >> k) & 1u); }
  int weight() const { return std::popcount(mask); }

  std::vector<int> bits() const {
    std::vector<int> b(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) b[static_cast<std::size_t>(k)] = bit(k);
    return b;
  }
};

// f(x) with the distinguished bottom value. Bottom is first-class because the
// Bell and win-probability sums range over all inputs with omega^bottom = 0.
struct FValue {
  bool bottom = true;
  int value = 0;

  static FValue bot() { return FValue{true, 0}; }
  static FValue of(int v) { return FValue{false, v}; }

  bool operator==(const FValue&) const = default;
};

// Bottom on odd Hamming weight; otherwise the unique j in Z_d with
// weight(x) = 2j (mod 2d), i.e. j = (weight/2) mod d.
inline FValue game_f(const GameInput& x, int d) {
  const int w = x.weight();
  if (w % 2 != 0) return FValue::bot();
  return FValue::of((w / 2) % d);
}

}  // namespace diqss
