#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "diqss/ditmath.hpp"
#include "diqss/quantum.hpp"

// The generic Bell functional B in its rewritten form
//   B = 2^(1-N) sum_{n=1}^{d-1} sum_{x, f(x) != bot} omega^(-n f(x)) <prod_j P_{x_j,j}^n>
// evaluated quantum mechanically and on local deterministic assignments,
// plus the closed-form classical bound and an exhaustive LHV maximizer.
// Summing n over 1..d-1 already contains the complex conjugate of the
// defining expression, because conjugation maps the n term to the d-n term.

namespace diqss {

inline double classical_bound(int num_parties, int dim) {
  if (num_parties < 2) throw std::invalid_argument("classical_bound: N must be >= 2");
  if (dim < 2) throw std::invalid_argument("classical_bound: d must be >= 2");
  if (dim % 2 == 0 && num_parties % 2 == 0)
    return dim * (std::ldexp(1.0, -num_parties / 2) + 0.5) - 1.0;
  if (dim % 2 == 0)
    return dim * (std::ldexp(1.0, -(num_parties + 1) / 2) + 0.5) - 1.0;
  return static_cast<double>(dim - 1);
}

// One exponent value per (party, setting): the local variable P_{x,j} takes
// the value omega^(values[2*party + setting]).
struct LhvAssignment {
  int num_parties = 2;
  int dim = 2;
  std::vector<int> values;

  int exponent(int party, int setting) const {
    return values[static_cast<std::size_t>(2 * party + setting)];
  }

  void validate() const {
    if (values.size() != static_cast<std::size_t>(2 * num_parties))
      throw std::invalid_argument("LhvAssignment: need 2N values");
    for (int v : values)
      if (v < 0 || v >= dim)
        throw std::invalid_argument("LhvAssignment: exponent out of [0, d)");
  }
};

namespace detail {

// Precomputed tables for evaluating B on deterministic assignments: the list
// of even-weight inputs with their f values, and cos(2 pi r / d). Phase
// accumulation happens on integer residues; floats appear once per value.
struct BellAssignmentEvaluator {
  int num_parties;
  int dim;
  int f_sign;  // -1: coefficient omega^(-n f) (main text); +1: Appendix A
  std::vector<std::uint32_t> even_masks;
  std::vector<int> f_values;
  std::vector<double> cos_table;

  BellAssignmentEvaluator(int n, int d, Convention conv)
      : num_parties(n), dim(d),
        f_sign(conv == Convention::kMainText ? -1 : +1) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      const GameInput x(mask, n);
      const FValue f = game_f(x, d);
      if (f.bottom) continue;
      even_masks.push_back(mask);
      f_values.push_back(f.value);
    }
    cos_table.resize(static_cast<std::size_t>(d));
    for (int r = 0; r < d; ++r)
      cos_table[static_cast<std::size_t>(r)] =
          std::cos(2.0 * std::numbers::pi * r / d);
  }

  // values[2*party + setting] = exponent of party's variable at that setting.
  double evaluate(std::span<const int> values) const {
    std::vector<long long> counts(static_cast<std::size_t>(dim), 0);
    for (std::size_t xi = 0; xi < even_masks.size(); ++xi) {
      const std::uint32_t mask = even_masks[xi];
      long long s = 0;
      for (int j = 0; j < num_parties; ++j)
        s += values[static_cast<std::size_t>(2 * j + ((mask >> j) & 1u))];
      s += f_sign * f_values[xi];
      const int base = static_cast<int>(((s % dim) + dim) % dim);
      // sum_{n=1}^{d-1} omega^(n base): accumulate each residue n*base.
      long long e = 0;
      for (int n = 1; n < dim; ++n) {
        e += base;
        if (e >= dim) e -= dim;
        ++counts[static_cast<std::size_t>(e)];
      }
    }
    double total = 0;
    for (int r = 0; r < dim; ++r)
      total += static_cast<double>(counts[static_cast<std::size_t>(r)]) *
               cos_table[static_cast<std::size_t>(r)];
    return total / std::ldexp(1.0, num_parties - 1);
  }
};

}  // namespace detail

inline double bell_of_assignment(const LhvAssignment& assignment,
                                 Convention conv = Convention::kMainText) {
  assignment.validate();
  const detail::BellAssignmentEvaluator ev(assignment.num_parties, assignment.dim, conv);
  return ev.evaluate(assignment.values);
}

// Quantum value of B on GHZ(N,d) with the convention's observables. The n and
// d-n terms are conjugate, so the imaginary residue vanishes; only the real
// part is returned.
inline double bell_quantum_value(int num_parties, int dim,
                                 Convention conv = Convention::kMainText) {
  if (num_parties < 2) throw std::invalid_argument("bell_quantum_value: N must be >= 2");
  const StateVector psi = ghz(num_parties, dim);
  const int f_sign = conv == Convention::kMainText ? -1 : +1;
  Complex total = 0;
  for (int n = 1; n < dim; ++n) {
    for (std::uint32_t mask = 0; mask < (1u << num_parties); ++mask) {
      const GameInput x(mask, num_parties);
      const FValue f = game_f(x, dim);
      if (f.bottom) continue;
      const Complex coef =
          omega_int_pow(static_cast<long long>(f_sign) * n * f.value, dim);
      total += coef * product_correlator(psi, x.bits(), n, conv);
    }
  }
  return total.real() / std::ldexp(1.0, num_parties - 1);
}

struct LhvSearchResult {
  double value = 0;
  LhvAssignment assignment;
  std::uint64_t index = 0;  // mixed-radix rank of the maximizer
};

inline constexpr std::uint64_t kLhvSearchCap = 10'000'000;

namespace detail {

inline void decode_assignment(std::uint64_t idx, int dim, std::span<int> values) {
  for (auto& v : values) {
    v = static_cast<int>(idx % static_cast<std::uint64_t>(dim));
    idx /= static_cast<std::uint64_t>(dim);
  }
}

}  // namespace detail

// Exhaustive maximum of B over all d^(2N) deterministic assignments.
// Assignments are ranked in mixed-radix order (digit 2*party+setting, least
// significant first); ties resolve to the lowest rank, so the result is
// deterministic for any worker count.
inline LhvSearchResult lhv_maximize(int num_parties, int dim,
                                    Convention conv = Convention::kMainText,
                                    int workers = 1) {
  std::uint64_t total = 1;
  for (int k = 0; k < 2 * num_parties; ++k) {
    if (total > kLhvSearchCap / static_cast<std::uint64_t>(dim))
      throw std::length_error("lhv_maximize: d^(2N) exceeds the search cap");
    total *= static_cast<std::uint64_t>(dim);
  }
  const detail::BellAssignmentEvaluator ev(num_parties, dim, conv);

  struct Best {
    double value = -1e300;
    std::uint64_t index = 0;
  };
  auto scan = [&](std::uint64_t lo, std::uint64_t hi) {
    Best best;
    std::vector<int> values(static_cast<std::size_t>(2 * num_parties));
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      detail::decode_assignment(idx, dim, values);
      const double v = ev.evaluate(values);
      if (v > best.value) {
        best.value = v;
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
      if (b.value > best.value || (b.value == best.value && b.index < best.index))
        best = b;
    }
  }

  LhvAssignment argmax{num_parties, dim,
                       std::vector<int>(static_cast<std::size_t>(2 * num_parties))};
  detail::decode_assignment(best.index, dim, argmax.values);
  return LhvSearchResult{best.value, std::move(argmax), best.index};
}

// Side-by-side report of the quantum value, the closed-form classical bound,
// and the brute-forced LHV maximum. The bound is recorded as an inequality:
// any strict gap to the brute-force maximum is flagged, never assumed away.
// Both phase conventions' quantum values are listed so the comparison stays
// visible.
struct BellReport {
  int num_parties = 0;
  int dim = 0;
  Convention convention = Convention::kMainText;
  double quantum_value = 0;
  double quantum_value_main = 0;
  double quantum_value_appendix_a = 0;
  double classical_bound_formula = 0;
  double lhv_max = 0;
  LhvAssignment lhv_argmax;
  double bound_gap = 0;       // formula - brute force
  bool bound_attained = false;
  bool quantum_violation = false;  // quantum_value > lhv_max
};

inline BellReport bell_report(int num_parties, int dim,
                              Convention conv = Convention::kMainText,
                              int workers = 1) {
  BellReport r;
  r.num_parties = num_parties;
  r.dim = dim;
  r.convention = conv;
  r.quantum_value_main = bell_quantum_value(num_parties, dim, Convention::kMainText);
  r.quantum_value_appendix_a =
      bell_quantum_value(num_parties, dim, Convention::kAppendixA);
  r.quantum_value =
      conv == Convention::kMainText ? r.quantum_value_main : r.quantum_value_appendix_a;
  r.classical_bound_formula = classical_bound(num_parties, dim);
  LhvSearchResult lhv = lhv_maximize(num_parties, dim, conv, workers);
  r.lhv_max = lhv.value;
  r.lhv_argmax = std::move(lhv.assignment);
  r.bound_gap = r.classical_bound_formula - r.lhv_max;
  r.bound_attained = std::abs(r.bound_gap) <= 1e-9;
  r.quantum_violation = r.quantum_value > r.lhv_max + 1e-9;
  return r;
}

}  // namespace diqss
