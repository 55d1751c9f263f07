#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "diqss/ditmath.hpp"
#include "diqss/rng.hpp"

// Dense state-vector simulation of N qudits: GHZ preparation, the generalized
// X/Y measurement bases, exact Born-rule joint distributions, correlators and
// white-noise mixing. Everything is enumerated exactly; the amplitude cap
// keeps runs desk-scale.

namespace diqss {

using Complex = std::complex<double>;

// Which phase convention defines the setting-1 basis: the main-text form uses
// (alpha - 1/2) in the eigenvector exponent, the Appendix-A form (alpha + 1/2).
// Setting 0 is identical under both.
enum class Convention { kMainText, kAppendixA };

inline const char* convention_name(Convention c) {
  return c == Convention::kMainText ? "main" : "appendixA";
}

inline constexpr std::size_t kAmplitudeCap = std::size_t{1} << 22;

inline std::size_t state_size(int num_parties, int dim) {
  if (num_parties < 1) throw std::invalid_argument("state_size: N must be >= 1");
  if (dim < 2) throw std::invalid_argument("state_size: d must be >= 2");
  std::size_t s = 1;
  for (int k = 0; k < num_parties; ++k) {
    if (s > kAmplitudeCap / static_cast<std::size_t>(dim))
      throw std::length_error("state_size: d^N exceeds the amplitude cap 2^22");
    s *= static_cast<std::size_t>(dim);
  }
  return s;
}

struct StateVector {
  int num_parties = 1;
  int dim = 2;
  std::vector<Complex> amp;

  std::size_t size() const { return amp.size(); }

  double norm2() const {
    double s = 0;
    for (const auto& a : amp) s += std::norm(a);
    return s;
  }
};

// (1/sqrt d) sum_alpha |alpha...alpha>. Party 0 owns the most significant
// base-d digit of the amplitude index.
inline StateVector ghz(int num_parties, int dim) {
  const std::size_t size = state_size(num_parties, dim);
  StateVector psi{num_parties, dim, std::vector<Complex>(size)};
  const std::size_t stride = (size - 1) / static_cast<std::size_t>(dim - 1);
  const double a = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int alpha = 0; alpha < dim; ++alpha)
    psi.amp[static_cast<std::size_t>(alpha) * stride] = a;
  return psi;
}

// Row-major d x d complex matrix.
struct Matrix {
  int dim = 0;
  std::vector<Complex> m;

  explicit Matrix(int d) : dim(d), m(static_cast<std::size_t>(d) * d) {}
  Complex& at(int r, int c) { return m[static_cast<std::size_t>(r) * dim + c]; }
  const Complex& at(int r, int c) const {
    return m[static_cast<std::size_t>(r) * dim + c];
  }
};

// Rows are the normalized eigenvectors of P_{setting}:
//   row alpha, component beta = d^{-1/2} * omega^(-(alpha - setting/2) beta)
// (main text) or with (alpha + setting/2) (Appendix A). The 1/sqrt(d)
// normalization is required for Born-rule probabilities.
inline Matrix measurement_basis(int setting, int dim,
                                Convention conv = Convention::kMainText) {
  if (setting != 0 && setting != 1)
    throw std::invalid_argument("measurement_basis: setting must be 0 or 1");
  if (dim < 2) throw std::invalid_argument("measurement_basis: d must be >= 2");
  Matrix v(dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int alpha = 0; alpha < dim; ++alpha) {
    const long long half =
        conv == Convention::kMainText ? 2LL * alpha - setting : 2LL * alpha + setting;
    for (int beta = 0; beta < dim; ++beta)
      v.at(alpha, beta) = norm * omega_pow(HalfExponent{-half * beta, dim});
  }
  return v;
}

// P_setting = sum_alpha omega^alpha |alpha><alpha| in the chosen basis. The
// power variant uses eigenvalues omega^(n alpha) exactly instead of repeated
// matrix products.
inline Matrix observable_power(int setting, int dim, int n,
                               Convention conv = Convention::kMainText) {
  const Matrix v = measurement_basis(setting, dim, conv);
  Matrix p(dim);
  for (int alpha = 0; alpha < dim; ++alpha) {
    const Complex eig = omega_int_pow(static_cast<long long>(n) * alpha, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        p.at(r, c) += eig * v.at(alpha, r) * std::conj(v.at(alpha, c));
  }
  return p;
}

inline Matrix observable(int setting, int dim,
                         Convention conv = Convention::kMainText) {
  return observable_power(setting, dim, 1, conv);
}

// Applies a single-qudit matrix to one party of the state, in place.
inline void apply_single_qudit(const Matrix& m, StateVector& psi, int party) {
  if (m.dim != psi.dim) throw std::invalid_argument("apply_single_qudit: dim mismatch");
  if (party < 0 || party >= psi.num_parties)
    throw std::invalid_argument("apply_single_qudit: party out of range");
  const int d = psi.dim;
  std::size_t inner = 1;
  for (int k = party + 1; k < psi.num_parties; ++k)
    inner *= static_cast<std::size_t>(d);
  const std::size_t outer = psi.size() / (inner * static_cast<std::size_t>(d));
  std::vector<Complex> scratch(static_cast<std::size_t>(d));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * inner * static_cast<std::size_t>(d) + i;
      for (int r = 0; r < d; ++r) {
        Complex acc = 0;
        for (int c = 0; c < d; ++c)
          acc += m.at(r, c) * psi.amp[base + static_cast<std::size_t>(c) * inner];
        scratch[static_cast<std::size_t>(r)] = acc;
      }
      for (int r = 0; r < d; ++r)
        psi.amp[base + static_cast<std::size_t>(r) * inner] =
            scratch[static_cast<std::size_t>(r)];
    }
  }
}

inline std::size_t encode_outcome(std::span<const int> a, int dim) {
  std::size_t idx = 0;
  for (int v : a) {
    if (v < 0 || v >= dim) throw std::invalid_argument("encode_outcome: digit out of range");
    idx = idx * static_cast<std::size_t>(dim) + static_cast<std::size_t>(v);
  }
  return idx;
}

inline std::vector<int> decode_outcome(std::size_t idx, int num_parties, int dim) {
  std::vector<int> a(static_cast<std::size_t>(num_parties));
  for (int k = num_parties - 1; k >= 0; --k) {
    a[static_cast<std::size_t>(k)] = static_cast<int>(idx % static_cast<std::size_t>(dim));
    idx /= static_cast<std::size_t>(dim);
  }
  return a;
}

// Exact joint outcome distribution; indexed like the state vector.
struct ProbTable {
  int num_parties = 1;
  int dim = 2;
  std::vector<double> p;

  double at(std::span<const int> outcome) const {
    return p[encode_outcome(outcome, dim)];
  }

  double sum() const {
    double s = 0;
    for (double v : p) s += v;
    return s;
  }
};

// Pr(a|x) = |<v_{a_1} x ... x v_{a_N} | psi>|^2, computed by rotating each
// party into its measurement basis and reading amplitudes.
inline ProbTable joint_distribution(const StateVector& psi, std::span<const int> settings,
                                    Convention conv = Convention::kMainText) {
  if (static_cast<int>(settings.size()) != psi.num_parties)
    throw std::invalid_argument("joint_distribution: settings length != N");
  StateVector phi = psi;
  for (int k = 0; k < psi.num_parties; ++k) {
    Matrix v = measurement_basis(settings[static_cast<std::size_t>(k)], psi.dim, conv);
    for (auto& e : v.m) e = std::conj(e);  // amplitude of a_k is <v_{a_k}|.>
    apply_single_qudit(v, phi, k);
  }
  ProbTable table{psi.num_parties, psi.dim, std::vector<double>(phi.size())};
  for (std::size_t i = 0; i < phi.size(); ++i) table.p[i] = std::norm(phi.amp[i]);
  return table;
}

// <psi| P_{x_1}^n x ... x P_{x_N}^n |psi>.
inline Complex product_correlator(const StateVector& psi, std::span<const int> settings,
                                  int n, Convention conv = Convention::kMainText) {
  if (static_cast<int>(settings.size()) != psi.num_parties)
    throw std::invalid_argument("product_correlator: settings length != N");
  StateVector phi = psi;
  for (int k = 0; k < psi.num_parties; ++k)
    apply_single_qudit(
        observable_power(settings[static_cast<std::size_t>(k)], psi.dim, n, conv), phi, k);
  Complex acc = 0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    acc += std::conj(psi.amp[i]) * phi.amp[i];
  return acc;
}

// Same correlator from a distribution: E[omega^(n sum_k a_k)].
inline Complex correlator_from_distribution(const ProbTable& table, int n) {
  Complex acc = 0;
  for (std::size_t i = 0; i < table.p.size(); ++i) {
    if (table.p[i] == 0) continue;
    const auto a = decode_outcome(i, table.num_parties, table.dim);
    long long s = 0;
    for (int v : a) s += v;
    acc += table.p[i] * omega_int_pow(static_cast<long long>(n) * s, table.dim);
  }
  return acc;
}

// GHZ source with white-noise visibility v: the observed statistics are
// v * Born(GHZ) + (1-v) * uniform, which is exactly what measuring the
// isotropic mixture in any product basis yields.
struct SourceModel {
  int num_parties = 3;
  int dim = 2;
  double visibility = 1.0;

  SourceModel(int n, int d, double v) : num_parties(n), dim(d), visibility(v) {
    if (v < 0.0 || v > 1.0)
      throw std::invalid_argument("SourceModel: visibility must be in [0,1]");
  }
};

inline ProbTable source_distribution(const SourceModel& src, std::span<const int> settings,
                                     Convention conv = Convention::kMainText) {
  ProbTable table = joint_distribution(ghz(src.num_parties, src.dim), settings, conv);
  const double v = src.visibility;
  if (v < 1.0) {
    const double u = (1.0 - v) / static_cast<double>(table.p.size());
    for (auto& q : table.p) q = v * q + u;
  }
  return table;
}

// Categorical draw by inverse CDF walk; consumes exactly one uniform.
inline std::vector<int> sample_outcome(const ProbTable& table, RandomStream& rng) {
  const double u = rng.unit();
  double acc = 0;
  std::size_t pick = table.p.size() - 1;
  for (std::size_t i = 0; i < table.p.size(); ++i) {
    acc += table.p[i];
    if (u < acc) {
      pick = i;
      break;
    }
  }
  return decode_outcome(pick, table.num_parties, table.dim);
}

inline std::vector<int> sample(const SourceModel& src, std::span<const int> settings,
                               RandomStream& rng,
                               Convention conv = Convention::kMainText) {
  const ProbTable table = source_distribution(src, settings, conv);
  return sample_outcome(table, rng);
}

}  // namespace diqss
