#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <map>

#include "diqss/quantum.hpp"

using namespace diqss;

namespace {

bool close(Complex a, Complex b, double tol = 1e-9) { return std::abs(a - b) < tol; }

}  // namespace

TEST_CASE("ghz amplitudes", "[quantum]") {
  const double r2 = 1.0 / std::sqrt(2.0);
  const StateVector bell = ghz(2, 2);
  REQUIRE(bell.amp.size() == 4);
  CHECK(close(bell.amp[0], r2));
  CHECK(close(bell.amp[1], 0.0));
  CHECK(close(bell.amp[2], 0.0));
  CHECK(close(bell.amp[3], r2));

  const StateVector one = ghz(1, 3);
  for (int i = 0; i < 3; ++i) CHECK(close(one.amp[i], 1.0 / std::sqrt(3.0)));

  const StateVector g3 = ghz(3, 2);
  for (std::size_t i = 0; i < 8; ++i) {
    if (i == 0 || i == 7) CHECK(close(g3.amp[i], r2));
    else CHECK(close(g3.amp[i], 0.0));
  }
  CHECK(std::abs(g3.norm2() - 1.0) < 1e-9);
}

TEST_CASE("amplitude cap", "[quantum]") {
  CHECK_THROWS_AS(ghz(23, 2), std::length_error);   // 2^23 > 2^22
  CHECK_NOTHROW(state_size(22, 2));                 // exactly at the cap
  CHECK_THROWS_AS(state_size(10, 8), std::length_error);
}

TEST_CASE("measurement bases at d = 2", "[quantum]") {
  const double r2 = 1.0 / std::sqrt(2.0);
  const Matrix x = measurement_basis(0, 2);
  CHECK(close(x.at(0, 0), r2));
  CHECK(close(x.at(0, 1), r2));
  CHECK(close(x.at(1, 0), r2));
  CHECK(close(x.at(1, 1), -r2));

  const Matrix y = measurement_basis(1, 2);
  CHECK(close(y.at(0, 0), r2));
  CHECK(close(y.at(0, 1), Complex(0, r2)));
}

TEST_CASE("bases are orthonormal for both conventions", "[quantum]") {
  for (int d : {2, 3, 4, 6, 8})
    for (Convention conv : {Convention::kMainText, Convention::kAppendixA})
      for (int setting : {0, 1}) {
        const Matrix v = measurement_basis(setting, d, conv);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            Complex g = 0;
            for (int c = 0; c < d; ++c) g += std::conj(v.at(a, c)) * v.at(b, c);
            CHECK(close(g, a == b ? 1.0 : 0.0));
          }
      }
}

TEST_CASE("observables reduce to Pauli X and Y at d = 2", "[quantum]") {
  const Matrix px = observable(0, 2);
  CHECK(close(px.at(0, 0), 0.0));
  CHECK(close(px.at(0, 1), 1.0));
  CHECK(close(px.at(1, 0), 1.0));
  CHECK(close(px.at(1, 1), 0.0));

  const Matrix py = observable(1, 2);
  CHECK(close(py.at(0, 0), 0.0));
  CHECK(close(py.at(0, 1), Complex(0, -1)));
  CHECK(close(py.at(1, 0), Complex(0, 1)));
  CHECK(close(py.at(1, 1), 0.0));
}

TEST_CASE("observable^d is the identity", "[quantum]") {
  for (int d : {2, 3, 4, 6, 8})
    for (Convention conv : {Convention::kMainText, Convention::kAppendixA})
      for (int setting : {0, 1}) {
        const Matrix pd = observable_power(setting, d, d, conv);
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) CHECK(close(pd.at(r, c), r == c ? 1.0 : 0.0));
      }
}

TEST_CASE("character decomposition of observable powers", "[quantum]") {
  // sum_a conj(chi_n(a)) |a><a| = P^n for every setting, d <= 8, n < d.
  for (int d = 2; d <= 8; ++d)
    for (int setting : {0, 1})
      for (int n = 1; n < d; ++n) {
        const Matrix v = measurement_basis(setting, d);
        const Matrix pn = observable_power(setting, d, n);
        Matrix sum(d);
        for (int a = 0; a < d; ++a) {
          const Complex coef = std::conj(chi(n, a, d));
          for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
              sum.at(r, c) += coef * v.at(a, r) * std::conj(v.at(a, c));
        }
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) CHECK(close(sum.at(r, c), pn.at(r, c)));
      }
}

TEST_CASE("joint distribution of the Bell state", "[quantum]") {
  const ProbTable t = joint_distribution(ghz(2, 2), std::vector<int>{0, 0});
  CHECK(t.at(std::vector<int>{0, 0}) == Catch::Approx(0.5).margin(1e-9));
  CHECK(t.at(std::vector<int>{1, 1}) == Catch::Approx(0.5).margin(1e-9));
  CHECK(t.at(std::vector<int>{0, 1}) == Catch::Approx(0.0).margin(1e-9));
  CHECK(t.at(std::vector<int>{1, 0}) == Catch::Approx(0.0).margin(1e-9));
  CHECK(t.sum() == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("joint distribution respects the GHZ sum rule", "[quantum]") {
  // All-X outcomes: nonzero probability exactly on sum = 0 (mod d), each
  // equal to d^(1-N).
  for (auto [n, d] : std::vector<std::pair<int, int>>{{3, 2}, {3, 4}, {2, 4}, {4, 2}}) {
    const ProbTable t = joint_distribution(ghz(n, d), std::vector<int>(n, 0));
    for (std::size_t i = 0; i < t.p.size(); ++i) {
      const auto a = decode_outcome(i, n, d);
      long long s = 0;
      for (int v : a) s += v;
      if (s % d == 0)
        CHECK(t.p[i] == Catch::Approx(std::pow(d, 1 - n)).margin(1e-9));
      else
        CHECK(t.p[i] == Catch::Approx(0.0).margin(1e-9));
    }
  }
}

TEST_CASE("dimension mismatch is rejected", "[quantum]") {
  CHECK_THROWS_AS(joint_distribution(ghz(3, 2), std::vector<int>{0, 0}),
                  std::invalid_argument);
}

TEST_CASE("sampling with full visibility stays on the GHZ support", "[quantum]") {
  const SourceModel src(3, 2, 1.0);
  const ProbTable t = source_distribution(src, std::vector<int>{0, 0, 0});
  RandomStream rng(42);
  for (int i = 0; i < 10'000; ++i) {
    const auto a = sample_outcome(t, rng);
    CHECK((a[0] + a[1] + a[2]) % 2 == 0);
  }
}

TEST_CASE("zero visibility sampling is uniform", "[quantum]") {
  const SourceModel src(2, 2, 0.0);
  const ProbTable t = source_distribution(src, std::vector<int>{0, 1});
  for (double p : t.p) CHECK(p == Catch::Approx(0.25).margin(1e-12));

  RandomStream rng(7);
  std::map<std::size_t, int> counts;
  const int draws = 100'000;
  for (int i = 0; i < draws; ++i)
    counts[encode_outcome(sample_outcome(t, rng), 2)]++;
  const double expect = draws / 4.0;
  const double sigma = std::sqrt(draws * 0.25 * 0.75);
  for (const auto& [idx, c] : counts) CHECK(std::abs(c - expect) < 3 * sigma);
}

TEST_CASE("sampling is deterministic per seed", "[quantum]") {
  const SourceModel src(3, 2, 0.7);
  const std::vector<int> settings{0, 1, 1};
  std::vector<std::vector<int>> first, second;
  {
    RandomStream rng(99);
    for (int i = 0; i < 50; ++i) first.push_back(sample(src, settings, rng));
  }
  {
    RandomStream rng(99);
    for (int i = 0; i < 50; ++i) second.push_back(sample(src, settings, rng));
  }
  CHECK(first == second);
}

TEST_CASE("product correlators on GHZ", "[quantum]") {
  const StateVector g3 = ghz(3, 2);
  CHECK(close(product_correlator(g3, std::vector<int>{0, 0, 0}, 1), 1.0));
  CHECK(close(product_correlator(g3, std::vector<int>{0, 1, 1}, 1), -1.0));
}

TEST_CASE("correlator magnitude is bounded by one", "[quantum]") {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 3}, {3, 4}, {2, 6}}) {
    const StateVector psi = ghz(n, d);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<int> settings;
      for (int k = 0; k < n; ++k) settings.push_back((mask >> k) & 1u);
      for (int pw = 1; pw < d; ++pw)
        CHECK(std::abs(product_correlator(psi, settings, pw)) <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("both correlator evaluation paths agree", "[quantum]") {
  for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {2, 4}, {3, 4}}) {
    const StateVector psi = ghz(n, d);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<int> settings;
      for (int k = 0; k < n; ++k) settings.push_back((mask >> k) & 1u);
      const ProbTable t = joint_distribution(psi, settings);
      for (int pw = 1; pw < d; ++pw)
        CHECK(close(product_correlator(psi, settings, pw),
                    correlator_from_distribution(t, pw)));
    }
  }
}

TEST_CASE("white noise mixes toward uniform", "[quantum]") {
  const std::vector<int> settings{0, 0, 0};
  const ProbTable ideal = source_distribution(SourceModel(3, 2, 1.0), settings);
  const ProbTable mixed = source_distribution(SourceModel(3, 2, 0.6), settings);
  for (std::size_t i = 0; i < ideal.p.size(); ++i)
    CHECK(mixed.p[i] == Catch::Approx(0.6 * ideal.p[i] + 0.4 / 8.0).margin(1e-12));
  CHECK_THROWS_AS(SourceModel(3, 2, 1.5), std::invalid_argument);
}
