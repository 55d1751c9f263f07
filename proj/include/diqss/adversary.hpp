#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "diqss/game.hpp"
#include "diqss/quantum.hpp"

// Pluggable source/device corruption models. Each model yields an exact
// per-settings outcome distribution plus a closed-form prediction of the
// protocol's test statistic, so detection claims are checkable against
// Monte Carlo. Attacks act i.i.d. per round, consistent with the causal
// independence assumption.

namespace diqss {

struct AttackModel {
  enum class Kind { kNone, kWhiteNoise, kInterceptResend, kDeterministicDevices };

  Kind kind = Kind::kNone;
  double visibility = 1.0;            // white noise
  std::vector<int> targets;           // intercept-resend, 0-based parties
  std::optional<ClassicalStrategy> devices;

  static AttackModel none() { return AttackModel{}; }

  static AttackModel white_noise(double v) {
    AttackModel m;
    m.kind = Kind::kWhiteNoise;
    m.visibility = v;
    return m;
  }

  static AttackModel intercept_resend(std::vector<int> target_parties) {
    AttackModel m;
    m.kind = Kind::kInterceptResend;
    m.targets = std::move(target_parties);
    return m;
  }

  static AttackModel deterministic_devices(ClassicalStrategy strategy) {
    AttackModel m;
    m.kind = Kind::kDeterministicDevices;
    m.devices = std::move(strategy);
    return m;
  }

  void validate(int num_parties, int dim) const {
    switch (kind) {
      case Kind::kNone:
        break;
      case Kind::kWhiteNoise:
        if (visibility < 0.0 || visibility > 1.0)
          throw std::invalid_argument("AttackModel: visibility must be in [0,1]");
        break;
      case Kind::kInterceptResend: {
        if (targets.empty())
          throw std::invalid_argument("AttackModel: intercept needs a target party");
        for (int t : targets)
          if (t < 0 || t >= num_parties)
            throw std::invalid_argument("AttackModel: target party out of range");
        break;
      }
      case Kind::kDeterministicDevices:
        if (!devices) throw std::invalid_argument("AttackModel: missing strategy");
        if (devices->num_players != num_parties || devices->dim != dim)
          throw std::invalid_argument("AttackModel: strategy shape mismatch");
        devices->validate();
        break;
    }
  }

  // CLI grammar: none | noise:v=0.8 | intercept:targets=1,2 | classical:best.
  // Intercept targets are 1-based (party 1 is the dealer).
  static AttackModel parse(const std::string& descriptor, int num_parties, int dim) {
    if (descriptor == "none") return none();
    const auto colon = descriptor.find(':');
    const std::string head = descriptor.substr(0, colon);
    const std::string rest =
        colon == std::string::npos ? std::string{} : descriptor.substr(colon + 1);
    if (head == "noise") {
      if (rest.rfind("v=", 0) != 0)
        throw std::invalid_argument("attack descriptor: expected noise:v=VALUE");
      return white_noise(std::stod(rest.substr(2)));
    }
    if (head == "intercept") {
      if (rest.rfind("targets=", 0) != 0)
        throw std::invalid_argument("attack descriptor: expected intercept:targets=LIST");
      std::vector<int> targets;
      std::stringstream ss(rest.substr(8));
      std::string tok;
      while (std::getline(ss, tok, ',')) targets.push_back(std::stoi(tok) - 1);
      AttackModel m = intercept_resend(std::move(targets));
      m.validate(num_parties, dim);
      return m;
    }
    if (head == "classical") {
      if (rest != "best")
        throw std::invalid_argument("attack descriptor: expected classical:best");
      return deterministic_devices(
          classical_win_maximize(GameSpec(num_parties, dim)).strategy);
    }
    throw std::invalid_argument("attack descriptor: unknown kind '" + head + "'");
  }

  std::string describe() const {
    switch (kind) {
      case Kind::kNone:
        return "none";
      case Kind::kWhiteNoise: {
        std::ostringstream os;
        os << "noise:v=" << visibility;
        return os.str();
      }
      case Kind::kInterceptResend: {
        std::ostringstream os;
        os << "intercept:targets=";
        for (std::size_t i = 0; i < targets.size(); ++i)
          os << (i ? "," : "") << targets[i] + 1;
        return os.str();
      }
      case Kind::kDeterministicDevices:
        return "classical";
    }
    return "none";
  }
};

namespace detail {

// Eve measures the target particles in the computational (generalized Z)
// basis and forwards the collapsed state; honest parties then measure per
// their settings. The result is the Z-outcome-weighted mixture of the
// collapsed states' product-basis distributions.
inline ProbTable intercept_resend_distribution(int num_parties, int dim,
                                               std::span<const int> targets,
                                               std::span<const int> settings,
                                               Convention conv) {
  const StateVector psi = ghz(num_parties, dim);
  ProbTable out{num_parties, dim, std::vector<double>(psi.size(), 0.0)};

  std::vector<std::size_t> strides(static_cast<std::size_t>(num_parties));
  std::size_t s = 1;
  for (int k = num_parties - 1; k >= 0; --k) {
    strides[static_cast<std::size_t>(k)] = s;
    s *= static_cast<std::size_t>(dim);
  }

  std::size_t z_count = 1;
  for (std::size_t t = 0; t < targets.size(); ++t)
    z_count *= static_cast<std::size_t>(dim);

  for (std::size_t zi = 0; zi < z_count; ++zi) {
    // Digits of zi give Eve's outcome on each target party.
    std::vector<int> z(targets.size());
    std::size_t rem = zi;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      z[t] = static_cast<int>(rem % static_cast<std::size_t>(dim));
      rem /= static_cast<std::size_t>(dim);
    }
    StateVector collapsed = psi;
    for (std::size_t i = 0; i < collapsed.size(); ++i) {
      for (std::size_t t = 0; t < targets.size(); ++t) {
        const std::size_t digit =
            (i / strides[static_cast<std::size_t>(targets[t])]) % static_cast<std::size_t>(dim);
        if (static_cast<int>(digit) != z[t]) {
          collapsed.amp[i] = 0;
          break;
        }
      }
    }
    const double w = collapsed.norm2();
    if (w < 1e-15) continue;
    const double inv = 1.0 / std::sqrt(w);
    for (auto& a : collapsed.amp) a *= inv;
    const ProbTable branch = joint_distribution(collapsed, settings, conv);
    for (std::size_t i = 0; i < out.p.size(); ++i) out.p[i] += w * branch.p[i];
  }
  return out;
}

}  // namespace detail

inline ProbTable corrupted_distribution(const AttackModel& model, int num_parties, int dim,
                                        std::span<const int> settings,
                                        Convention conv = Convention::kMainText) {
  model.validate(num_parties, dim);
  if (static_cast<int>(settings.size()) != num_parties)
    throw std::invalid_argument("corrupted_distribution: settings length != N");
  switch (model.kind) {
    case AttackModel::Kind::kNone:
      return source_distribution(SourceModel(num_parties, dim, 1.0), settings, conv);
    case AttackModel::Kind::kWhiteNoise:
      return source_distribution(SourceModel(num_parties, dim, model.visibility),
                                 settings, conv);
    case AttackModel::Kind::kInterceptResend:
      return detail::intercept_resend_distribution(num_parties, dim, model.targets,
                                                   settings, conv);
    case AttackModel::Kind::kDeterministicDevices: {
      ProbTable table{num_parties, dim,
                      std::vector<double>(state_size(num_parties, dim), 0.0)};
      std::vector<int> a(static_cast<std::size_t>(num_parties));
      for (int k = 0; k < num_parties; ++k)
        a[static_cast<std::size_t>(k)] =
            model.devices->respond(k, settings[static_cast<std::size_t>(k)]);
      table.p[encode_outcome(a, dim)] = 1.0;
      return table;
    }
  }
  throw std::logic_error("corrupted_distribution: unreachable");
}

// Exact expected test statistic under the attack: the game win rate of the
// corrupted distribution with uniform settings.
inline double predicted_c(const AttackModel& model, int num_parties, int dim,
                          Convention conv = Convention::kMainText) {
  model.validate(num_parties, dim);
  double total = 0;
  for (std::uint32_t mask = 0; mask < (1u << num_parties); ++mask) {
    const GameInput x(mask, num_parties);
    const FValue f = game_f(x, dim);
    if (f.bottom) continue;
    const ProbTable table = corrupted_distribution(model, num_parties, dim, x.bits(), conv);
    for (std::size_t i = 0; i < table.p.size(); ++i) {
      if (table.p[i] == 0) continue;
      const auto a = decode_outcome(i, num_parties, dim);
      long long s = 0;
      for (int v : a) s += v;
      if (static_cast<int>(s % dim) == f.value) total += table.p[i];
    }
  }
  return total / std::ldexp(1.0, num_parties);
}

}  // namespace diqss
