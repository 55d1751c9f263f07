#pragma once

#include <cmath>
#include <optional>
#include <string>

#include <json.hpp>

#include "diqss/analysis.hpp"
#include "diqss/bell.hpp"
#include "diqss/game.hpp"
#include "diqss/protocol.hpp"

// JSON report builders. Keys are emitted sorted (nlohmann's default object
// ordering), so a report is byte-stable for fixed inputs; anything
// non-deterministic (timestamps) is added by the CLI layer behind a flag.
// Schema ids: diqss-report/1 (bell/game/run/verify), diqss-bounds/1,
// diqss-transcript/1.

namespace diqss {

using json = nlohmann::json;

inline json json_number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

inline json bell_report_json(const BellReport& r) {
  json lhv_values = json::array();
  for (int v : r.lhv_argmax.values) lhv_values.push_back(v);
  return json{
      {"schema", "diqss-report/1"},
      {"command", "bell"},
      {"n", r.num_parties},
      {"d", r.dim},
      {"convention", convention_name(r.convention)},
      {"quantum_value", r.quantum_value},
      {"quantum_value_main", r.quantum_value_main},
      {"quantum_value_appendix_a", r.quantum_value_appendix_a},
      {"quantum_attains_d_minus_1_main",
       std::abs(r.quantum_value_main - (r.dim - 1)) <= 1e-9},
      {"quantum_attains_d_minus_1_appendix_a",
       std::abs(r.quantum_value_appendix_a - (r.dim - 1)) <= 1e-9},
      {"classical_bound_formula", r.classical_bound_formula},
      {"lhv_max", r.lhv_max},
      {"lhv_argmax", lhv_values},
      {"bound_gap", r.bound_gap},
      {"bound_attained", r.bound_attained},
      {"quantum_violation", r.quantum_violation},
  };
}

struct GameReport {
  int num_players = 0;
  int dim = 0;
  Convention convention = Convention::kMainText;
  double quantum_win = 0;
  double characters_win = 0;
  double characters_paper_constant = 0;
  double paper_win = 0;
  double classical_max = 0;
  ClassicalStrategy classical_argmax;
  double bell_quantum = 0;
  double fourier_residual = 0;  // |p - (1 + B)/(2d)| for the quantum strategy
  bool paper_discrepancy = false;
};

inline GameReport game_report(const GameSpec& spec,
                              Convention conv = Convention::kMainText,
                              int workers = 1) {
  GameReport r;
  r.num_players = spec.num_players;
  r.dim = spec.dim;
  r.convention = conv;
  r.quantum_win = quantum_win_prob(spec, conv);
  const CharacterExpansion ce = character_expansion(spec, conv);
  r.characters_win = ce.value;
  r.characters_paper_constant = ce.paper_constant_value;
  r.paper_win = paper_win_prob(spec.dim);
  const StrategySearchResult best = classical_win_maximize(spec, workers);
  r.classical_max = best.value;
  r.classical_argmax = best.strategy;
  r.bell_quantum = bell_quantum_value(spec.num_players, spec.dim, conv);
  r.fourier_residual =
      std::abs(r.quantum_win - (1.0 + r.bell_quantum) / (2.0 * spec.dim));
  r.paper_discrepancy = std::abs(r.paper_win - r.quantum_win) > 1e-9;
  return r;
}

inline json game_report_json(const GameReport& r) {
  json strat = json::array();
  for (int v : r.classical_argmax.responses) strat.push_back(v);
  return json{
      {"schema", "diqss-report/1"},
      {"command", "game"},
      {"n", r.num_players},
      {"d", r.dim},
      {"convention", convention_name(r.convention)},
      {"quantum_win_prob", r.quantum_win},
      {"win_prob_via_characters", r.characters_win},
      {"win_prob_characters_paper_constant", r.characters_paper_constant},
      {"paper_win_prob", r.paper_win},
      {"classical_win_max", r.classical_max},
      {"classical_argmax", strat},
      {"bell_quantum_value", r.bell_quantum},
      {"fourier_identity_residual", r.fourier_residual},
      {"paper_discrepancy", r.paper_discrepancy},
  };
}

inline json config_json(const ProtocolConfig& c) {
  const char* mode = c.p_ref_mode == ProtocolConfig::PRefMode::kOracle   ? "oracle"
                     : c.p_ref_mode == ProtocolConfig::PRefMode::kPaper ? "paper"
                                                                        : "explicit";
  return json{
      {"n", c.num_parties},
      {"d", c.dim},
      {"rounds", c.rounds},
      {"mu", c.test_prob},
      {"eta", c.noise_tolerance},
      {"ec", c.hash_tag_len},
      {"p_ref_mode", mode},
      {"attack", c.attack.describe()},
      {"seed", c.seed},
  };
}

inline json hash_json(const HashFunction& h) {
  json rows = json::array();
  for (int r = 0; r < h.tag_len; ++r) {
    json row = json::array();
    for (int c = 0; c < h.input_len; ++c)
      row.push_back(h.matrix[static_cast<std::size_t>(r) * h.input_len + c]);
    rows.push_back(std::move(row));
  }
  return json{{"prime", h.prime},
              {"input_len", h.input_len},
              {"tag_len", h.tag_len},
              {"matrix", rows},
              {"offset", h.offset}};
}

inline json transcript_json(const Transcript& t, const ProtocolConfig& config) {
  json rounds = json::array();
  for (const auto& r : t.rounds) {
    json rec{{"i", r.index}, {"test", r.test}};
    if (!r.settings.empty()) rec["settings"] = r.settings;
    if (!r.outcomes.empty()) rec["outcomes"] = r.outcomes;
    if (r.win) rec["C"] = *r.win;
    if (r.sprime) rec["Sprime"] = *r.sprime;
    rounds.push_back(std::move(rec));
  }
  json j{
      {"schema", "diqss-transcript/1"},
      {"config", config_json(config)},
      {"rounds", rounds},
  };
  j["hash"] = t.hash ? hash_json(*t.hash) : json(nullptr);
  j["hash_tag"] = t.hash ? json(t.hash_tag) : json(nullptr);
  return j;
}

inline json result_json(const ProtocolResult& r) {
  return json{
      {"aborted", abort_name(r.aborted)},
      {"c_statistic", json_number_or_null(r.c_statistic)},
      {"p_ref", r.p_ref},
      {"threshold", r.threshold},
      {"test_rounds", r.test_rounds},
      {"key_rounds", r.key_rounds},
      {"dealer_secret", r.dealer_secret.digits},
      {"recovered_secret", r.recovered_secret.digits},
      {"supplied_secret_len", r.supplied_secret_len},
      {"auto_filled", r.auto_filled},
      {"hash_verdict", hash_verdict_name(r.hash_verdict)},
      {"secrets_equal", r.dealer_secret == r.recovered_secret},
  };
}

inline json run_report_json(const ProtocolConfig& config, const ProtocolResult& r,
                            const std::optional<std::string>& transcript_path) {
  json j{
      {"schema", "diqss-report/1"},
      {"command", "run"},
      {"config", config_json(config)},
      {"result", result_json(r)},
  };
  j["transcript_path"] = transcript_path ? json(*transcript_path) : json(nullptr);
  return j;
}

struct BoundsInputs {
  double mu = 0.5;
  double eta = 0.1;
  int rounds = 200;
  int hash_tag_len = 10;
  int dim = 2;
  long long test_rounds = 0;  // defaults to round(mu * M)
  double eps_test = 0.01;
  double eps_qss = 0.01;
};

inline json bounds_report_json(const BoundsInputs& in) {
  const long long t =
      in.test_rounds > 0
          ? in.test_rounds
          : std::max<long long>(1, std::llround(in.mu * static_cast<double>(in.rounds)));
  json j{
      {"schema", "diqss-bounds/1"},
      {"inputs",
       {{"mu", in.mu},
        {"eta", in.eta},
        {"rounds", in.rounds},
        {"ec", in.hash_tag_len},
        {"d", in.dim},
        {"t", t},
        {"eps_test", in.eps_test},
        {"eps_qss", in.eps_qss}}},
      {"epsilon_cor", epsilon_correct(in.hash_tag_len, in.dim)},
      {"epsilon_complete", epsilon_complete(in.mu, in.eta, in.rounds)},
      {"epsilon_complete_sign_flipped",
       epsilon_complete_sign_flipped(in.mu, in.eta, in.rounds)},
      {"hoeffding_delta", hoeffding_delta(in.eps_test, t)},
      {"sign_note",
       "epsilon_complete uses the Hoeffding exponent exp(-2 eta^2); the "
       "sign-flipped variant exceeds 1 for every eta and is vacuous"},
  };
  j["serfling_lambda"] =
      t < in.rounds ? json(serfling_lambda(in.rounds, t, in.eps_qss)) : json(nullptr);
  return j;
}

}  // namespace diqss
