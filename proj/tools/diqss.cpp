// Command-line front door for the secret-sharing toolkit. Subcommands:
//   bell    quantum value, formula bound and brute-forced LHV maximum
//   game    quantum/classical/paper winning probabilities, Fourier check
//   run     execute the protocol, write the transcript (CSV/JSON)
//   bounds  finite-statistics bound calculators
//   verify  oracle-equivalence self-test, nonzero exit on any failure
// Reports go to stdout: human-readable by default, --json for the machine
// form. Exit codes: 0 ok, 1 usage/internal error, 2 protocol aborted.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "diqss/analysis.hpp"
#include "diqss/protocol.hpp"
#include "diqss/report.hpp"
#include "diqss/verify.hpp"

namespace {

using diqss::json;

struct CommonOpts {
  bool as_json = false;
  bool no_timestamp = false;
  int workers = 1;
  std::string config_path;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("DIQSS_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("DIQSS_SEED", "not a valid unsigned integer");
    }
  }
  return 1;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  json j;
  in >> j;
  if (!j.is_object()) throw CLI::ValidationError("--config", "expected a JSON object");
  return j;
}

// Config file mirrors long flag names; explicitly passed flags win.
template <typename T>
void merge(const json& cfg, const CLI::Option* opt, const char* key, T& value) {
  if (opt->count() > 0) return;
  if (auto it = cfg.find(key); it != cfg.end()) value = it->get<T>();
}

void emit(const json& report, const CommonOpts& common) {
  json out = report;
  if (!common.no_timestamp) {
    const auto now = std::chrono::system_clock::now();
    out["timestamp"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch())
            .count();
  }
  std::cout << out.dump(2) << "\n";
}

std::vector<int> parse_dits(const std::string& text, int dim) {
  std::vector<int> digits;
  if (text.find(',') != std::string::npos) {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) digits.push_back(std::stoi(tok));
  } else {
    for (char c : text) {
      if (c < '0' || c > '9') throw CLI::ValidationError("--secret", "expected digits");
      digits.push_back(c - '0');
    }
  }
  for (int v : digits)
    if (v < 0 || v >= dim) throw CLI::ValidationError("--secret", "dit out of [0, d)");
  return digits;
}

int cmd_bell(int n, int d, const std::string& convention, const CommonOpts& common) {
  const diqss::Convention conv = convention == "appendixA"
                                     ? diqss::Convention::kAppendixA
                                     : diqss::Convention::kMainText;
  const diqss::BellReport report = diqss::bell_report(n, d, conv, common.workers);
  const json j = diqss::bell_report_json(report);
  if (common.as_json) {
    emit(j, common);
    return 0;
  }
  std::cout << "Bell functional, N=" << n << " d=" << d << " convention=" << convention
            << "\n"
            << "  quantum value            " << report.quantum_value << "\n"
            << "  quantum value (main)     " << report.quantum_value_main << "\n"
            << "  quantum value (appA)     " << report.quantum_value_appendix_a << "\n"
            << "  classical bound formula  " << report.classical_bound_formula << "\n"
            << "  LHV brute-force max      " << report.lhv_max << "\n"
            << "  bound gap                " << report.bound_gap
            << (report.bound_attained ? "  (attained)" : "  (strict gap)") << "\n"
            << "  quantum violation        " << (report.quantum_violation ? "yes" : "no")
            << "\n";
  return 0;
}

int cmd_game(int n, int d, const CommonOpts& common) {
  const diqss::GameReport report =
      diqss::game_report(diqss::GameSpec(n, d), diqss::Convention::kMainText,
                         common.workers);
  const json j = diqss::game_report_json(report);
  if (common.as_json) {
    emit(j, common);
    return 0;
  }
  std::cout << "XOR game, N=" << n << " d=" << d << "\n"
            << "  quantum win prob (oracle)     " << report.quantum_win << "\n"
            << "  via characters (corrected)    " << report.characters_win << "\n"
            << "  via characters (paper const)  " << report.characters_paper_constant
            << "\n"
            << "  paper closed form             " << report.paper_win << "\n"
            << "  classical max                 " << report.classical_max << "\n"
            << "  Bell quantum value            " << report.bell_quantum << "\n"
            << "  Fourier identity residual     " << report.fourier_residual << "\n"
            << "  paper/oracle discrepancy      "
            << (report.paper_discrepancy ? "yes" : "no") << "\n";
  return 0;
}

int cmd_run(const diqss::ProtocolConfig& config, const std::string& secret_text,
            const std::string& out_path, const CommonOpts& common) {
  std::optional<diqss::DitString> secret;
  if (!secret_text.empty())
    secret = diqss::DitString(parse_dits(secret_text, config.dim), config.dim);

  const diqss::ProtocolRun r = diqss::run(config, secret);
  diqss::audit_party_isolation(r.transcript, r.result.aborted);

  std::optional<std::string> transcript_path;
  if (!out_path.empty()) {
    transcript_path = out_path;
    std::ofstream csv(out_path + ".csv");
    csv << diqss::transcript_csv(r.transcript);
    std::ofstream js(out_path + ".json");
    js << diqss::transcript_json(r.transcript, config).dump(2) << "\n";
  }

  const json j = diqss::run_report_json(config, r.result, transcript_path);
  if (common.as_json) {
    emit(j, common);
  } else {
    std::cout << "Protocol run, N=" << config.num_parties << " d=" << config.dim
              << " M=" << config.rounds << " attack=" << config.attack.describe() << "\n"
              << "  aborted        " << diqss::abort_name(r.result.aborted) << "\n"
              << "  C statistic    " << r.result.c_statistic << " (threshold "
              << r.result.threshold << ", p_ref " << r.result.p_ref << ")\n"
              << "  test rounds    " << r.result.test_rounds << "\n"
              << "  key rounds     " << r.result.key_rounds << " (supplied "
              << r.result.supplied_secret_len << ", auto " << r.result.auto_filled << ")\n"
              << "  hash verdict   " << diqss::hash_verdict_name(r.result.hash_verdict)
              << "\n";
    if (r.result.hash_verdict != diqss::HashVerdict::kNotRun)
      std::cout << "  recovered == dealer secret: "
                << (r.result.dealer_secret == r.result.recovered_secret ? "yes" : "no")
                << "\n";
    if (transcript_path)
      std::cout << "  transcript     " << *transcript_path << ".{csv,json}\n";
  }
  return r.result.aborted == diqss::AbortKind::kNone ? 0 : 2;
}

int cmd_bounds(const diqss::BoundsInputs& in, const CommonOpts& common) {
  const json j = diqss::bounds_report_json(in);
  if (common.as_json) {
    emit(j, common);
    return 0;
  }
  std::cout << "Finite-statistics bounds\n"
            << "  epsilon_cor                    " << j["epsilon_cor"].get<double>() << "\n"
            << "  epsilon_complete               " << j["epsilon_complete"].get<double>()
            << "\n"
            << "  epsilon_complete (sign flipped) "
            << j["epsilon_complete_sign_flipped"].get<double>() << "\n"
            << "  hoeffding_delta                " << j["hoeffding_delta"].get<double>()
            << "\n";
  if (!j["serfling_lambda"].is_null())
    std::cout << "  serfling_lambda                " << j["serfling_lambda"].get<double>()
              << "\n";
  std::cout << "  (T = " << j["inputs"]["t"].get<long long>() << ")\n";
  return 0;
}

int cmd_verify(const CommonOpts& common) {
  const std::vector<diqss::CheckResult> checks = diqss::run_verification();
  int failures = 0;
  json rows = json::array();
  for (const auto& c : checks) {
    if (!c.pass) ++failures;
    rows.push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  const json j{{"schema", "diqss-report/1"},
               {"command", "verify"},
               {"checks", rows},
               {"pass_count", static_cast<int>(checks.size()) - failures},
               {"fail_count", failures},
               {"all_pass", failures == 0}};
  if (common.as_json) {
    emit(j, common);
  } else {
    for (const auto& c : checks)
      std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                << (c.detail.empty() ? "" : "  [" + c.detail + "]") << "\n";
    if (failures == 0)
      std::cout << "all checks passed\n";
    else
      std::cout << failures << " checks failed\n";
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"device-independent quantum secret sharing toolkit"};
  app.require_subcommand(1);

  CommonOpts common;
  std::uint64_t seed = default_seed();

  app.add_flag("--json", common.as_json, "print the JSON report instead of text");
  app.add_flag("--no-timestamp", common.no_timestamp, "omit the timestamp field");
  app.add_option("--workers", common.workers, "worker threads for searches/experiments")
      ->check(CLI::PositiveNumber);
  app.add_option("--config", common.config_path, "JSON config file mirroring the flags");
  auto* seed_opt = app.add_option("--seed", seed, "master seed (env DIQSS_SEED as fallback)");

  // bell
  int bell_n = 3, bell_d = 2;
  std::string bell_conv = "main";
  auto* bell = app.add_subcommand("bell", "Bell functional report");
  auto* bell_n_opt = bell->add_option("--n", bell_n, "party count");
  auto* bell_d_opt = bell->add_option("--d", bell_d, "local dimension");
  auto* bell_conv_opt = bell->add_option("--convention", bell_conv, "main | appendixA")
                            ->check(CLI::IsMember({"main", "appendixA"}));

  // game
  int game_n = 3, game_d = 2;
  auto* game = app.add_subcommand("game", "XOR game winning probabilities");
  auto* game_n_opt = game->add_option("--n", game_n, "player count");
  auto* game_d_opt = game->add_option("--d", game_d, "local dimension (even)");

  // run
  diqss::ProtocolConfig config;
  std::string attack_text = "none", secret_text, out_path, p_ref_mode = "oracle";
  double p_ref_value = 0.5;
  auto* runc = app.add_subcommand("run", "execute the secret sharing protocol");
  auto* run_n = runc->add_option("--n", config.num_parties, "total parties (dealer + Bobs)");
  auto* run_d = runc->add_option("--d", config.dim, "local dimension (even)");
  auto* run_m = runc->add_option("--rounds", config.rounds, "total rounds M");
  auto* run_mu = runc->add_option("--mu", config.test_prob, "test-round probability");
  auto* run_eta = runc->add_option("--eta", config.noise_tolerance, "noise tolerance");
  auto* run_ec = runc->add_option("--ec", config.hash_tag_len, "hash tag length (symbols)");
  auto* run_attack = runc->add_option(
      "--attack", attack_text, "none | noise:v=V | intercept:targets=LIST | classical:best");
  runc->add_option("--secret", secret_text, "secret dits (digits or comma list)");
  runc->add_option("--out", out_path, "transcript path prefix (.csv/.json appended)");
  auto* run_pref = runc->add_option("--p-ref-mode", p_ref_mode, "oracle | paper | explicit")
                       ->check(CLI::IsMember({"oracle", "paper", "explicit"}));
  runc->add_option("--p-ref", p_ref_value, "reference value for --p-ref-mode explicit");

  // bounds
  diqss::BoundsInputs bounds;
  auto* boundsc = app.add_subcommand("bounds", "finite-statistics bound calculators");
  auto* b_mu = boundsc->add_option("--mu", bounds.mu, "test-round probability");
  auto* b_eta = boundsc->add_option("--eta", bounds.eta, "noise tolerance");
  auto* b_m = boundsc->add_option("--rounds", bounds.rounds, "total rounds M");
  auto* b_ec = boundsc->add_option("--ec", bounds.hash_tag_len, "hash tag length");
  auto* b_d = boundsc->add_option("--d", bounds.dim, "local dimension");
  boundsc->add_option("--t", bounds.test_rounds, "test rounds (default round(mu*M))");
  boundsc->add_option("--eps-test", bounds.eps_test, "Hoeffding tail epsilon");
  boundsc->add_option("--eps-qss", bounds.eps_qss, "Serfling tail epsilon");

  auto* verifyc = app.add_subcommand("verify", "run the oracle-equivalence suite");
  for (auto* sub : {bell, game, runc, boundsc, verifyc}) sub->fallthrough();

  try {
    app.parse(argc, argv);

    const json cfg = load_config(common.config_path);
    merge(cfg, seed_opt, "seed", seed);
    merge(cfg, bell_n_opt, "n", bell_n);
    merge(cfg, bell_d_opt, "d", bell_d);
    merge(cfg, bell_conv_opt, "convention", bell_conv);
    merge(cfg, game_n_opt, "n", game_n);
    merge(cfg, game_d_opt, "d", game_d);
    merge(cfg, run_n, "n", config.num_parties);
    merge(cfg, run_d, "d", config.dim);
    merge(cfg, run_m, "rounds", config.rounds);
    merge(cfg, run_mu, "mu", config.test_prob);
    merge(cfg, run_eta, "eta", config.noise_tolerance);
    merge(cfg, run_ec, "ec", config.hash_tag_len);
    merge(cfg, run_attack, "attack", attack_text);
    merge(cfg, run_pref, "p_ref_mode", p_ref_mode);
    merge(cfg, b_mu, "mu", bounds.mu);
    merge(cfg, b_eta, "eta", bounds.eta);
    merge(cfg, b_m, "rounds", bounds.rounds);
    merge(cfg, b_ec, "ec", bounds.hash_tag_len);
    merge(cfg, b_d, "d", bounds.dim);

    if (bell->parsed()) return cmd_bell(bell_n, bell_d, bell_conv, common);
    if (game->parsed()) return cmd_game(game_n, game_d, common);
    if (runc->parsed()) {
      config.seed = seed;
      config.attack = diqss::AttackModel::parse(attack_text, config.num_parties, config.dim);
      config.p_ref_mode = p_ref_mode == "paper" ? diqss::ProtocolConfig::PRefMode::kPaper
                          : p_ref_mode == "explicit"
                              ? diqss::ProtocolConfig::PRefMode::kExplicit
                              : diqss::ProtocolConfig::PRefMode::kOracle;
      config.p_ref_explicit = p_ref_value;
      return cmd_run(config, secret_text, out_path, common);
    }
    if (boundsc->parsed()) return cmd_bounds(bounds, common);
    if (verifyc->parsed()) return cmd_verify(common);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
