#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "diqss/adversary.hpp"
#include "diqss/ditmath.hpp"
#include "diqss/game.hpp"
#include "diqss/quantum.hpp"
#include "diqss/rng.hpp"

// The secret sharing protocol, end to end: per-round test/key split, the
// test statistic C with its abort rule, share distribution through
// generalized-X measurements, recovery, and two-universal-hash verification.
// Parties interact only through the public Transcript; key-round measurement
// results stay in per-party private views and reach the Transcript solely as
// the masked announcements S'. Rounds are i.i.d. with per-round substreams,
// so a (config, secret, seed) triple fixes the Transcript bit for bit.

namespace diqss {

struct DitString {
  std::vector<int> digits;
  int modulus = 2;

  DitString() = default;
  DitString(std::vector<int> ds, int d) : digits(std::move(ds)), modulus(d) {
    for (int v : digits)
      if (v < 0 || v >= d) throw std::invalid_argument("DitString: digit out of [0, d)");
  }

  std::size_t size() const { return digits.size(); }
  bool operator==(const DitString&) const = default;
};

// Dealer's masking step: S' = S + S_A (mod d).
inline int share_round(int secret, int dealer_share, int dim) {
  if (secret < 0 || secret >= dim || dealer_share < 0 || dealer_share >= dim)
    throw std::invalid_argument("share_round: dit out of [0, d)");
  return mod_add(secret, dealer_share, dim);
}

// Participants' step: S-hat = S' + sum_k S_{B_k} (mod d). Equals the secret
// whenever sum_k S_{B_k} = -S_A (mod d), which the GHZ support guarantees.
inline int recover_round(int sprime, std::span<const int> shares, int dim) {
  if (sprime < 0 || sprime >= dim)
    throw std::invalid_argument("recover_round: dit out of [0, d)");
  int acc = sprime;
  for (int s : shares) {
    if (s < 0 || s >= dim) throw std::invalid_argument("recover_round: share out of [0, d)");
    acc = mod_add(acc, s, dim);
  }
  return acc;
}

inline int smallest_prime_geq(int n) {
  if (n < 2) return 2;
  for (int c = n;; ++c) {
    bool prime = true;
    for (int f = 2; f * f <= c; ++f)
      if (c % f == 0) {
        prime = false;
        break;
      }
    if (prime) return c;
  }
}

// Random affine map GF(p)^L -> GF(p)^tag_len with p the smallest prime >= d
// and dits embedded digit-wise. For fixed s != s', Pr[tag collision] =
// p^-tag_len <= d^-tag_len: exactly two-universal, with no ring-Z_d pitfalls
// for composite even d.
struct HashFunction {
  int dit_modulus = 2;
  int prime = 2;
  int input_len = 0;
  int tag_len = 1;
  std::vector<int> matrix;  // tag_len x input_len, row-major
  std::vector<int> offset;  // tag_len
};

inline HashFunction hash_sample(int dim, int input_len, int tag_len, RandomStream& rng) {
  if (dim < 2) throw std::invalid_argument("hash_sample: d must be >= 2");
  if (input_len < 0) throw std::invalid_argument("hash_sample: bad input length");
  if (tag_len < 1) throw std::invalid_argument("hash_sample: tag length must be >= 1");
  HashFunction h;
  h.dit_modulus = dim;
  h.prime = smallest_prime_geq(dim);
  h.input_len = input_len;
  h.tag_len = tag_len;
  h.matrix.resize(static_cast<std::size_t>(tag_len) * static_cast<std::size_t>(input_len));
  h.offset.resize(static_cast<std::size_t>(tag_len));
  for (auto& v : h.matrix) v = rng.below(h.prime);
  for (auto& v : h.offset) v = rng.below(h.prime);
  return h;
}

inline std::vector<int> hash_apply(const HashFunction& h, const DitString& s) {
  if (static_cast<int>(s.size()) != h.input_len)
    throw std::invalid_argument("hash_apply: input length mismatch");
  if (s.modulus != h.dit_modulus)
    throw std::invalid_argument("hash_apply: modulus mismatch");
  std::vector<int> tag(static_cast<std::size_t>(h.tag_len));
  for (int r = 0; r < h.tag_len; ++r) {
    long long acc = h.offset[static_cast<std::size_t>(r)];
    const std::size_t row = static_cast<std::size_t>(r) * static_cast<std::size_t>(h.input_len);
    for (int c = 0; c < h.input_len; ++c)
      acc += static_cast<long long>(h.matrix[row + static_cast<std::size_t>(c)]) *
             s.digits[static_cast<std::size_t>(c)];
    tag[static_cast<std::size_t>(r)] = static_cast<int>(acc % h.prime);
  }
  return tag;
}

struct ProtocolConfig {
  int num_parties = 3;       // dealer + (num_parties - 1) participants
  int dim = 2;
  int rounds = 200;          // M
  double test_prob = 0.5;    // mu
  double noise_tolerance = 0.1;  // eta
  int hash_tag_len = 10;     // epsilon_EC, in field symbols

  enum class PRefMode { kOracle, kPaper, kExplicit };
  PRefMode p_ref_mode = PRefMode::kOracle;
  double p_ref_explicit = 0.5;

  std::uint64_t seed = 1;
  AttackModel attack;

  void validate() const {
    if (num_parties < 3) throw std::invalid_argument("ProtocolConfig: need N >= 3 parties");
    if (dim < 2 || dim % 2 != 0)
      throw std::invalid_argument("ProtocolConfig: d must be even and >= 2");
    if (rounds < 1) throw std::invalid_argument("ProtocolConfig: M must be >= 1");
    if (test_prob <= 0.0 || test_prob >= 1.0)
      throw std::invalid_argument("ProtocolConfig: mu must be in (0,1)");
    if (noise_tolerance <= 0.0 || noise_tolerance >= 1.0)
      throw std::invalid_argument("ProtocolConfig: eta must be in (0,1)");
    if (hash_tag_len < 1) throw std::invalid_argument("ProtocolConfig: ec length must be >= 1");
    attack.validate(num_parties, dim);
  }
};

// The reference winning probability in the abort rule C < p_ref - eta.
// kOracle uses the enumerated quantum value (1/2); kPaper reproduces the
// paper's closed form literally, under which every honest run at d = 2
// aborts unless eta >= 0.25.
inline double resolve_p_ref(const ProtocolConfig& config) {
  switch (config.p_ref_mode) {
    case ProtocolConfig::PRefMode::kOracle:
      return quantum_win_prob(GameSpec(config.num_parties, config.dim));
    case ProtocolConfig::PRefMode::kPaper:
      return paper_win_prob(config.dim);
    case ProtocolConfig::PRefMode::kExplicit:
      return config.p_ref_explicit;
  }
  throw std::logic_error("resolve_p_ref: unreachable");
}

struct RoundRecord {
  int index = 0;
  bool test = false;
  std::vector<int> settings;      // public after announcement; empty if never measured
  std::vector<int> outcomes;      // announced for test rounds only
  std::optional<int> win;         // C_i, test rounds only
  std::optional<int> sprime;      // S'_i, key rounds only
};

// Mean of C_i over test rounds.
inline double test_statistic(std::span<const RoundRecord> records) {
  long long tests = 0, wins = 0;
  for (const auto& r : records) {
    if (!r.test) continue;
    if (!r.win) throw std::invalid_argument("test_statistic: test round without C_i");
    ++tests;
    wins += *r.win;
  }
  if (tests == 0) throw std::invalid_argument("test_statistic: no test rounds");
  return static_cast<double>(wins) / static_cast<double>(tests);
}

// Everything publicly communicated, and nothing else.
struct Transcript {
  int num_parties = 0;
  int dim = 0;
  std::vector<RoundRecord> rounds;
  std::optional<HashFunction> hash;  // announced together with the tag
  std::vector<int> hash_tag;
};

enum class AbortKind { kNone, kTestAbort, kEcAbort };

inline const char* abort_name(AbortKind k) {
  switch (k) {
    case AbortKind::kNone: return "no";
    case AbortKind::kTestAbort: return "test-abort";
    case AbortKind::kEcAbort: return "ec-abort";
  }
  return "?";
}

enum class HashVerdict { kNotRun, kMatch, kMismatch };

inline const char* hash_verdict_name(HashVerdict v) {
  switch (v) {
    case HashVerdict::kNotRun: return "not-run";
    case HashVerdict::kMatch: return "match";
    case HashVerdict::kMismatch: return "mismatch";
  }
  return "?";
}

struct ProtocolResult {
  AbortKind aborted = AbortKind::kNone;
  double c_statistic = std::numeric_limits<double>::quiet_NaN();
  double p_ref = 0;
  double threshold = 0;  // p_ref - eta
  int test_rounds = 0;
  int key_rounds = 0;
  DitString dealer_secret;     // per-key-round dits, supplied then auto-filled
  DitString recovered_secret;  // participants' S-hat string
  int supplied_secret_len = 0;
  int auto_filled = 0;
  HashVerdict hash_verdict = HashVerdict::kNotRun;
};

struct ProtocolRun {
  ProtocolResult result;
  Transcript transcript;
};

// A participant's private view: their own key-round outcomes, in key-round
// order. Recovery reads only these plus the Transcript.
struct ParticipantView {
  int party = 1;
  std::vector<int> key_outcomes;
};

inline DitString recover_secret(const Transcript& transcript,
                                std::span<const ParticipantView> participants, int dim) {
  std::vector<int> digits;
  std::size_t key_pos = 0;
  std::vector<int> shares(participants.size());
  for (const auto& r : transcript.rounds) {
    if (r.test || !r.sprime) continue;
    for (std::size_t k = 0; k < participants.size(); ++k)
      shares[k] = participants[k].key_outcomes[key_pos];
    digits.push_back(recover_round(*r.sprime, shares, dim));
    ++key_pos;
  }
  return DitString(std::move(digits), dim);
}

// Structural check that the public record leaks nothing measured in key
// rounds: test rounds carry settings, outcomes and C_i; key rounds carry at
// most the all-zero settings and S', never outcomes.
inline void audit_party_isolation(const Transcript& transcript, AbortKind aborted) {
  for (const auto& r : transcript.rounds) {
    if (r.test) {
      if (r.outcomes.size() != static_cast<std::size_t>(transcript.num_parties) || !r.win ||
          r.sprime)
        throw std::logic_error("audit: malformed test round record");
    } else {
      if (!r.outcomes.empty()) throw std::logic_error("audit: key-round outcomes leaked");
      if (r.win) throw std::logic_error("audit: key round carries C_i");
      if (aborted == AbortKind::kTestAbort) {
        if (r.sprime || !r.settings.empty())
          throw std::logic_error("audit: key round measured despite test abort");
      } else {
        if (!r.sprime) throw std::logic_error("audit: key round missing S'");
        for (int s : r.settings)
          if (s != 0) throw std::logic_error("audit: key round with non-zero setting");
      }
    }
  }
  if (aborted == AbortKind::kTestAbort && transcript.hash)
    throw std::logic_error("audit: hash announced despite test abort");
}

// Scheme execution. Per-round substream draw order: the T_i coin first, then
// for test rounds N setting bits and one outcome draw, for key rounds one
// outcome draw. Key rounds re-derive their stream in the sharing phase, so
// nothing is measured before the test passes, yet the transcript is
// independent of phase boundaries.
inline ProtocolRun run(const ProtocolConfig& config,
                       const std::optional<DitString>& secret = std::nullopt) {
  config.validate();
  const int n = config.num_parties;
  const int d = config.dim;

  // Alice's T_i coins, pre-drawn to size the secret before anything runs.
  std::vector<char> is_test(static_cast<std::size_t>(config.rounds));
  int key_count = 0;
  for (int i = 0; i < config.rounds; ++i) {
    RandomStream rs(derive_seed(config.seed, kStreamRound, static_cast<std::uint64_t>(i)));
    is_test[static_cast<std::size_t>(i)] = rs.bernoulli(config.test_prob) ? 1 : 0;
    if (!is_test[static_cast<std::size_t>(i)]) ++key_count;
  }

  if (secret) {
    if (secret->modulus != d)
      throw std::invalid_argument("run: secret modulus != protocol d");
    if (static_cast<int>(secret->size()) > key_count)
      throw std::invalid_argument("run: secret longer than available key rounds");
  }

  ProtocolRun out;
  out.transcript.num_parties = n;
  out.transcript.dim = d;
  out.transcript.rounds.resize(static_cast<std::size_t>(config.rounds));
  ProtocolResult& result = out.result;
  result.p_ref = resolve_p_ref(config);
  result.threshold = result.p_ref - config.noise_tolerance;
  result.key_rounds = key_count;
  result.supplied_secret_len = secret ? static_cast<int>(secret->size()) : 0;
  result.auto_filled = key_count - result.supplied_secret_len;

  // Exact per-settings outcome distributions, shared across rounds.
  std::unordered_map<std::uint32_t, ProbTable> tables;
  auto table_for = [&](const std::vector<int>& settings) -> const ProbTable& {
    std::uint32_t key = 0;
    for (std::size_t k = 0; k < settings.size(); ++k)
      key |= static_cast<std::uint32_t>(settings[k]) << k;
    auto it = tables.find(key);
    if (it == tables.end())
      it = tables.emplace(key, corrupted_distribution(config.attack, n, d, settings)).first;
    return it->second;
  };

  // Phase 1: test rounds are measured and announced as they happen.
  long long test_wins = 0;
  for (int i = 0; i < config.rounds; ++i) {
    RoundRecord& rec = out.transcript.rounds[static_cast<std::size_t>(i)];
    rec.index = i;
    rec.test = is_test[static_cast<std::size_t>(i)] != 0;
    if (!rec.test) continue;
    RandomStream rs(derive_seed(config.seed, kStreamRound, static_cast<std::uint64_t>(i)));
    (void)rs.bernoulli(config.test_prob);
    rec.settings.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) rec.settings[static_cast<std::size_t>(k)] = rs.below(2);
    rec.outcomes = sample_outcome(table_for(rec.settings), rs);
    const bool won = win(GameInput::from_bits(rec.settings), rec.outcomes, d);
    rec.win = won ? 1 : 0;
    test_wins += won ? 1 : 0;
  }
  result.test_rounds = config.rounds - key_count;

  // Phase 2: the abort rule. No test data is a fail-safe abort.
  if (result.test_rounds == 0) {
    result.aborted = AbortKind::kTestAbort;
    return out;
  }
  result.c_statistic =
      static_cast<double>(test_wins) / static_cast<double>(result.test_rounds);
  if (result.c_statistic < result.threshold) {
    result.aborted = AbortKind::kTestAbort;
    return out;
  }

  // Phase 3: key rounds measured with setting 0 everywhere; the dealer
  // announces S' = S + S_A while raw outcomes stay in the private views.
  std::vector<int> secret_digits;
  secret_digits.reserve(static_cast<std::size_t>(key_count));
  if (secret) secret_digits = secret->digits;
  {
    RandomStream sec(derive_seed(config.seed, kStreamSecret, 0));
    while (static_cast<int>(secret_digits.size()) < key_count)
      secret_digits.push_back(sec.below(d));
  }

  std::vector<ParticipantView> participants(static_cast<std::size_t>(n - 1));
  for (int k = 0; k < n - 1; ++k) participants[static_cast<std::size_t>(k)].party = k + 1;

  const std::vector<int> all_zero(static_cast<std::size_t>(n), 0);
  const ProbTable& key_table = table_for(all_zero);
  std::size_t key_pos = 0;
  for (int i = 0; i < config.rounds; ++i) {
    if (is_test[static_cast<std::size_t>(i)]) continue;
    RandomStream rs(derive_seed(config.seed, kStreamRound, static_cast<std::uint64_t>(i)));
    (void)rs.bernoulli(config.test_prob);
    const std::vector<int> outcomes = sample_outcome(key_table, rs);
    RoundRecord& rec = out.transcript.rounds[static_cast<std::size_t>(i)];
    rec.settings = all_zero;
    const int dealer_share = outcomes[0];
    for (int k = 1; k < n; ++k)
      participants[static_cast<std::size_t>(k - 1)].key_outcomes.push_back(
          outcomes[static_cast<std::size_t>(k)]);
    rec.sprime = share_round(secret_digits[key_pos], dealer_share, d);
    ++key_pos;
  }
  result.dealer_secret = DitString(std::move(secret_digits), d);

  // Phase 4: recovery from the transcript plus participants' own outcomes,
  // then hash verification.
  result.recovered_secret = recover_secret(out.transcript, participants, d);

  RandomStream hash_rng(derive_seed(config.seed, kStreamHash, 0));
  HashFunction h = hash_sample(d, key_count, config.hash_tag_len, hash_rng);
  out.transcript.hash_tag = hash_apply(h, result.dealer_secret);
  out.transcript.hash = std::move(h);
  const std::vector<int> check = hash_apply(*out.transcript.hash, result.recovered_secret);
  if (check == out.transcript.hash_tag) {
    result.hash_verdict = HashVerdict::kMatch;
  } else {
    result.hash_verdict = HashVerdict::kMismatch;
    result.aborted = AbortKind::kEcAbort;
  }
  return out;
}

inline std::string transcript_csv(const Transcript& transcript) {
  std::ostringstream os;
  os << "round,T,settings,outcomes,C,Sprime\n";
  auto join = [](const std::vector<int>& v) {
    std::ostringstream s;
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ";" : "") << v[i];
    return s.str();
  };
  for (const auto& r : transcript.rounds) {
    os << r.index << ',' << (r.test ? 1 : 0) << ',' << join(r.settings) << ','
       << join(r.outcomes) << ',';
    if (r.win) os << *r.win;
    os << ',';
    if (r.sprime) os << *r.sprime;
    os << '\n';
  }
  return os.str();
}

}  // namespace diqss
