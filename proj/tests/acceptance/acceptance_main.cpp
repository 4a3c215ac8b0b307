// Release gate: eight end-to-end checks over the protocol layer, the attack
// scenarios, the simulator and the statistics.  Prints one pass/fail line per
// criterion and exits nonzero if any of them fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "../handshake_helpers.hpp"
#include "wbansec/knowledge.hpp"
#include "wbansec/plan.hpp"
#include "wbansec/scenarios.hpp"
#include "wbansec/simulator.hpp"
#include "wbansec/stats.hpp"
#include "wbansec/trace.hpp"

namespace {

using namespace wbansec;
using wbansec::testutil::kinds_of;
using wbansec::testutil::run_session;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Bytes patterned_payload(std::uint64_t tag, std::size_t len) {
  Bytes out(len);
  for (std::size_t i = 0; i < len; ++i) {
    out[i] = static_cast<std::uint8_t>((tag * 37 + i * 11 + 5) & 0xff);
  }
  return out;
}

AuthPeer seeded_peer(NodeId id, Scheme scheme, const GroupParams& params, std::uint64_t seed) {
  NodeIdentity ident;
  ident.id = id;
  Bytes kb(16);
  for (std::size_t i = 0; i < kb.size(); ++i) kb[i] = static_cast<std::uint8_t>(i * 9 + 4);
  ident.initial_key = key_from_bytes(kb);
  Bytes vb(static_cast<std::size_t>(params.secret_bytes()));
  for (std::size_t i = 0; i < vb.size(); ++i) {
    vb[i] = static_cast<std::uint8_t>((i * 17 + 9) % 251);
  }
  ident.shared_secret = make_element(mpz_from_bytes(vb), params);
  HandshakeConfig cfg;
  cfg.params = params;
  return AuthPeer(ident, scheme, cfg, seed);
}

AuthPeer wrong_key_peer(NodeId id, Scheme scheme, const GroupParams& params, std::uint64_t seed) {
  DeterministicRng rng(derive_seed(seed, 0xbad));
  NodeIdentity ident;
  ident.id = id;
  ident.initial_key = key_from_bytes(rng.bytes(16));
  ident.shared_secret = make_element(
      mpz_from_bytes(rng.bytes(static_cast<std::size_t>(params.secret_bytes()))), params);
  HandshakeConfig cfg;
  cfg.params = params;
  return AuthPeer(ident, scheme, cfg, derive_seed(seed, 0xbad, 2));
}

struct Criterion {
  bool ok = true;
  std::string detail;
};

// ---------------------------------------------------------------------------
// 1. Both endpoints of every seeded session derive the same session secret,
//    the payload round-trips byte-exactly, and (hop-by-hop scheme) the warm
//    fast path still agrees.
Criterion check_agreement() {
  const auto t0 = Clock::now();
  const GroupParams& params = GroupParams::standard();
  const int kSessions = 1000;
  int disagreements = 0;
  int failures = 0;

  for (Scheme scheme : {Scheme::Banzkp, Scheme::BanGzkp}) {
    for (int i = 0; i < kSessions; ++i) {
      const std::uint64_t seed = derive_seed(7'000 + i, scheme == Scheme::Banzkp ? 1 : 2);
      AuthPeer a = seeded_peer(2, scheme, params, derive_seed(seed, 10));
      AuthPeer b = seeded_peer(1, scheme, params, derive_seed(seed, 20));
      const Bytes payload = patterned_payload(static_cast<std::uint64_t>(i), 12);

      // Walk the first two messages by hand so that both live sessions can be
      // compared mid-exchange, then run the tail to completion.
      const ProtocolMessage m1 = a.initiate(1, payload, 0);
      AuthResult r1 = b.on_message(m1, 0);
      if (r1.checking_failed || r1.send.size() != 1) {
        ++failures;
        continue;
      }
      AuthResult r2 = a.on_message(r1.send[0], 0);
      if (r2.checking_failed || r2.send.size() != 1) {
        ++failures;
        continue;
      }
      const Session* sa = a.initiator_session(1);
      const Session* sb = b.responder_session(2);
      if (sa == nullptr || sb == nullptr || !(sa->session_secret == sb->session_secret)) {
        ++disagreements;
        continue;
      }

      std::vector<ProtocolMessage> queue = r2.send;
      std::optional<Bytes> delivered;
      while (!queue.empty()) {
        const ProtocolMessage msg = queue.front();
        queue.erase(queue.begin());
        AuthPeer& dest = msg.receiver == 1 ? b : a;
        AuthResult r = dest.on_message(msg, 0);
        if (r.checking_failed) ++failures;
        if (r.accepted_data) delivered = r.accepted_data;
        for (auto& out : r.send) queue.push_back(std::move(out));
      }
      if (!delivered || *delivered != payload) ++disagreements;

      if (scheme == Scheme::BanGzkp) {
        // Warm fast path: the session key is fresh, agreement must still hold
        // (witnessed through the authenticated payload round-trip).
        const Bytes payload2 = patterned_payload(static_cast<std::uint64_t>(i) + 50'000, 12);
        const auto tr = run_session(a, b, payload2);
        if (tr.failed || !tr.delivered || *tr.delivered != payload2 ||
            kinds_of(tr).size() != 3) {
          ++disagreements;
        }
      }
    }
  }

  const double dt = seconds_since(t0);
  Criterion c;
  c.ok = disagreements == 0 && failures == 0 && dt < 30.0;
  std::ostringstream os;
  os << 2 * kSessions << " sessions, " << disagreements << " disagreements, " << failures
     << " protocol failures, " << std::fixed << dt << "s (budget 30s)";
  c.detail = os.str();
  return c;
}

// ---------------------------------------------------------------------------
// 2. Exact message, cipher-operation and exponentiation counts per session.
Criterion check_counts() {
  const GroupParams& params = GroupParams::compact();
  const int kRepeats = 100;
  int bad = 0;

  const std::vector<MsgKind> full = {MsgKind::Auth1, MsgKind::Auth2, MsgKind::Auth3,
                                     MsgKind::Auth4, MsgKind::Auth5Data};
  const std::vector<MsgKind> fast = {MsgKind::Auth1, MsgKind::Auth2Opt, MsgKind::Auth3OptData};

  auto totals = [](const testutil::SessionTrace& tr) {
    return SessionCounters{
        tr.initiator_counters.exponentiations + tr.responder_counters.exponentiations,
        tr.initiator_counters.cipher_blocks + tr.responder_counters.cipher_blocks,
        tr.initiator_counters.messages_sent + tr.responder_counters.messages_sent};
  };

  for (int i = 0; i < kRepeats; ++i) {
    {
      AuthPeer a = seeded_peer(2, Scheme::Banzkp, params, derive_seed(100 + i, 1));
      AuthPeer b = seeded_peer(1, Scheme::Banzkp, params, derive_seed(100 + i, 2));
      const auto t1 = run_session(a, b, patterned_payload(1, 8));
      const auto t2 = run_session(a, b, patterned_payload(2, 8));
      for (const auto* tr : {&t1, &t2}) {
        if (tr->failed || kinds_of(*tr) != full ||
            !(totals(*tr) == SessionCounters{4, 5, 5})) {
          ++bad;
        }
      }
    }
    {
      AuthPeer a = seeded_peer(2, Scheme::BanGzkp, params, derive_seed(200 + i, 1));
      AuthPeer b = seeded_peer(1, Scheme::BanGzkp, params, derive_seed(200 + i, 2));
      const auto t1 = run_session(a, b, patterned_payload(3, 8));
      const auto t2 = run_session(a, b, patterned_payload(4, 8));
      if (t1.failed || kinds_of(t1) != full || !(totals(t1) == SessionCounters{4, 5, 5})) ++bad;
      if (t2.failed || kinds_of(t2) != fast || !(totals(t2) == SessionCounters{4, 3, 3})) ++bad;
    }
  }

  Criterion c;
  c.ok = bad == 0;
  std::ostringstream os;
  os << "end-to-end 5 msgs/5 cipher ops, hop-by-hop 5 then 3 msgs/3 cipher ops, 4 exps each; "
     << bad << " deviations over " << 4 * kRepeats << " sessions";
  c.detail = os.str();
  return c;
}

// ---------------------------------------------------------------------------
// 3. Full attack matrix across 10 seeds.
Criterion check_attack_matrix() {
  const LabTopology topo = default_lab(GroupParams::compact());
  auto expected = [](Scheme scheme, ScenarioName name) {
    if (scheme == Scheme::BanGzkp) return Verdict::AttackBlocked;
    switch (name) {
      case ScenarioName::DataReplay:
      case ScenarioName::RedundancyCrack:
      case ScenarioName::SinkDDoS: return Verdict::AttackSucceeded;
      default: return Verdict::AttackBlocked;
    }
  };

  int wrong = 0;
  std::string first_wrong;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (Scheme scheme : {Scheme::Banzkp, Scheme::BanGzkp}) {
      for (ScenarioName name : all_scenarios()) {
        const ScenarioOutcome outcome = run_scenario(name, scheme, topo, seed);
        if (outcome.verdict != expected(scheme, name)) {
          ++wrong;
          if (first_wrong.empty()) {
            first_wrong = std::string(scheme_name(scheme)) + "/" + scenario_name(name);
          }
        }
      }
    }
  }

  Criterion c;
  c.ok = wrong == 0;
  std::ostringstream os;
  os << "140 scenario runs (7 scenarios x 2 schemes x 10 seeds), " << wrong << " wrong verdicts";
  if (!first_wrong.empty()) os << " (first: " << first_wrong << ")";
  c.detail = os.str();
  return c;
}

// ---------------------------------------------------------------------------
// 4. XOR redundancy: ciphertext XOR equals plaintext XOR for every one of
//    1,000 pairs under the end-to-end scheme, and for none under the
//    hop-by-hop scheme.
Criterion check_redundancy() {
  const GroupParams& params = GroupParams::compact();
  const std::size_t kPairs = 1000;

  auto collect = [&](Scheme scheme) {
    // One long-lived peer pair; under the hop-by-hop scheme the first session
    // is first-contact, so run one extra session and only pair the
    // steady-state data messages.
    const MsgKind data_kind = scheme == Scheme::Banzkp ? MsgKind::Auth5Data : MsgKind::Auth3OptData;
    AuthPeer a = seeded_peer(2, scheme, params, derive_seed(400, 1));
    AuthPeer b = seeded_peer(1, scheme, params, derive_seed(400, 2));
    std::vector<Bytes> ciphertexts, plaintext_blocks;
    std::uint64_t tag = 0;
    while (ciphertexts.size() < kPairs + 1) {
      const Bytes payload = patterned_payload(tag++, 8);
      const auto tr = run_session(a, b, payload);
      if (tr.failed || !tr.delivered || *tr.delivered != payload) return std::size_t(kPairs + 7);
      for (const auto& msg : tr.messages) {
        if (msg.kind == data_kind) {
          ciphertexts.push_back(msg.parts.at(0));
          plaintext_blocks.push_back(
              pack_fields({Bytes{static_cast<std::uint8_t>(2)}, payload}));
        }
      }
    }
    std::size_t equal = 0;
    for (std::size_t i = 0; i < kPairs; ++i) {
      if (xor_redundancy(ciphertexts[i], ciphertexts[i + 1]) ==
          xor_redundancy(plaintext_blocks[i], plaintext_blocks[i + 1])) {
        ++equal;
      }
    }
    return equal;
  };

  const std::size_t banzkp_equal = collect(Scheme::Banzkp);
  const std::size_t gzkp_equal = collect(Scheme::BanGzkp);

  Criterion c;
  c.ok = banzkp_equal == kPairs && gzkp_equal == 0;
  std::ostringstream os;
  os << "c1^c2 == m1^m2 on " << banzkp_equal << "/" << kPairs
     << " end-to-end pairs (want all) and " << gzkp_equal << "/" << kPairs
     << " hop-by-hop pairs (want none)";
  c.detail = os.str();
  return c;
}

// ---------------------------------------------------------------------------
// 5. Flooding a relay with invalid hellos: the end-to-end scheme forwards all
//    of them to the sink (which must still reject them); the hop-by-hop
//    scheme kills every one at the relay.
Criterion check_ddos_containment() {
  const GroupParams& params = GroupParams::compact();
  const int kFlood = 1000;

  // End-to-end: the relay never authenticates transit traffic, so every
  // injected hello addressed to the sink is forwarded verbatim.
  int banzkp_reached = 0;
  int banzkp_accepted = 0;
  {
    AuthPeer sink = seeded_peer(1, Scheme::Banzkp, params, derive_seed(500, 1));
    AuthPeer forger = wrong_key_peer(9, Scheme::Banzkp, params, 501);
    const ProtocolMessage junk = forger.initiate(1, patterned_payload(1, 8), 0);
    for (int i = 0; i < kFlood; ++i) {
      ++banzkp_reached;  // transparent relay: forwarded without inspection
      const AuthResult r = sink.on_message(junk, 0);
      if (!r.checking_failed || r.accepted_data || !r.send.empty()) ++banzkp_accepted;
    }
  }

  // Hop-by-hop: the relay is itself a protocol endpoint, so the hello dies
  // there and nothing is originated toward the sink.
  int gzkp_reached = 0;
  {
    AuthPeer relay = seeded_peer(3, Scheme::BanGzkp, params, derive_seed(502, 1));
    AuthPeer forger = wrong_key_peer(9, Scheme::BanGzkp, params, 503);
    const ProtocolMessage junk = forger.initiate(3, patterned_payload(2, 8), 0);
    for (int i = 0; i < kFlood; ++i) {
      const AuthResult r = relay.on_message(junk, 0);
      if (!r.checking_failed || r.accepted_data || !r.send.empty()) ++gzkp_reached;
    }
  }

  Criterion c;
  c.ok = banzkp_reached == kFlood && banzkp_accepted == 0 && gzkp_reached == 0;
  std::ostringstream os;
  os << kFlood << " invalid hellos: end-to-end forwards " << banzkp_reached << "/" << kFlood
     << " to the sink (sink accepted " << banzkp_accepted
     << "), hop-by-hop lets " << gzkp_reached << " past the relay (want 0)";
  c.detail = os.str();
  return c;
}

// ---------------------------------------------------------------------------
// 6. Perfect channel, 1 pkt/s over 60 s: every (scheme, strategy) pair must
//    deliver 100%.
Criterion check_perfect_channel() {
  const auto t0 = Clock::now();
  const LinkTrace perfect = LinkTrace::perfect();
  int imperfect = 0;
  std::string first_bad;
  for (AuthMode scheme : all_auth_modes()) {
    for (StrategyKind strategy : all_strategies()) {
      SimConfig cfg;
      cfg.scheme = scheme;
      cfg.strategy = strategy;
      cfg.rate_pps = 1.0;
      cfg.duration_s = 60.0;
      cfg.seed = 1;
      const RunMetrics m = run_simulation(cfg, perfect);
      if (m.packets_generated == 0 || m.ratio() != 1.0) {
        ++imperfect;
        if (first_bad.empty()) {
          std::ostringstream os;
          os << auth_mode_name(scheme) << "/" << strategy_name(strategy) << " ratio="
             << m.ratio();
          first_bad = os.str();
        }
      }
    }
  }
  Criterion c;
  c.ok = imperfect == 0;
  std::ostringstream os;
  os << "15 scheme/strategy pairs at 1 pkt/s over 60 s, " << imperfect
     << " below 100% reception";
  if (!first_bad.empty()) os << " (first: " << first_bad << ")";
  os << ", " << std::fixed << seconds_since(t0) << "s";
  c.detail = os.str();
  return c;
}

// ---------------------------------------------------------------------------
// 7. Directional phenomena on the shipped synthetic traces, R = 50, with
//    non-overlapping 95% confidence intervals.
struct RowKey {
  AuthMode scheme;
  StrategyKind strategy;
  double rate;
};

const AggregateRow& find_row(const std::vector<AggregateRow>& rows, const RowKey& key) {
  for (const AggregateRow& row : rows) {
    if (row.scheme == key.scheme && row.strategy == key.strategy && row.rate_pps == key.rate) {
      return row;
    }
  }
  throw InvalidPlan("aggregate row not found");
}

bool interval_below(double mean_a, double beta_a, double mean_b, double beta_b) {
  return mean_a + beta_a < mean_b - beta_b;
}

Criterion check_directional(const std::string& trace_dir) {
  const auto t0 = Clock::now();
  std::vector<std::string> violations;

  ExperimentPlan flood_plan;
  flood_plan.schemes = {AuthMode::Banzkp, AuthMode::BanGzkp};
  flood_plan.strategies = {StrategyKind::FloodToSink};
  flood_plan.postures = {Posture::Walk};
  flood_plan.rates_pps = {1.0, 5.0, 10.0};
  flood_plan.repetitions = 50;
  flood_plan.base_seed = 1;
  flood_plan.duration_s = 30.0;
  const auto flood_rows = run_plan(flood_plan, trace_dir);

  for (double rate : flood_plan.rates_pps) {
    const auto& gz = find_row(flood_rows, {AuthMode::BanGzkp, StrategyKind::FloodToSink, rate});
    const auto& bz = find_row(flood_rows, {AuthMode::Banzkp, StrategyKind::FloodToSink, rate});
    if (!interval_below(gz.transmissions_mean, gz.transmissions_beta, bz.transmissions_mean,
                        bz.transmissions_beta)) {
      std::ostringstream os;
      os << "flood rate " << rate << ": hop-by-hop txs " << gz.transmissions_mean
         << " not below end-to-end " << bz.transmissions_mean;
      violations.push_back(os.str());
    }
  }

  ExperimentPlan sleep_plan;
  sleep_plan.postures = {Posture::Sleep};
  sleep_plan.rates_pps = {1.0};
  sleep_plan.repetitions = 50;
  sleep_plan.base_seed = 1;
  sleep_plan.duration_s = 30.0;
  const auto sleep_rows = run_plan(sleep_plan, trace_dir);

  const auto& apap_bz = find_row(sleep_rows, {AuthMode::Banzkp, StrategyKind::Apap, 1.0});
  const auto& apap_gz = find_row(sleep_rows, {AuthMode::BanGzkp, StrategyKind::Apap, 1.0});
  if (!interval_below(apap_bz.transmissions_mean, apap_bz.transmissions_beta,
                      apap_gz.transmissions_mean, apap_gz.transmissions_beta)) {
    std::ostringstream os;
    os << "sleep apap: end-to-end txs " << apap_bz.transmissions_mean
       << " not below hop-by-hop " << apap_gz.transmissions_mean;
    violations.push_back(os.str());
  }

  for (StrategyKind strategy : all_strategies()) {
    const auto& base = find_row(sleep_rows, {AuthMode::None, strategy, 1.0});
    for (AuthMode scheme : {AuthMode::Banzkp, AuthMode::BanGzkp}) {
      const auto& row = find_row(sleep_rows, {scheme, strategy, 1.0});
      if (!interval_below(row.ratio_mean, row.ratio_beta, base.ratio_mean, base.ratio_beta)) {
        std::ostringstream os;
        os << strategy_name(strategy) << "+" << auth_mode_name(scheme) << " ratio "
           << row.ratio_mean << " not below baseline " << base.ratio_mean;
        violations.push_back(os.str());
      }
    }
  }

  const double dt = seconds_since(t0);
  Criterion c;
  c.ok = violations.empty() && dt < 600.0;
  std::ostringstream os;
  os << "21 cells x 50 runs: flood txs hop-by-hop < end-to-end at 3 rates, "
     << "sleep apap txs end-to-end < hop-by-hop, 10 authenticated ratios < baseline; "
     << violations.size() << " violations";
  if (!violations.empty()) os << " (first: " << violations.front() << ")";
  os << ", " << std::fixed << dt << "s (budget 600s)";
  c.detail = os.str();
  return c;
}

// ---------------------------------------------------------------------------
// 8. Statistics against independent oracles.
Criterion check_statistics() {
  struct { int df; double want; } quantiles[] = {{1, 12.706}, {19, 2.093}, {199, 1.972}};
  int bad = 0;
  std::ostringstream os;
  for (const auto& q : quantiles) {
    const double got = student_t_quantile(0.05, q.df);
    if (std::fabs(got - q.want) > 5e-4) {
      ++bad;
      os << " t(0.05," << q.df << ")=" << got << " want " << q.want << ";";
    }
  }
  // Samples 1..5: mean 3, S = sqrt(2.5), beta = t(0.05,4) * S / sqrt(5) = 1.9632.
  const double beta = confidence_beta({1.0, 2.0, 3.0, 4.0, 5.0});
  if (std::fabs(beta - 1.9632) > 5e-4) {
    ++bad;
    os << " beta=" << beta << " want 1.9632;";
  }
  Criterion c;
  c.ok = bad == 0;
  c.detail = "t-quantiles at df 1/19/199 within 3 decimals, 5-sample half-width 1.9632" +
             (bad == 0 ? std::string() : " —" + os.str());
  return c;
}

}  // namespace

int main() {
#ifdef WBANSEC_TRACE_DIR
  const std::string trace_dir = WBANSEC_TRACE_DIR;
#else
  const std::string trace_dir = resolve_trace_dir();
#endif

  int failures = 0;
  auto report = [&](int index, const char* label, const Criterion& c) {
    std::printf("[%s] %d. %s: %s\n", c.ok ? "PASS" : "FAIL", index, label, c.detail.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failures;
  };

  report(1, "handshake agreement", check_agreement());
  report(2, "message-count exactness", check_counts());
  report(3, "attack matrix", check_attack_matrix());
  report(4, "redundancy algebra", check_redundancy());
  report(5, "ddos containment", check_ddos_containment());
  report(6, "perfect-channel reception", check_perfect_channel());
  report(7, "directional phenomena", check_directional(trace_dir));
  report(8, "statistics oracles", check_statistics());

  if (failures == 0) {
    std::printf("all 8 criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return 1;
}
