#include "wbansec/scenarios.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "wbansec/interval.hpp"

namespace wbansec {

namespace {

constexpr NodeId kAdversaryId = 200;

std::string hex_digest(const ProtocolMessage& msg) {
  const std::uint64_t h = fnv1a64(msg.encode());
  Bytes b(8);
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(h >> (56 - 8 * i));
  return to_hex(b);
}

// Shared harness: honest peers, a passive wiretap feeding the adversary's
// knowledge, and transcript logging for every action and reaction.
class Lab {
 public:
  Lab(Scheme scheme, const LabTopology& topo, std::uint64_t seed, ScenarioOutcome& out)
      : scheme_(scheme), topo_(topo), seed_(seed), out_(out) {
    for (NodeId id : topo.honest_ids) {
      NodeIdentity ident;
      ident.id = id;
      ident.initial_key = topo.network_key;
      ident.shared_secret = topo.shared_secret;
      HandshakeConfig cfg;
      cfg.params = topo.params;
      AuthPeer peer(ident, scheme, cfg, derive_seed(seed, 0x401, id));
      peer.set_roster(topo.honest_ids);
      peers_.emplace(id, std::move(peer));
    }
  }

  AuthPeer& at(NodeId id) { return peers_.at(id); }
  std::uint64_t now() const { return now_; }
  Scheme scheme() const { return scheme_; }
  KnowledgeSet& knowledge() { return out_.knowledge; }

  // An attacker endpoint claiming `claimed_id` but holding its own invented
  // key material (it never learned the network credentials).
  AuthPeer make_forger(NodeId claimed_id) {
    DeterministicRng rng(derive_seed(seed_, 0xbad, claimed_id));
    NodeIdentity ident;
    ident.id = claimed_id;
    ident.initial_key = key_from_bytes(rng.bytes(16));
    ident.shared_secret =
        make_element(mpz_from_bytes(rng.bytes(static_cast<std::size_t>(topo_.params.secret_bytes()))),
                     topo_.params);
    HandshakeConfig cfg;
    cfg.params = topo_.params;
    return AuthPeer(ident, scheme_, cfg, derive_seed(seed_, 0xbad, claimed_id + 1));
  }

  void log(const std::string& line) { out_.transcript.push_back(line); }

  void log_tap(const ProtocolMessage& msg, bool blocked = false) {
    std::ostringstream os;
    os << "tap kind=" << msg_kind_name(msg.kind) << " from=" << int(msg.sender)
       << " to=" << int(msg.receiver) << " phase=" << msg_phase(msg.kind)
       << " bytes=" << msg.encode().size() << " digest=" << hex_digest(msg);
    if (blocked) os << " blocked=1";
    log(os.str());
  }

  void log_react(NodeId node, const AuthResult& r) {
    std::ostringstream os;
    os << "react node=" << int(node) << " replies=" << r.send.size()
       << " failed=" << (r.checking_failed ? 1 : 0)
       << " accepted=" << (r.accepted_data ? 1 : 0) << " completed=" << (r.completed ? 1 : 0);
    log(os.str());
  }

  // Passive intercept: record into the adversary's knowledge, never suppress.
  void tap(const ProtocolMessage& msg, bool with_line = true) {
    out_.knowledge.capture(msg, now_);
    if (with_line) log_tap(msg);
  }

  // Adversary transmission: the victim processes it exactly like a genuine
  // message; the reaction is logged.
  AuthResult inject(const ProtocolMessage& msg, NodeId victim, bool with_lines = true) {
    if (with_lines) {
      std::ostringstream os;
      os << "inject kind=" << msg_kind_name(msg.kind) << " as=" << int(msg.sender)
         << " to=" << int(victim) << " digest=" << hex_digest(msg);
      log(os.str());
    }
    AuthResult r = at(victim).on_message(msg, now_);
    now_ += 1000;
    if (with_lines) log_react(victim, r);
    return r;
  }

  // Runs one honest exchange from `from` to `to`, wiretapped.  Returns the
  // payload the responder accepted (it must accept; anything else means the
  // harness itself is broken).  Optionally snapshots the responder's freshly
  // computed challenge interval right after the first message lands.
  Bytes honest_session(NodeId from, NodeId to, const Bytes& payload, bool with_lines = true,
                       BitString* challenge_out = nullptr) {
    std::vector<ProtocolMessage> queue{at(from).initiate(to, payload, now_)};
    std::optional<Bytes> delivered;
    std::size_t count = 0;
    while (!queue.empty()) {
      ProtocolMessage msg = queue.front();
      queue.erase(queue.begin());
      tap(msg, with_lines);
      ++count;
      AuthResult r = at(msg.receiver).on_message(msg, now_);
      now_ += 1000;
      if (challenge_out && count == 1) {
        const Session* s = at(to).responder_session(from);
        if (s) *challenge_out = s->challenge_value;
      }
      if (r.accepted_data) delivered = r.accepted_data;
      for (auto& m : r.send) queue.push_back(std::move(m));
    }
    if (!delivered) throw ScenarioMisconfigured("honest exchange failed to deliver");
    if (with_lines) {
      std::ostringstream os;
      os << "session initiator=" << int(from) << " responder=" << int(to)
         << " messages=" << count << " delivered=1";
      log(os.str());
    }
    return *delivered;
  }

  // The most recent wiretapped message of a kind; the scripts replay these.
  ProtocolMessage last_captured(MsgKind kind) const {
    const auto msgs = out_.knowledge.messages_of_kind(kind);
    if (msgs.empty()) throw ScenarioMisconfigured("script expected a captured message");
    return msgs.back();
  }

  Bytes payload_bytes(std::uint64_t tag, std::size_t len) {
    DeterministicRng rng(derive_seed(seed_, 0xDA7A, tag));
    return rng.bytes(len);
  }

 private:
  Scheme scheme_;
  const LabTopology& topo_;
  std::uint64_t seed_;
  ScenarioOutcome& out_;
  std::map<NodeId, AuthPeer> peers_;
  std::uint64_t now_ = 0;
};

MsgKind data_kind(Scheme scheme) {
  return scheme == Scheme::Banzkp ? MsgKind::Auth5Data : MsgKind::Auth3OptData;
}

// Hello under an invented network key, an empty-payload hello, and a hello
// claiming an identity outside the roster: all must die at the responder.
Verdict forge_node(Lab& lab, const LabTopology& topo) {
  AuthPeer forger = lab.make_forger(topo.initiator);
  ProtocolMessage forged = forger.initiate(topo.responder, lab.payload_bytes(1, 8), lab.now());
  const AuthResult r1 = lab.inject(forged, topo.responder);

  ProtocolMessage hollow;
  hollow.kind = MsgKind::Auth1;
  hollow.sender = topo.initiator;
  hollow.receiver = topo.responder;
  hollow.parts = {Bytes{}};
  const AuthResult r2 = lab.inject(hollow, topo.responder);

  AuthPeer outsider = lab.make_forger(kAdversaryId);
  ProtocolMessage alien = outsider.initiate(topo.responder, lab.payload_bytes(2, 8), lab.now());
  const AuthResult r3 = lab.inject(alien, topo.responder);

  const bool blocked = r1.checking_failed && r2.checking_failed && r3.checking_failed &&
                       r1.send.empty() && r2.send.empty() && r3.send.empty() &&
                       !r1.accepted_data && !r2.accepted_data && !r3.accepted_data;
  return blocked ? Verdict::AttackBlocked : Verdict::AttackSucceeded;
}

// Replay a captured hello: the responder answers (phase 1 looks fine), but the
// attacker cannot produce the phase-3 answer for the fresh challenge, and the
// best replay material it owns dies at the responder's check.
Verdict auth_replay_part1(Lab& lab, const LabTopology& topo) {
  lab.honest_session(topo.initiator, topo.responder, lab.payload_bytes(1, 8));
  if (lab.scheme() == Scheme::BanGzkp) {
    lab.honest_session(topo.initiator, topo.responder, lab.payload_bytes(2, 8));
  }

  const AuthResult hello = lab.inject(lab.last_captured(MsgKind::Auth1), topo.responder);
  const bool phase1_accepted = !hello.checking_failed && hello.send.size() == 1;

  const MsgKind third =
      lab.scheme() == Scheme::Banzkp ? MsgKind::Auth3 : MsgKind::Auth3OptData;
  const AuthResult finish = lab.inject(lab.last_captured(third), topo.responder);

  const bool blocked =
      phase1_accepted && finish.checking_failed && !finish.accepted_data && !finish.completed;
  return blocked ? Verdict::AttackBlocked : Verdict::AttackSucceeded;
}

// Replay the responder side at a fresh initiator.  The initiator re-verifies
// even on the shortened path, so the stale challenge (or stale commitment)
// cannot survive its check.
Verdict auth_replay_part2(Lab& lab, const LabTopology& topo) {
  lab.honest_session(topo.initiator, topo.responder, lab.payload_bytes(1, 8));
  if (lab.scheme() == Scheme::BanGzkp) {
    lab.honest_session(topo.initiator, topo.responder, lab.payload_bytes(2, 8));
  }

  // The victim initiates again; the attacker suppresses the hello so the real
  // responder never takes part in this exchange.
  ProtocolMessage hello =
      lab.at(topo.initiator).initiate(topo.responder, lab.payload_bytes(3, 8), lab.now());
  lab.tap(hello, false);
  lab.log_tap(hello, /*blocked=*/true);

  if (lab.scheme() == Scheme::Banzkp) {
    const AuthResult r2 = lab.inject(lab.last_captured(MsgKind::Auth2), topo.initiator);
    const bool advanced = !r2.checking_failed && r2.send.size() == 1;
    const AuthResult r4 = lab.inject(lab.last_captured(MsgKind::Auth4), topo.initiator);
    const bool blocked = advanced && r4.checking_failed && !r4.completed && !r4.accepted_data;
    return blocked ? Verdict::AttackBlocked : Verdict::AttackSucceeded;
  }
  const AuthResult r2 = lab.inject(lab.last_captured(MsgKind::Auth2Opt), topo.initiator);
  const bool blocked = r2.checking_failed && !r2.completed && r2.send.empty();
  return blocked ? Verdict::AttackBlocked : Verdict::AttackSucceeded;
}

// Full wiretap of two exchanges, offline XOR combinations, then two recovery
// attempts: a substring scan for the deployment secrets and a bounded
// brute-force over 2^16 candidate challenge intervals.
Verdict man_in_middle_guess(Lab& lab, const LabTopology& topo) {
  BitString challenge1, challenge2;
  lab.honest_session(topo.initiator, topo.responder, lab.payload_bytes(1, 8), true, &challenge1);
  lab.honest_session(topo.initiator, topo.responder, lab.payload_bytes(2, 8), true, &challenge2);

  // Offline work: XOR every pair of captured encrypted parts.
  std::vector<Bytes> parts;
  for (const CapturedMessage& c : lab.knowledge().captured_messages()) {
    if (c.msg.kind == MsgKind::Auth4) continue;  // plaintext reveal, nothing to XOR
    for (const Bytes& p : c.msg.parts) parts.push_back(p);
  }
  std::size_t combos = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      lab.knowledge().add_derived(xor_redundancy(parts[i], parts[j]));
      ++combos;
    }
  }
  {
    std::ostringstream os;
    os << "xor_combine parts=" << parts.size() << " derived=" << combos;
    lab.log(os.str());
  }

  const Bytes v_bytes = fixed_width_bits(topo.shared_secret, topo.params).packed();
  const Bytes key_bytes = topo.network_key.bits.packed();
  const bool v_leaked = lab.knowledge().contains(v_bytes);
  const bool key_leaked = lab.knowledge().contains(key_bytes);
  {
    std::ostringstream os;
    os << "secret_scan v_leaked=" << (v_leaked ? 1 : 0) << " key_leaked=" << (key_leaked ? 1 : 0);
    lab.log(os.str());
  }

  // Brute force: enumerate all 2^16 interval values that differ from zero only
  // in their final 16 bits and test them against the real challenges.
  const int width = topo.params.interval_bits;
  std::size_t matches = 0;
  for (std::uint32_t c = 0; c < (1u << 16); ++c) {
    BitString candidate = BitString::zeros(static_cast<std::size_t>(width));
    for (int j = 0; j < 16; ++j) {
      if ((c >> (15 - j)) & 1u) {
        candidate.set_bit(static_cast<std::size_t>(width - 16 + j), true);
      }
    }
    if (candidate == challenge1 || candidate == challenge2) ++matches;
  }
  {
    std::ostringstream os;
    os << "brute_force candidates=65536 matches=" << matches;
    lab.log(os.str());
  }

  const bool blocked = !v_leaked && !key_leaked && matches == 0;
  return blocked ? Verdict::AttackBlocked : Verdict::AttackSucceeded;
}

// Replay an old data message into a half-open fresh exchange.  The end-to-end
// scheme binds data only to the static envelope key and accepts it; the
// hop-by-hop scheme's session-fresh key rejects it.
Verdict data_replay(Lab& lab, const LabTopology& topo) {
  lab.honest_session(topo.initiator, topo.responder, lab.payload_bytes(1, 8));
  if (lab.scheme() == Scheme::BanGzkp) {
    lab.honest_session(topo.initiator, topo.responder, lab.payload_bytes(2, 8));
  }
  const ProtocolMessage stale = lab.last_captured(data_kind(lab.scheme()));

  // Drive a fresh exchange right up to the data phase, suppressing the
  // genuine data message.
  ProtocolMessage m = lab.at(topo.initiator).initiate(topo.responder, lab.payload_bytes(3, 8), lab.now());
  while (true) {
    lab.tap(m, true);
    const AuthResult r = lab.at(m.receiver).on_message(m, lab.now());
    if (r.send.empty()) throw ScenarioMisconfigured("fresh exchange stalled before data phase");
    if (r.send[0].kind == data_kind(lab.scheme())) {
      lab.log_tap(r.send[0], /*blocked=*/true);  // genuine payload suppressed
      break;
    }
    m = r.send[0];
  }

  const AuthResult replay = lab.inject(stale, topo.responder);
  const bool stale_accepted = replay.accepted_data.has_value();
  return stale_accepted ? Verdict::AttackSucceeded : Verdict::AttackBlocked;
}

// XOR pairs of data ciphertexts and compare with the XOR of the plaintext
// blocks (the oracle knows the payloads).  Equality breaks confidentiality.
Verdict redundancy_crack(Lab& lab, const LabTopology& topo) {
  const std::size_t payload_len = 8;
  const int trials = lab.scheme() == Scheme::Banzkp ? 5 : 1000;
  const int sessions = trials + (lab.scheme() == Scheme::Banzkp ? 1 : 2);

  std::vector<Bytes> payloads;
  std::vector<Bytes> data_parts;     // ciphertext block of each data message
  std::vector<Bytes> plain_blocks;   // matching plaintext block (oracle side)
  for (int i = 0; i < sessions; ++i) {
    const Bytes payload = lab.payload_bytes(static_cast<std::uint64_t>(i) + 10, payload_len);
    const bool verbose = i < 2;  // keep the transcript bounded
    lab.honest_session(topo.initiator, topo.responder, payload, verbose);
    payloads.push_back(payload);
  }
  // Pair only messages of the scheme's steady-state data kind, so the
  // hop-by-hop scheme is measured on its shortened path.
  const auto data_msgs = lab.knowledge().messages_of_kind(data_kind(lab.scheme()));
  const std::size_t skip = payloads.size() - data_msgs.size();  // long-form first contacts
  for (std::size_t i = 0; i < data_msgs.size(); ++i) {
    data_parts.push_back(data_msgs[i].parts.at(0));
    plain_blocks.push_back(
        pack_fields({Bytes{static_cast<std::uint8_t>(topo.initiator)}, payloads[skip + i]}));
  }
  if (data_parts.size() < 2) throw ScenarioMisconfigured("not enough data ciphertexts captured");

  int equal = 0;
  const int pairs = static_cast<int>(data_parts.size()) - 1;
  for (int i = 0; i < pairs; ++i) {
    const Bytes xored = xor_redundancy(data_parts[static_cast<std::size_t>(i)],
                                       data_parts[static_cast<std::size_t>(i) + 1]);
    if (i < 4) lab.knowledge().add_derived(xored);  // keep knowledge bounded
    const Bytes plain_xor = xor_redundancy(plain_blocks[static_cast<std::size_t>(i)],
                                           plain_blocks[static_cast<std::size_t>(i) + 1]);
    if (xored == plain_xor) ++equal;
  }
  {
    std::ostringstream os;
    os << "xor_trials trials=" << pairs << " equal=" << equal;
    lab.log(os.str());
  }
  return equal > 0 ? Verdict::AttackSucceeded : Verdict::AttackBlocked;
}

// Flood a relay with invalid hellos.  Under the end-to-end scheme the relay
// forwards traffic addressed to the sink without authenticating it; under
// the hop-by-hop scheme every hello is checked at the relay itself and dies
// there, so nothing adversary-originated ever reaches the sink.
Verdict sink_ddos(Lab& lab, const LabTopology& topo) {
  const int kFlood = 1000;
  int sink_received = 0;
  AuthPeer forger = lab.make_forger(kAdversaryId);

  if (lab.scheme() == Scheme::Banzkp) {
    lab.log("relay mode=forward-unauthenticated");
    lab.honest_session(topo.initiator, topo.sink, lab.payload_bytes(1, 8));
    // Authentication is end to end, so the relay forwards the flood blindly
    // toward its addressee; every copy arrives before the sink can reject it.
    const ProtocolMessage junk = forger.initiate(topo.sink, lab.payload_bytes(2, 8), lab.now());
    for (int i = 0; i < kFlood; ++i) {
      ++sink_received;
      lab.inject(junk, topo.sink, i == 0);
    }
  } else {
    lab.log("relay mode=hop-authenticate");
    // Honest custody chain for contrast: source to relay (long form, then the
    // shortened form), then relay to sink.
    lab.honest_session(topo.initiator, topo.relay, lab.payload_bytes(1, 8));
    const Bytes custody = lab.honest_session(topo.initiator, topo.relay, lab.payload_bytes(2, 8));
    lab.honest_session(topo.relay, topo.sink, custody);

    // Every hop is authenticated, so the invalid hellos die at the relay and
    // the relay originates nothing toward the sink on the attacker's behalf.
    const ProtocolMessage junk = forger.initiate(topo.relay, lab.payload_bytes(3, 8), lab.now());
    for (int i = 0; i < kFlood; ++i) {
      const AuthResult r = lab.inject(junk, topo.relay, i == 0);
      if (r.accepted_data || !r.send.empty()) ++sink_received;  // any traction at all
    }
  }
  {
    std::ostringstream os;
    os << "flood injected=" << kFlood << " sink_received=" << sink_received;
    lab.log(os.str());
  }
  return sink_received > 0 ? Verdict::AttackSucceeded : Verdict::AttackBlocked;
}

void require_member(const LabTopology& topo, NodeId id, const char* role) {
  if (std::find(topo.honest_ids.begin(), topo.honest_ids.end(), id) == topo.honest_ids.end()) {
    throw ScenarioMisconfigured(std::string("topology lacks required role: ") + role);
  }
}

}  // namespace


const char* scenario_name(ScenarioName name) {
  switch (name) {
    case ScenarioName::ForgeNode: return "ForgeNode";
    case ScenarioName::AuthReplayPart1: return "AuthReplayPart1";
    case ScenarioName::AuthReplayPart2: return "AuthReplayPart2";
    case ScenarioName::ManInMiddleGuess: return "ManInMiddleGuess";
    case ScenarioName::DataReplay: return "DataReplay";
    case ScenarioName::RedundancyCrack: return "RedundancyCrack";
    case ScenarioName::SinkDDoS: return "SinkDDoS";
  }
  return "Unknown";
}

const char* verdict_name(Verdict verdict) {
  return verdict == Verdict::AttackSucceeded ? "AttackSucceeded" : "AttackBlocked";
}

std::optional<ScenarioName> parse_scenario(const std::string& text) {
  for (ScenarioName name : all_scenarios()) {
    if (text == scenario_name(name)) return name;
  }
  return std::nullopt;
}

const std::vector<ScenarioName>& all_scenarios() {
  static const std::vector<ScenarioName> names = {
      ScenarioName::ForgeNode,       ScenarioName::AuthReplayPart1,
      ScenarioName::AuthReplayPart2, ScenarioName::ManInMiddleGuess,
      ScenarioName::DataReplay,      ScenarioName::RedundancyCrack,
      ScenarioName::SinkDDoS,
  };
  return names;
}

LabTopology default_lab(const GroupParams& params) {
  LabTopology topo;
  topo.params = params;
  Bytes key_bytes(16);
  for (std::size_t i = 0; i < key_bytes.size(); ++i) {
    key_bytes[i] = static_cast<std::uint8_t>((i * 29 + 11) % 256);
  }
  topo.network_key = key_from_bytes(key_bytes);
  Bytes v_bytes(static_cast<std::size_t>(params.secret_bytes()));
  for (std::size_t i = 0; i < v_bytes.size(); ++i) {
    v_bytes[i] = static_cast<std::uint8_t>((i * 31 + 7) % 251);
  }
  topo.shared_secret = make_element(mpz_from_bytes(v_bytes), params);
  topo.honest_ids = {0, 1, 2, 3, 4, 5, 6};
  topo.initiator = 4;
  topo.responder = 1;
  topo.relay = 3;
  topo.sink = 1;
  return topo;
}

ScenarioOutcome run_scenario(ScenarioName name, Scheme scheme, const LabTopology& topo,
                             std::uint64_t seed) {
  if (name == ScenarioName::SinkDDoS) {
    require_member(topo, topo.initiator, "initiator");
    require_member(topo, topo.relay, "relay");
    require_member(topo, topo.sink, "sink");
    if (topo.relay == topo.sink || topo.initiator == topo.relay || topo.initiator == topo.sink) {
      throw ScenarioMisconfigured("flood scenario needs distinct source, relay and sink");
    }
  } else {
    require_member(topo, topo.initiator, "initiator");
    require_member(topo, topo.responder, "responder");
    if (topo.initiator == topo.responder) {
      throw ScenarioMisconfigured("initiator and responder must differ");
    }
  }

  ScenarioOutcome out;
  Lab lab(scheme, topo, seed, out);
  {
    std::ostringstream os;
    os << "scenario name=" << scenario_name(name) << " scheme=" << scheme_name(scheme)
       << " seed=" << seed;
    out.transcript.insert(out.transcript.begin(), os.str());
  }

  Verdict verdict = Verdict::AttackBlocked;
  switch (name) {
    case ScenarioName::ForgeNode: verdict = forge_node(lab, topo); break;
    case ScenarioName::AuthReplayPart1: verdict = auth_replay_part1(lab, topo); break;
    case ScenarioName::AuthReplayPart2: verdict = auth_replay_part2(lab, topo); break;
    case ScenarioName::ManInMiddleGuess: verdict = man_in_middle_guess(lab, topo); break;
    case ScenarioName::DataReplay: verdict = data_replay(lab, topo); break;
    case ScenarioName::RedundancyCrack: verdict = redundancy_crack(lab, topo); break;
    case ScenarioName::SinkDDoS: verdict = sink_ddos(lab, topo); break;
  }
  out.verdict = verdict;
  out.transcript.push_back(std::string("verdict=") + verdict_name(verdict));
  return out;
}

}  // namespace wbansec
