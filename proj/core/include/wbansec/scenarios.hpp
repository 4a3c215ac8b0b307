#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wbansec/handshake.hpp"
#include "wbansec/knowledge.hpp"

namespace wbansec {

// The scripted attacks.  The first four are authentication attacks; the last
// three target the data phase and the network around it.
enum class ScenarioName {
  ForgeNode,         // hello under a wrong network key, plus malformed hellos
  AuthReplayPart1,   // replay a captured hello to the responder
  AuthReplayPart2,   // replay captured responder messages to the initiator
  ManInMiddleGuess,  // full wiretap, then try to recover secret material
  DataReplay,        // replay an old data message into a fresh exchange
  RedundancyCrack,   // XOR two data ciphertexts to expose plaintext structure
  SinkDDoS,          // flood a relay with junk destined for the sink
};

enum class Verdict { AttackSucceeded, AttackBlocked };

const char* scenario_name(ScenarioName name);
const char* verdict_name(Verdict verdict);
std::optional<ScenarioName> parse_scenario(const std::string& text);
const std::vector<ScenarioName>& all_scenarios();

// Honest-side cast and shared credentials for a scenario run.  Every listed
// node carries the same network envelope key and deployment secret.
struct LabTopology {
  GroupParams params;
  SymmetricKey network_key;     // pre-shared envelope key, network-wide
  GroupElement shared_secret;   // deployment secret V, never transmitted
  std::vector<NodeId> honest_ids;
  NodeId initiator = 0;
  NodeId responder = 0;
  NodeId relay = 0;  // used by SinkDDoS
  NodeId sink = 0;   // used by SinkDDoS
};

// Deterministic default cast over the given group profile.
LabTopology default_lab(const GroupParams& params);

struct ScenarioOutcome {
  Verdict verdict = Verdict::AttackBlocked;
  std::vector<std::string> transcript;  // one action/reaction per line
  KnowledgeSet knowledge;               // the adversary's final knowledge
};

// Executes the scripted attack against honest nodes running `scheme`.
// Deterministic for a fixed (scenario, scheme, topology, seed).  Throws
// ScenarioMisconfigured when the topology lacks a role the script needs.
ScenarioOutcome run_scenario(ScenarioName name, Scheme scheme, const LabTopology& topo,
                             std::uint64_t seed);

}  // namespace wbansec
