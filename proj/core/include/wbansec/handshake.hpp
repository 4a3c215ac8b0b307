#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "wbansec/cipher.hpp"
#include "wbansec/group.hpp"
#include "wbansec/interval.hpp"
#include "wbansec/rng.hpp"
#include "wbansec/wire.hpp"

namespace wbansec {

// Banzkp: five-message exchange run end to end between a source and the sink.
// BanGzkp: the same exchange run hop by hop, shortened to three messages once
// the responder has already authenticated the initiator before.
enum class Scheme { Banzkp, BanGzkp };
const char* scheme_name(Scheme scheme);

struct NodeIdentity {
  NodeId id = 0;
  SymmetricKey initial_key;    // pre-shared envelope key (network-wide by default)
  GroupElement shared_secret;  // V, installed at deployment and never transmitted
};

struct HandshakeConfig {
  GroupParams params = GroupParams::standard();
  int nonce_bits = 256;
  int commit_key_bits = 128;        // width of the commitment key revealed in phase 4
  std::uint64_t timeout_us = 500000;  // incomplete sessions are abandoned after this
};

struct SessionCounters {
  int exponentiations = 0;  // modular exponentiations performed by this endpoint
  int cipher_blocks = 0;    // encrypted blocks composed by this endpoint
  int messages_sent = 0;    // protocol messages composed by this endpoint

  friend bool operator==(const SessionCounters&, const SessionCounters&) = default;
};

enum class Role { Initiator, Responder };

struct Session {
  Role role{};
  NodeId peer = 0;
  int phase = 0;           // last protocol phase this endpoint progressed through
  bool fast_path = false;  // shortened three-message variant in use
  Nonce own_nonce;
  GroupElement peer_public;    // peer's blinded element V^p / V^q
  GroupElement session_secret; // V^{pq}
  IntervalPointer challenge_ptr;  // interval challenge offset
  IntervalPointer data_ptr;       // data-key offset (shortened variant)
  SymmetricKey commit_key;        // commitment key revealed in phase 4
  SymmetricKey data_key;          // derived per-session data key (hop-by-hop scheme)
  BitString challenge_value;      // locally computed challenge interval
  Bytes pending_commitment;       // commitment ciphertext held until the key reveal
  Bytes pending_data;             // initiator: payload awaiting a completed handshake
  std::uint64_t deadline_us = 0;
  SessionCounters counters;
};

struct AuthResult {
  std::vector<ProtocolMessage> send;   // messages to transmit in response
  std::optional<Bytes> accepted_data;  // set when a responder accepted a payload
  bool checking_failed = false;        // message rejected; the session (if any) is gone
  bool completed = false;
  NodeId peer = 0;
  SessionCounters counters;  // this endpoint's session counters at completion/failure
};

// One protocol endpoint.  Holds at most one live session per ordered pair
// (self -> responder and initiator -> self); a new first message replaces a
// live session for the same pair.
class AuthPeer {
 public:
  AuthPeer(NodeIdentity self, Scheme scheme, HandshakeConfig cfg, std::uint64_t rng_seed);

  // Starts a session toward `responder` carrying `data` (must be non-empty: a
  // session only exists to move data).  Returns the first message.
  ProtocolMessage initiate(NodeId responder, Bytes data, std::uint64_t now_us);

  // Broadcast variant: first responder to reply is adopted, later repliers are
  // ignored.  Used when the next hop is negotiated by reachability.
  ProtocolMessage initiate_any(Bytes data, std::uint64_t now_us);

  AuthResult on_message(const ProtocolMessage& msg, std::uint64_t now_us);

  // Abandons overdue sessions.  Returns responder ids of initiator sessions
  // that died still holding unsent data (the payload is lost).
  std::vector<NodeId> expire_sessions(std::uint64_t now_us);

  // Silently drops an initiator session (e.g. a slower candidate hop after the
  // first reply won).  No data-loss reporting.
  void abort_initiation(NodeId responder);

  bool knows_initiator(NodeId id) const;
  void mark_known(NodeId initiator);  // pre-warm the recognition table
  bool expects_fast_path(NodeId responder) const;

  // Legitimate peer identities; empty roster accepts any id other than self.
  void set_roster(std::vector<NodeId> ids);

  const NodeIdentity& identity() const { return self_; }
  Scheme scheme() const { return scheme_; }
  const HandshakeConfig& config() const { return cfg_; }

  const Session* initiator_session(NodeId responder) const;
  const Session* responder_session(NodeId initiator) const;
  bool has_initiator_session(NodeId responder) const;
  std::optional<SessionCounters> last_completed(NodeId peer) const;

 private:
  struct PendingMulti {
    bool active = false;
    Nonce nonce;
    Bytes data;
    std::uint64_t deadline_us = 0;
    SessionCounters counters;
  };

  Bytes encrypt_block(const SymmetricKey& key, const std::vector<Bytes>& fields,
                      SessionCounters& counters);
  std::optional<std::vector<Bytes>> open_block(const SymmetricKey& key, const Bytes& block) const;

  ProtocolMessage start_session(NodeId receiver, Bytes data, std::uint64_t now_us, bool broadcast);

  AuthResult fail(NodeId peer, const SessionCounters* counters);
  AuthResult handle_auth1(const ProtocolMessage& msg, std::uint64_t now_us);
  AuthResult handle_auth2(const ProtocolMessage& msg);
  AuthResult handle_auth2_opt(const ProtocolMessage& msg);
  AuthResult handle_auth3(const ProtocolMessage& msg);
  AuthResult handle_auth4(const ProtocolMessage& msg);
  AuthResult handle_auth5(const ProtocolMessage& msg);
  AuthResult handle_auth3_opt(const ProtocolMessage& msg);

  Session* adoptable_session(NodeId responder);

  NodeIdentity self_;
  Scheme scheme_;
  HandshakeConfig cfg_;
  DeterministicRng rng_;
  std::set<NodeId> roster_;
  std::set<NodeId> known_initiators_;
  std::set<NodeId> fast_path_to_;
  std::map<NodeId, Session> as_initiator_;
  std::map<NodeId, Session> as_responder_;
  std::map<NodeId, SessionCounters> last_completed_;
  PendingMulti multi_;
};

}  // namespace wbansec
