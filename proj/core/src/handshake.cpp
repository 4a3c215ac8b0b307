#include "wbansec/handshake.hpp"

#include <algorithm>

namespace wbansec {

namespace {

Bytes id_field(NodeId id) { return Bytes{id}; }

Bytes element_field(const GroupElement& e, const GroupParams& p) {
  return mpz_to_fixed_bytes(e.value, p.secret_bytes());
}

Bytes pointer_field(IntervalPointer ptr) {
  Bytes out;
  put_u16(out, static_cast<std::uint16_t>(ptr.start_bit));
  return out;
}

std::optional<IntervalPointer> parse_pointer(const Bytes& field, const GroupParams& params) {
  if (field.size() != 2) return std::nullopt;
  const int v = read_u16(field, 0);
  if (v < 0 || v >= params.min_secret_bits) return std::nullopt;
  return IntervalPointer{v};
}

std::optional<GroupElement> parse_element(const Bytes& field, const GroupParams& params) {
  if (field.size() != static_cast<std::size_t>(params.secret_bytes())) return std::nullopt;
  GroupElement e{mpz_from_bytes(field)};
  // Degenerate blinded elements would let anyone predict the session secret.
  mpz_class top = params.modulus - 1;
  if (cmp(e.value, 1) <= 0 || cmp(e.value, top) >= 0) return std::nullopt;
  return e;
}

std::size_t interval_bytes(const GroupParams& params) {
  return (static_cast<std::size_t>(params.interval_bits) + 7) / 8;
}

}  // namespace

const char* scheme_name(Scheme scheme) {
  return scheme == Scheme::Banzkp ? "banzkp" : "ban-gzkp";
}

AuthPeer::AuthPeer(NodeIdentity self, Scheme scheme, HandshakeConfig cfg, std::uint64_t rng_seed)
    : self_(std::move(self)), scheme_(scheme), cfg_(std::move(cfg)), rng_(rng_seed) {
  if (self_.initial_key.empty()) throw EmptyKey("an endpoint needs a pre-shared envelope key");
  cfg_.params.validate();
}

Bytes AuthPeer::encrypt_block(const SymmetricKey& key, const std::vector<Bytes>& fields,
                              SessionCounters& counters) {
  counters.cipher_blocks += 1;
  return stream_encrypt(key, pack_fields(fields));
}

std::optional<std::vector<Bytes>> AuthPeer::open_block(const SymmetricKey& key,
                                                       const Bytes& block) const {
  return unpack_fields(stream_decrypt(key, block));
}

ProtocolMessage AuthPeer::start_session(NodeId receiver, Bytes data, std::uint64_t now_us,
                                        bool broadcast) {
  if (data.empty()) throw Error("a session starts only when there is data to send");
  Nonce p = random_nonce(rng_, cfg_.nonce_bits);
  SessionCounters counters;
  counters.exponentiations += 1;
  const GroupElement vp = pow_secret(self_.shared_secret, p, cfg_.params);

  ProtocolMessage msg;
  msg.kind = MsgKind::Auth1;
  msg.sender = self_.id;
  msg.receiver = receiver;
  msg.parts.push_back(
      encrypt_block(self_.initial_key, {id_field(self_.id), element_field(vp, cfg_.params)}, counters));
  counters.messages_sent += 1;

  if (broadcast) {
    multi_ = PendingMulti{true, std::move(p), std::move(data), now_us + cfg_.timeout_us, counters};
  } else {
    Session s;
    s.role = Role::Initiator;
    s.peer = receiver;
    s.phase = 1;
    s.own_nonce = std::move(p);
    s.pending_data = std::move(data);
    s.deadline_us = now_us + cfg_.timeout_us;
    s.counters = counters;
    as_initiator_[receiver] = std::move(s);  // replaces a live session for this pair
  }
  return msg;
}

ProtocolMessage AuthPeer::initiate(NodeId responder, Bytes data, std::uint64_t now_us) {
  return start_session(responder, std::move(data), now_us, false);
}

ProtocolMessage AuthPeer::initiate_any(Bytes data, std::uint64_t now_us) {
  return start_session(kBroadcastId, std::move(data), now_us, true);
}

AuthResult AuthPeer::fail(NodeId peer, const SessionCounters* counters) {
  AuthResult r;
  r.checking_failed = true;
  r.peer = peer;
  if (counters != nullptr) r.counters = *counters;
  return r;
}

Session* AuthPeer::adoptable_session(NodeId responder) {
  auto it = as_initiator_.find(responder);
  if (it != as_initiator_.end()) return &it->second;
  if (!multi_.active) return nullptr;
  // First reply to a broadcast first message wins; bind the session now.
  Session s;
  s.role = Role::Initiator;
  s.peer = responder;
  s.phase = 1;
  s.own_nonce = multi_.nonce;
  s.pending_data = multi_.data;
  s.deadline_us = multi_.deadline_us;
  s.counters = multi_.counters;
  multi_ = PendingMulti{};
  auto [pos, inserted] = as_initiator_.emplace(responder, std::move(s));
  (void)inserted;
  return &pos->second;
}

AuthResult AuthPeer::on_message(const ProtocolMessage& msg, std::uint64_t now_us) {
  if (msg.receiver != self_.id && msg.receiver != kBroadcastId) return fail(msg.sender, nullptr);
  switch (msg.kind) {
    case MsgKind::Auth1: return handle_auth1(msg, now_us);
    case MsgKind::Auth2: return handle_auth2(msg);
    case MsgKind::Auth2Opt: return handle_auth2_opt(msg);
    case MsgKind::Auth3: return handle_auth3(msg);
    case MsgKind::Auth4: return handle_auth4(msg);
    case MsgKind::Auth5Data: return handle_auth5(msg);
    case MsgKind::Auth3OptData: return handle_auth3_opt(msg);
  }
  return fail(msg.sender, nullptr);
}

AuthResult AuthPeer::handle_auth1(const ProtocolMessage& msg, std::uint64_t now_us) {
  if (msg.parts.size() != 1) return fail(msg.sender, nullptr);
  auto fields = open_block(self_.initial_key, msg.parts[0]);
  if (!fields || fields->size() != 2) return fail(msg.sender, nullptr);
  const Bytes& idf = (*fields)[0];
  if (idf.size() != 1) return fail(msg.sender, nullptr);
  const NodeId claimed = idf[0];
  if (claimed != msg.sender || claimed == self_.id) return fail(msg.sender, nullptr);
  if (!roster_.empty() && roster_.count(claimed) == 0) return fail(msg.sender, nullptr);
  auto vp = parse_element((*fields)[1], cfg_.params);
  if (!vp) return fail(msg.sender, nullptr);

  Session s;
  s.role = Role::Responder;
  s.peer = claimed;
  s.deadline_us = now_us + cfg_.timeout_us;
  s.own_nonce = random_nonce(rng_, cfg_.nonce_bits);
  s.peer_public = *vp;
  s.counters.exponentiations += 2;
  const GroupElement vq = pow_secret(self_.shared_secret, s.own_nonce, cfg_.params);
  s.session_secret = pow_secret(*vp, s.own_nonce, cfg_.params);
  s.challenge_ptr = random_pointer(rng_, cfg_.params);
  s.challenge_value =
      extract_interval(s.session_secret, s.challenge_ptr, cfg_.params.interval_bits, cfg_.params);

  ProtocolMessage reply;
  reply.sender = self_.id;
  reply.receiver = claimed;

  if (scheme_ == Scheme::BanGzkp && knows_initiator(claimed)) {
    // Shortened variant: challenge answer and data-key offset ride along.
    s.fast_path = true;
    s.data_ptr = random_pointer(rng_, cfg_.params);
    s.data_key = derive_data_key(s.session_secret, s.data_ptr, cfg_.params);
    reply.kind = MsgKind::Auth2Opt;
    reply.parts.push_back(encrypt_block(
        self_.initial_key,
        {id_field(self_.id), element_field(vq, cfg_.params), pointer_field(s.challenge_ptr),
         pointer_field(s.data_ptr), s.challenge_value.packed()},
        s.counters));
  } else {
    // Full variant: the challenge answer is committed under a fresh key that
    // is only revealed after the initiator has answered.
    Bytes commit_key_bytes = rng_.bytes(static_cast<std::size_t>(cfg_.commit_key_bits / 8));
    s.commit_key = key_from_bytes(commit_key_bytes);
    reply.kind = MsgKind::Auth2;
    reply.parts.push_back(encrypt_block(
        self_.initial_key,
        {id_field(self_.id), element_field(vq, cfg_.params), pointer_field(s.challenge_ptr)},
        s.counters));
    reply.parts.push_back(encrypt_block(s.commit_key, {s.challenge_value.packed()}, s.counters));
  }
  s.phase = 2;
  s.counters.messages_sent += 1;
  as_responder_[claimed] = std::move(s);  // replaces a live session for this pair

  AuthResult r;
  r.peer = claimed;
  r.send.push_back(std::move(reply));
  return r;
}

AuthResult AuthPeer::handle_auth2(const ProtocolMessage& msg) {
  if (msg.parts.size() != 2) return fail(msg.sender, nullptr);
  Session* s = adoptable_session(msg.sender);
  if (s == nullptr || s->phase != 1) return fail(msg.sender, nullptr);
  const SessionCounters snapshot = s->counters;
  auto cleanup = [&] { as_initiator_.erase(msg.sender); };

  auto fields = open_block(self_.initial_key, msg.parts[0]);
  if (!fields || fields->size() != 3) {
    cleanup();
    return fail(msg.sender, &snapshot);
  }
  const Bytes& idf = (*fields)[0];
  auto vq = parse_element((*fields)[1], cfg_.params);
  auto ptr = parse_pointer((*fields)[2], cfg_.params);
  if (idf.size() != 1 || idf[0] != msg.sender || idf[0] != s->peer || !vq || !ptr) {
    cleanup();
    return fail(msg.sender, &snapshot);
  }

  s->peer_public = *vq;
  s->counters.exponentiations += 1;
  s->session_secret = pow_secret(*vq, s->own_nonce, cfg_.params);
  s->challenge_ptr = *ptr;
  s->challenge_value =
      extract_interval(s->session_secret, s->challenge_ptr, cfg_.params.interval_bits, cfg_.params);
  s->pending_commitment = msg.parts[1];

  ProtocolMessage reply;
  reply.kind = MsgKind::Auth3;
  reply.sender = self_.id;
  reply.receiver = s->peer;
  reply.parts.push_back(
      encrypt_block(self_.initial_key, {id_field(self_.id), s->challenge_value.packed()}, s->counters));
  s->counters.messages_sent += 1;
  s->phase = 3;

  AuthResult r;
  r.peer = msg.sender;
  r.send.push_back(std::move(reply));
  return r;
}

AuthResult AuthPeer::handle_auth2_opt(const ProtocolMessage& msg) {
  if (scheme_ != Scheme::BanGzkp || msg.parts.size() != 1) return fail(msg.sender, nullptr);
  Session* s = adoptable_session(msg.sender);
  if (s == nullptr || s->phase != 1) return fail(msg.sender, nullptr);
  const SessionCounters snapshot = s->counters;
  auto cleanup = [&] { as_initiator_.erase(msg.sender); };

  auto fields = open_block(self_.initial_key, msg.parts[0]);
  if (!fields || fields->size() != 5) {
    cleanup();
    return fail(msg.sender, &snapshot);
  }
  const Bytes& idf = (*fields)[0];
  auto vq = parse_element((*fields)[1], cfg_.params);
  auto challenge_ptr = parse_pointer((*fields)[2], cfg_.params);
  auto data_ptr = parse_pointer((*fields)[3], cfg_.params);
  const Bytes& claimed = (*fields)[4];
  if (idf.size() != 1 || idf[0] != msg.sender || idf[0] != s->peer || !vq || !challenge_ptr ||
      !data_ptr || claimed.size() != interval_bytes(cfg_.params)) {
    cleanup();
    return fail(msg.sender, &snapshot);
  }

  s->counters.exponentiations += 1;
  s->session_secret = pow_secret(*vq, s->own_nonce, cfg_.params);
  const BitString expected =
      extract_interval(s->session_secret, *challenge_ptr, cfg_.params.interval_bits, cfg_.params);
  if (claimed != expected.packed()) {
    // The responder failed to prove knowledge of the session secret: it could
    // not have answered the challenge without V and a fresh exponent.
    const SessionCounters at_fail = s->counters;
    cleanup();
    return fail(msg.sender, &at_fail);
  }

  s->data_key = derive_data_key(s->session_secret, *data_ptr, cfg_.params);

  ProtocolMessage reply;
  reply.kind = MsgKind::Auth3OptData;
  reply.sender = self_.id;
  reply.receiver = msg.sender;
  reply.parts.push_back(
      encrypt_block(s->data_key, {id_field(self_.id), s->pending_data}, s->counters));
  s->counters.messages_sent += 1;

  AuthResult r;
  r.peer = msg.sender;
  r.completed = true;
  r.counters = s->counters;
  r.send.push_back(std::move(reply));
  fast_path_to_.insert(msg.sender);
  last_completed_[msg.sender] = s->counters;
  as_initiator_.erase(msg.sender);
  return r;
}

AuthResult AuthPeer::handle_auth3(const ProtocolMessage& msg) {
  auto it = as_responder_.find(msg.sender);
  if (it == as_responder_.end() || it->second.phase != 2 || it->second.fast_path ||
      msg.parts.size() != 1) {
    return fail(msg.sender, nullptr);
  }
  Session& s = it->second;
  const SessionCounters snapshot = s.counters;
  auto cleanup = [&] { as_responder_.erase(it); };

  auto fields = open_block(self_.initial_key, msg.parts[0]);
  if (!fields || fields->size() != 2) {
    cleanup();
    return fail(msg.sender, &snapshot);
  }
  const Bytes& idf = (*fields)[0];
  const Bytes& answer = (*fields)[1];
  if (idf.size() != 1 || idf[0] != msg.sender || idf[0] != s.peer ||
      answer != s.challenge_value.packed()) {
    cleanup();
    return fail(msg.sender, &snapshot);
  }

  // Challenge answered: reveal the commitment key in the clear.
  ProtocolMessage reply;
  reply.kind = MsgKind::Auth4;
  reply.sender = self_.id;
  reply.receiver = s.peer;
  reply.parts.push_back(pack_fields({s.commit_key.bits.packed()}));
  s.counters.messages_sent += 1;
  s.phase = 4;

  AuthResult r;
  r.peer = msg.sender;
  r.send.push_back(std::move(reply));
  return r;
}

AuthResult AuthPeer::handle_auth4(const ProtocolMessage& msg) {
  auto it = as_initiator_.find(msg.sender);
  if (it == as_initiator_.end() || it->second.phase != 3 || msg.parts.size() != 1) {
    return fail(msg.sender, nullptr);
  }
  Session& s = it->second;
  const SessionCounters snapshot = s.counters;
  auto cleanup = [&] { as_initiator_.erase(it); };

  auto fields = unpack_fields(msg.parts[0]);  // the key reveal travels in the clear
  if (!fields || fields->size() != 1 ||
      (*fields)[0].size() != static_cast<std::size_t>(cfg_.commit_key_bits / 8)) {
    cleanup();
    return fail(msg.sender, &snapshot);
  }
  s.commit_key = key_from_bytes((*fields)[0]);

  auto opened = open_block(s.commit_key, s.pending_commitment);
  if (!opened || opened->size() != 1 || (*opened)[0] != s.challenge_value.packed()) {
    // The commitment does not match this session's secret: stale or forged.
    cleanup();
    return fail(msg.sender, &snapshot);
  }

  ProtocolMessage reply;
  reply.kind = MsgKind::Auth5Data;
  reply.sender = self_.id;
  reply.receiver = s.peer;
  if (scheme_ == Scheme::Banzkp) {
    reply.parts.push_back(
        encrypt_block(self_.initial_key, {id_field(self_.id), s.pending_data}, s.counters));
  } else {
    // First contact of the hop-by-hop scheme: the revealed commitment key only
    // supplies the offset of the real data key inside the session secret.
    s.data_key =
        derive_data_key(s.session_secret, pointer_from_key(s.commit_key, cfg_.params), cfg_.params);
    reply.parts.push_back(
        encrypt_block(s.data_key, {id_field(self_.id), s.pending_data}, s.counters));
  }
  s.counters.messages_sent += 1;

  AuthResult r;
  r.peer = msg.sender;
  r.completed = true;
  r.counters = s.counters;
  r.send.push_back(std::move(reply));
  if (scheme_ == Scheme::BanGzkp) fast_path_to_.insert(msg.sender);
  last_completed_[msg.sender] = s.counters;
  as_initiator_.erase(it);
  return r;
}

AuthResult AuthPeer::handle_auth5(const ProtocolMessage& msg) {
  auto it = as_responder_.find(msg.sender);
  if (it == as_responder_.end() || it->second.phase != 4 || it->second.fast_path ||
      msg.parts.size() != 1) {
    return fail(msg.sender, nullptr);
  }
  Session& s = it->second;
  const SessionCounters snapshot = s.counters;
  auto cleanup = [&] { as_responder_.erase(it); };

  std::optional<std::vector<Bytes>> fields;
  if (scheme_ == Scheme::Banzkp) {
    // Deliberate weakness kept intact: the payload is only bound to the
    // network-wide envelope key and the claimed id, not to session freshness.
    fields = open_block(self_.initial_key, msg.parts[0]);
  } else {
    s.data_key =
        derive_data_key(s.session_secret, pointer_from_key(s.commit_key, cfg_.params), cfg_.params);
    fields = open_block(s.data_key, msg.parts[0]);
  }
  if (!fields || fields->size() != 2 || (*fields)[0].size() != 1 || (*fields)[0][0] != s.peer ||
      (*fields)[1].empty()) {
    cleanup();
    return fail(msg.sender, &snapshot);
  }

  AuthResult r;
  r.peer = msg.sender;
  r.completed = true;
  r.accepted_data = (*fields)[1];
  r.counters = s.counters;
  known_initiators_.insert(s.peer);
  last_completed_[msg.sender] = s.counters;
  as_responder_.erase(it);
  return r;
}

AuthResult AuthPeer::handle_auth3_opt(const ProtocolMessage& msg) {
  auto it = as_responder_.find(msg.sender);
  if (it == as_responder_.end() || it->second.phase != 2 || !it->second.fast_path ||
      msg.parts.size() != 1) {
    return fail(msg.sender, nullptr);
  }
  Session& s = it->second;
  const SessionCounters snapshot = s.counters;
  auto cleanup = [&] { as_responder_.erase(it); };

  auto fields = open_block(s.data_key, msg.parts[0]);
  if (!fields || fields->size() != 2 || (*fields)[0].size() != 1 || (*fields)[0][0] != s.peer ||
      (*fields)[1].empty()) {
    cleanup();
    return fail(msg.sender, &snapshot);
  }

  AuthResult r;
  r.peer = msg.sender;
  r.completed = true;
  r.accepted_data = (*fields)[1];
  r.counters = s.counters;
  last_completed_[msg.sender] = s.counters;
  as_responder_.erase(it);
  return r;
}

std::vector<NodeId> AuthPeer::expire_sessions(std::uint64_t now_us) {
  std::vector<NodeId> lost;
  for (auto it = as_initiator_.begin(); it != as_initiator_.end();) {
    if (now_us >= it->second.deadline_us) {
      lost.push_back(it->first);
      it = as_initiator_.erase(it);
    } else {
      ++it;
    }
  }
  for (auto it = as_responder_.begin(); it != as_responder_.end();) {
    if (now_us >= it->second.deadline_us) {
      it = as_responder_.erase(it);
    } else {
      ++it;
    }
  }
  if (multi_.active && now_us >= multi_.deadline_us) {
    multi_ = PendingMulti{};
    lost.push_back(kBroadcastId);
  }
  return lost;
}

void AuthPeer::abort_initiation(NodeId responder) { as_initiator_.erase(responder); }

bool AuthPeer::knows_initiator(NodeId id) const { return known_initiators_.count(id) != 0; }

void AuthPeer::mark_known(NodeId initiator) { known_initiators_.insert(initiator); }

bool AuthPeer::expects_fast_path(NodeId responder) const {
  return fast_path_to_.count(responder) != 0;
}

void AuthPeer::set_roster(std::vector<NodeId> ids) {
  roster_ = std::set<NodeId>(ids.begin(), ids.end());
}

const Session* AuthPeer::initiator_session(NodeId responder) const {
  auto it = as_initiator_.find(responder);
  return it == as_initiator_.end() ? nullptr : &it->second;
}

const Session* AuthPeer::responder_session(NodeId initiator) const {
  auto it = as_responder_.find(initiator);
  return it == as_responder_.end() ? nullptr : &it->second;
}

bool AuthPeer::has_initiator_session(NodeId responder) const {
  return as_initiator_.count(responder) != 0 || multi_.active;
}

std::optional<SessionCounters> AuthPeer::last_completed(NodeId peer) const {
  auto it = last_completed_.find(peer);
  if (it == last_completed_.end()) return std::nullopt;
  return it->second;
}

}  // namespace wbansec
