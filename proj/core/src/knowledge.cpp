#include "wbansec/knowledge.hpp"

#include <algorithm>

namespace wbansec {

void KnowledgeSet::learn_id(NodeId id) {
  if (std::find(ids_.begin(), ids_.end(), id) == ids_.end()) ids_.push_back(id);
  ++events_;
}

void KnowledgeSet::capture(const ProtocolMessage& msg, std::uint64_t time_us) {
  messages_.push_back(CapturedMessage{msg, msg_phase(msg.kind), time_us});
  ++events_;
  learn_id(msg.sender);
  learn_id(msg.receiver);
  if (msg.kind == MsgKind::Auth4 && !msg.parts.empty()) {
    // The phase-4 key reveal travels in plaintext: a single field block
    // holding the commitment key bytes.
    const auto fields = unpack_fields(msg.parts[0]);
    if (fields && fields->size() == 1 && !(*fields)[0].empty()) {
      learn_key(key_from_bytes((*fields)[0]));
    }
  }
}

void KnowledgeSet::learn_key(const SymmetricKey& key) {
  const auto same = [&](const SymmetricKey& k) { return k.bits == key.bits; };
  if (std::find_if(keys_.begin(), keys_.end(), same) == keys_.end()) keys_.push_back(key);
  ++events_;
}

void KnowledgeSet::add_derived(Bytes bytes) {
  derived_.push_back(std::move(bytes));
  ++events_;
}

std::vector<ProtocolMessage> KnowledgeSet::messages_of_kind(MsgKind kind) const {
  std::vector<ProtocolMessage> out;
  for (const CapturedMessage& c : messages_) {
    if (c.msg.kind == kind) out.push_back(c.msg);
  }
  return out;
}

bool KnowledgeSet::contains(const Bytes& needle) const {
  for (const CapturedMessage& c : messages_) {
    if (contains_bytes(c.msg.encode(), needle)) return true;
  }
  for (const Bytes& d : derived_) {
    if (contains_bytes(d, needle)) return true;
  }
  for (const SymmetricKey& k : keys_) {
    if (contains_bytes(k.bits.packed(), needle)) return true;
  }
  return false;
}

Bytes xor_redundancy(const Bytes& c1, const Bytes& c2) {
  const std::size_t n = std::min(c1.size(), c2.size());
  Bytes out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(c1[i] ^ c2[i]);
  return out;
}

}  // namespace wbansec
