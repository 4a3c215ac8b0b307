#pragma once

#include <cstdint>
#include <vector>

#include "wbansec/cipher.hpp"
#include "wbansec/wire.hpp"

namespace wbansec {

// One wiretapped protocol message, tagged with its protocol phase and the
// logical capture time.
struct CapturedMessage {
  ProtocolMessage msg;
  int phase = 0;
  std::uint64_t time_us = 0;
};

// Everything an eavesdropper has accumulated: observed identities, raw
// messages, keys that travel in plaintext, and byte strings derived offline
// (e.g. XOR combinations of ciphertexts).  Grows monotonically.
class KnowledgeSet {
 public:
  void learn_id(NodeId id);
  // Records the message; an Auth4 key reveal also adds the key to known_keys.
  void capture(const ProtocolMessage& msg, std::uint64_t time_us);
  void learn_key(const SymmetricKey& key);
  void add_derived(Bytes bytes);

  const std::vector<NodeId>& known_ids() const { return ids_; }
  const std::vector<CapturedMessage>& captured_messages() const { return messages_; }
  const std::vector<SymmetricKey>& known_keys() const { return keys_; }
  const std::vector<Bytes>& derived_bytes() const { return derived_; }

  // Messages of a given kind, in capture order.
  std::vector<ProtocolMessage> messages_of_kind(MsgKind kind) const;

  // True if any single piece of knowledge (a captured message's wire bytes, a
  // derived byte string, or a known key) contains `needle` as a substring.
  // Pieces are scanned separately so concatenation cannot fabricate a match.
  bool contains(const Bytes& needle) const;

  // Total number of recorded events; strictly increases with every learn_*,
  // capture, or add_derived call.
  std::size_t event_count() const { return events_; }

 private:
  std::vector<NodeId> ids_;
  std::vector<CapturedMessage> messages_;
  std::vector<SymmetricKey> keys_;
  std::vector<Bytes> derived_;
  std::size_t events_ = 0;
};

// c1 XOR c2 over the common prefix (inputs truncated to the shorter length).
// With the stream cipher's cyclic keying, two ciphertexts under the same key
// XOR to the XOR of their plaintexts — the redundancy leak.
Bytes xor_redundancy(const Bytes& c1, const Bytes& c2);

}  // namespace wbansec
