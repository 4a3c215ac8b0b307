#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wbansec/bytes.hpp"

namespace wbansec {

using NodeId = std::uint8_t;
inline constexpr NodeId kBroadcastId = 0xff;

// One tag per protocol phase.  Auth1..Auth5Data is the full five-message
// exchange (always used by the end-to-end scheme, and on first contact by the
// hop-by-hop scheme).  Auth2Opt/Auth3OptData realize the shortened three
// message exchange between nodes that have already authenticated once.
enum class MsgKind : std::uint8_t {
  Auth1 = 1,
  Auth2 = 2,
  Auth3 = 3,
  Auth4 = 4,
  Auth5Data = 5,
  Auth2Opt = 6,
  Auth3OptData = 7,
};

const char* msg_kind_name(MsgKind kind);
int msg_phase(MsgKind kind);  // 1..5; Auth2Opt -> 2, Auth3OptData -> 3

// Wire format: [tag u8][sender u8][receiver u8] then each part prefixed with
// a big-endian u16 length.  A part is either an encrypted field block or (for
// the plaintext commitment-key reveal) an unencrypted field block.  A field
// block is the concatenation of fields, each prefixed with a big-endian u16
// length; encryption applies to the whole block.
struct ProtocolMessage {
  MsgKind kind{};
  NodeId sender = 0;
  NodeId receiver = 0;
  std::vector<Bytes> parts;

  Bytes encode() const;
  static std::optional<ProtocolMessage> decode(const Bytes& wire);

  friend bool operator==(const ProtocolMessage&, const ProtocolMessage&) = default;
};

Bytes pack_fields(const std::vector<Bytes>& fields);
std::optional<std::vector<Bytes>> unpack_fields(const Bytes& block);

void put_u16(Bytes& out, std::uint16_t v);
std::uint16_t read_u16(const Bytes& in, std::size_t offset);

}  // namespace wbansec
