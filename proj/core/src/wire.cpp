#include "wbansec/wire.hpp"

namespace wbansec {

namespace {
constexpr std::size_t kMaxParts = 4;
constexpr std::size_t kMaxFields = 8;
constexpr std::size_t kMaxWire = 64 * 1024;
}  // namespace

const char* msg_kind_name(MsgKind kind) {
  switch (kind) {
    case MsgKind::Auth1: return "Auth1";
    case MsgKind::Auth2: return "Auth2";
    case MsgKind::Auth3: return "Auth3";
    case MsgKind::Auth4: return "Auth4";
    case MsgKind::Auth5Data: return "Auth5Data";
    case MsgKind::Auth2Opt: return "Auth2Opt";
    case MsgKind::Auth3OptData: return "Auth3OptData";
  }
  return "Unknown";
}

int msg_phase(MsgKind kind) {
  switch (kind) {
    case MsgKind::Auth1: return 1;
    case MsgKind::Auth2: return 2;
    case MsgKind::Auth3: return 3;
    case MsgKind::Auth4: return 4;
    case MsgKind::Auth5Data: return 5;
    case MsgKind::Auth2Opt: return 2;
    case MsgKind::Auth3OptData: return 3;
  }
  return 0;
}

void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

std::uint16_t read_u16(const Bytes& in, std::size_t offset) {
  return static_cast<std::uint16_t>((in[offset] << 8) | in[offset + 1]);
}

Bytes ProtocolMessage::encode() const {
  Bytes out;
  out.push_back(static_cast<std::uint8_t>(kind));
  out.push_back(sender);
  out.push_back(receiver);
  for (const Bytes& part : parts) {
    put_u16(out, static_cast<std::uint16_t>(part.size()));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::optional<ProtocolMessage> ProtocolMessage::decode(const Bytes& wire) {
  if (wire.size() < 3 || wire.size() > kMaxWire) return std::nullopt;
  const std::uint8_t tag = wire[0];
  if (tag < 1 || tag > 7) return std::nullopt;
  ProtocolMessage msg;
  msg.kind = static_cast<MsgKind>(tag);
  msg.sender = wire[1];
  msg.receiver = wire[2];
  std::size_t pos = 3;
  while (pos < wire.size()) {
    if (pos + 2 > wire.size()) return std::nullopt;
    const std::size_t len = read_u16(wire, pos);
    pos += 2;
    if (pos + len > wire.size()) return std::nullopt;
    if (msg.parts.size() >= kMaxParts) return std::nullopt;
    msg.parts.emplace_back(wire.begin() + static_cast<long>(pos),
                           wire.begin() + static_cast<long>(pos + len));
    pos += len;
  }
  if (msg.parts.empty()) return std::nullopt;
  return msg;
}

Bytes pack_fields(const std::vector<Bytes>& fields) {
  Bytes out;
  for (const Bytes& f : fields) {
    put_u16(out, static_cast<std::uint16_t>(f.size()));
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

std::optional<std::vector<Bytes>> unpack_fields(const Bytes& block) {
  std::vector<Bytes> fields;
  std::size_t pos = 0;
  while (pos < block.size()) {
    if (pos + 2 > block.size()) return std::nullopt;
    const std::size_t len = read_u16(block, pos);
    pos += 2;
    if (pos + len > block.size()) return std::nullopt;
    if (fields.size() >= kMaxFields) return std::nullopt;
    fields.emplace_back(block.begin() + static_cast<long>(pos),
                        block.begin() + static_cast<long>(pos + len));
    pos += len;
  }
  if (fields.empty()) return std::nullopt;
  return fields;
}

}  // namespace wbansec
