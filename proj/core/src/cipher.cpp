#include "wbansec/cipher.hpp"

namespace wbansec {

SymmetricKey key_from_bytes(const Bytes& data) {
  return SymmetricKey{BitString(data, data.size() * 8)};
}

Bytes stream_encrypt(const SymmetricKey& key, const Bytes& input) {
  if (key.empty()) throw EmptyKey("stream cipher requires a non-empty key");
  const std::size_t klen = key.bits.size();
  Bytes out(input.size());

  if (klen % 8 == 0) {
    // Byte-aligned key: cyclic byte XOR.
    const Bytes& kb = key.bits.packed();
    const std::size_t kbytes = kb.size();
    for (std::size_t i = 0; i < input.size(); ++i) {
      out[i] = static_cast<std::uint8_t>(input[i] ^ kb[i % kbytes]);
    }
    return out;
  }

  // General path: pure bit-cyclic XOR.
  for (std::size_t i = 0; i < input.size(); ++i) {
    std::uint8_t b = input[i];
    std::uint8_t k = 0;
    for (int bitpos = 0; bitpos < 8; ++bitpos) {
      const std::size_t bit_index = i * 8 + static_cast<std::size_t>(bitpos);
      if (key.bits.bit(bit_index % klen)) {
        k |= static_cast<std::uint8_t>(1u << (7 - bitpos));
      }
    }
    out[i] = static_cast<std::uint8_t>(b ^ k);
  }
  return out;
}

}  // namespace wbansec
