#pragma once

#include "wbansec/bytes.hpp"
#include "wbansec/errors.hpp"

namespace wbansec {

// Key for the bit-cyclic XOR stream cipher.  Keys shorter than the plaintext
// repeat cyclically; this keeps the cipher an involution and deliberately
// leaks C1 xor C2 = M1 xor M2 under key reuse, which the redundancy attack
// exploits.
struct SymmetricKey {
  BitString bits;

  bool empty() const { return bits.empty(); }

  friend bool operator==(const SymmetricKey& a, const SymmetricKey& b) {
    return a.bits == b.bits;
  }
};

SymmetricKey key_from_bytes(const Bytes& data);

// out_bit[i] = in_bit[i] xor key_bit[i mod key_len].  Involution: applying it
// twice with the same key returns the input.  Throws EmptyKey on empty keys.
Bytes stream_encrypt(const SymmetricKey& key, const Bytes& input);
inline Bytes stream_decrypt(const SymmetricKey& key, const Bytes& input) {
  return stream_encrypt(key, input);
}

}  // namespace wbansec
