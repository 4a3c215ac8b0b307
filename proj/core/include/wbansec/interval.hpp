#pragma once

#include "wbansec/cipher.hpp"
#include "wbansec/group.hpp"

namespace wbansec {

// Fixed-width rendering of a group element: the low `min_secret_bits` bits of
// its value, most significant bit first, zero padded on the left.  Both ends
// of a session must agree on this rendering bit-for-bit, otherwise interval
// extraction diverges.
BitString fixed_width_bits(const GroupElement& element, const GroupParams& params);

// Cyclic interval extraction: bits [start, start+length) of the fixed-width
// rendering, wrapping around at min_secret_bits.  start must lie in
// [0, min_secret_bits) (PointerOutOfRange otherwise); length must be in
// [1, min_secret_bits].
BitString extract_interval(const GroupElement& secret, IntervalPointer start, int length_bits,
                           const GroupParams& params);

// Session data key: the data_key_bits-long interval starting at `start`.
SymmetricKey derive_data_key(const GroupElement& secret, IntervalPointer start,
                             const GroupParams& params);

// Reduces transmitted key material to a start pointer: the key bits read as a
// big-endian integer, modulo min_secret_bits.  Used when a commitment key is
// repurposed as the pointer for the first-contact data key.
IntervalPointer pointer_from_key(const SymmetricKey& key, const GroupParams& params);

}  // namespace wbansec
