#include "wbansec/interval.hpp"

namespace wbansec {

BitString fixed_width_bits(const GroupElement& element, const GroupParams& params) {
  const Bytes packed = mpz_to_fixed_bytes(element.value, params.secret_bytes());
  return BitString(packed, static_cast<std::size_t>(params.min_secret_bits));
}

BitString extract_interval(const GroupElement& secret, IntervalPointer start, int length_bits,
                           const GroupParams& params) {
  const int width = params.min_secret_bits;
  if (start.start_bit < 0 || start.start_bit >= width) {
    throw PointerOutOfRange("interval start must lie in [0, min_secret_bits)");
  }
  if (length_bits <= 0 || length_bits > width) {
    throw PointerOutOfRange("interval length must lie in [1, min_secret_bits]");
  }
  const BitString rendered = fixed_width_bits(secret, params);
  BitString out = BitString::zeros(static_cast<std::size_t>(length_bits));
  for (int i = 0; i < length_bits; ++i) {
    const int src = (start.start_bit + i) % width;  // cyclic wrap-around
    out.set_bit(static_cast<std::size_t>(i), rendered.bit(static_cast<std::size_t>(src)));
  }
  return out;
}

SymmetricKey derive_data_key(const GroupElement& secret, IntervalPointer start,
                             const GroupParams& params) {
  return SymmetricKey{extract_interval(secret, start, params.data_key_bits, params)};
}

IntervalPointer pointer_from_key(const SymmetricKey& key, const GroupParams& params) {
  if (key.empty()) throw EmptyKey("cannot derive a pointer from an empty key");
  const mpz_class v = mpz_from_bytes(key.bits.packed());
  mpz_class reduced = v % params.min_secret_bits;
  return IntervalPointer{static_cast<int>(reduced.get_si())};
}

}  // namespace wbansec
