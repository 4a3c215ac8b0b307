#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "wbansec/bytes.hpp"
#include "wbansec/errors.hpp"
#include "wbansec/rng.hpp"

namespace wbansec {

// Public parameters of the commutative-exponentiation group used by both
// authentication schemes.  All nodes share the same fixed prime modulus; the
// secret material is the group element V, never the modulus.
//
//   min_secret_bits  fixed render width of a secret element (bit string length)
//   interval_bits    length of the challenge interval extracted from V^(pq)
//   data_key_bits    length of a derived session data key
struct GroupParams {
  mpz_class modulus;
  int min_secret_bits = 1096;
  int interval_bits = 200;
  int data_key_bits = 128;

  // 1096-bit prime, matching the default render width exactly so that group
  // elements round-trip the wire encoding losslessly; the default profile.
  static const GroupParams& standard();
  // 256-bit prime profile for high-volume simulation runs; satisfies the same
  // structural invariants, just with smaller material.
  static const GroupParams& compact();
  // 2048-bit MODP prime with the render window widened to 2048 bits; for
  // deployments that want a larger group at the cost of bigger messages.
  static const GroupParams& wide();

  // Plain-text config: `key = value` lines, '#' comments.  Keys: modulus
  // (decimal, or hexadecimal with 0x prefix), min_secret_bits, interval_bits,
  // data_key_bits.  Missing numeric keys keep their defaults.
  static GroupParams parse(std::string_view text);
  static GroupParams from_file(const std::string& path);

  // Throws ConfigError unless all of: modulus prime and > 3 with bit length
  // >= min_secret_bits (so renders are lossless), min_secret_bits a positive
  // multiple of 8, 0 < interval_bits <= min_secret_bits, and
  // 0 < data_key_bits <= interval_bits.
  void validate() const;

  int secret_bytes() const { return min_secret_bits / 8; }
};

struct GroupElement {
  mpz_class value;

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return cmp(a.value, b.value) == 0;
  }
};

struct Nonce {
  mpz_class value;
};

// Start offset of a cyclic bit interval inside the fixed-width rendering of a
// secret element; always in [0, min_secret_bits).
struct IntervalPointer {
  int start_bit = 0;

  friend bool operator==(const IntervalPointer&, const IntervalPointer&) = default;
};

GroupElement make_element(const mpz_class& value, const GroupParams& params);

// Modular exponentiation base^exp mod modulus.  Rejects degenerate inputs that
// would collapse the zero-knowledge relation: base in {0, 1, modulus-1} or
// value 1 after reduction throws DegenerateBase, exp < 2 throws
// DegenerateExponent.
GroupElement pow_secret(const GroupElement& base, const Nonce& exp, const GroupParams& params);

// Uniform nonce in [2, 2^bits); uniform pointer in [0, min_secret_bits).
Nonce random_nonce(DeterministicRng& rng, int bits = 256);
IntervalPointer random_pointer(DeterministicRng& rng, const GroupParams& params);

// Big-endian conversions.  mpz_to_fixed_bytes keeps the low `width_bytes`
// bytes of the value (values wider than the window are truncated to the
// low-order bits, matching the fixed-width bit rendering).
mpz_class mpz_from_bytes(const Bytes& data);
Bytes mpz_to_fixed_bytes(const mpz_class& value, int width_bytes);

bool probably_prime(const mpz_class& n, int reps = 32);

}  // namespace wbansec
