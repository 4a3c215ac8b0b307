#include "doctest.h"
#include "wbansec/interval.hpp"

using namespace wbansec;

namespace {

GroupParams tiny_params(std::uint64_t prime_modulus, int width_bits, int interval, int key) {
  GroupParams p;
  p.modulus = mpz_class(static_cast<unsigned long>(prime_modulus));
  p.min_secret_bits = width_bits;
  p.interval_bits = interval;
  p.data_key_bits = key;
  return p;
}

}  // namespace

TEST_SUITE("interval") {

TEST_CASE("fixed-width rendering: low bits, most significant first") {
  // 179 = 0b10110011 rendered over 8 bits.
  GroupParams p = tiny_params(257, 8, 8, 8);
  GroupElement e{mpz_class(179)};
  CHECK(fixed_width_bits(e, p).to_string01() == "10110011");

  // Values wider than the window keep only the low-order bits: 131070 =
  // 0x1FFFE renders over 16 bits as 0xFFFE.
  GroupParams p16 = tiny_params(131071ull, 16, 16, 8);
  GroupElement wide{mpz_class(131070)};
  CHECK(fixed_width_bits(wide, p16).to_string01() == "1111111111111110");
}

TEST_CASE("cyclic extraction wraps around the rendered width") {
  GroupParams p = tiny_params(257, 8, 8, 8);
  GroupElement e{mpz_class(179)};  // 10110011
  // Bits 6,7 then wrap to 0,1,2.
  CHECK(extract_interval(e, IntervalPointer{6}, 5, p).to_string01() == "11101");
  CHECK(extract_interval(e, IntervalPointer{0}, 8, p).to_string01() == "10110011");
  CHECK(extract_interval(e, IntervalPointer{7}, 8, p).to_string01() == "11011001");

  GroupParams p16 = tiny_params(65537ull, 16, 16, 8);
  GroupElement beef{mpz_class(0xBEEF)};  // 1011111011101111
  CHECK(extract_interval(beef, IntervalPointer{12}, 8, p16).to_string01() == "11111011");
}

TEST_CASE("extraction against an independent bit-gather oracle at full width") {
  const GroupParams& params = GroupParams::standard();
  DeterministicRng rng(2024);
  const GroupElement secret = make_element(mpz_from_bytes(rng.bytes(256)), params);
  const BitString rendered = fixed_width_bits(secret, params);
  for (int trial = 0; trial < 50; ++trial) {
    const IntervalPointer start = random_pointer(rng, params);
    const int len = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(params.min_secret_bits)));
    const BitString got = extract_interval(secret, start, len, params);
    REQUIRE(got.size() == static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) {
      const int src = (start.start_bit + i) % params.min_secret_bits;
      REQUIRE(got.bit(static_cast<std::size_t>(i)) == rendered.bit(static_cast<std::size_t>(src)));
    }
  }
}

TEST_CASE("pointer and length bounds are enforced") {
  const GroupParams& p = GroupParams::compact();
  GroupElement e{mpz_class(12345)};
  CHECK_THROWS_AS(extract_interval(e, IntervalPointer{-1}, 8, p), PointerOutOfRange);
  CHECK_THROWS_AS(extract_interval(e, IntervalPointer{p.min_secret_bits}, 8, p), PointerOutOfRange);
  CHECK_THROWS_AS(extract_interval(e, IntervalPointer{0}, 0, p), PointerOutOfRange);
  CHECK_THROWS_AS(extract_interval(e, IntervalPointer{0}, p.min_secret_bits + 1, p),
                  PointerOutOfRange);
  CHECK_NOTHROW(extract_interval(e, IntervalPointer{p.min_secret_bits - 1}, p.min_secret_bits, p));
}

TEST_CASE("data keys come from the pointed interval") {
  const GroupParams& p = GroupParams::compact();
  DeterministicRng rng(5);
  const GroupElement secret = make_element(mpz_from_bytes(rng.bytes(64)), p);
  const IntervalPointer ptr{200};
  const SymmetricKey key = derive_data_key(secret, ptr, p);
  CHECK(key.bits.size() == static_cast<std::size_t>(p.data_key_bits));
  CHECK(key.bits == extract_interval(secret, ptr, p.data_key_bits, p));
}

TEST_CASE("transmitted key material reduces to a start pointer") {
  const GroupParams& full = GroupParams::standard();  // width 1096
  SymmetricKey k5 = key_from_bytes({0x00, 0x05});
  CHECK(pointer_from_key(k5, full).start_bit == 5);
  // 0x0457 = 1111; 1111 mod 1096 = 15.
  SymmetricKey k1111 = key_from_bytes({0x04, 0x57});
  CHECK(pointer_from_key(k1111, full).start_bit == 15);
  CHECK_THROWS_AS(pointer_from_key(SymmetricKey{}, full), EmptyKey);
}

TEST_CASE("both sides of a blinded exchange derive identical key material") {
  const GroupParams& params = GroupParams::compact();
  DeterministicRng rng(77);
  const GroupElement v = make_element(mpz_from_bytes(rng.bytes(64)), params);
  const Nonce p = random_nonce(rng), q = random_nonce(rng);
  const GroupElement initiator_secret = pow_secret(pow_secret(v, q, params), p, params);
  const GroupElement responder_secret = pow_secret(pow_secret(v, p, params), q, params);
  const IntervalPointer ptr = random_pointer(rng, params);
  CHECK(extract_interval(initiator_secret, ptr, params.interval_bits, params) ==
        extract_interval(responder_secret, ptr, params.interval_bits, params));
  CHECK(derive_data_key(initiator_secret, ptr, params) ==
        derive_data_key(responder_secret, ptr, params));
}

}  // TEST_SUITE
