#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wbansec {

using Bytes = std::vector<std::uint8_t>;

std::string to_hex(const Bytes& data);
Bytes from_hex(std::string_view hex);  // throws std::invalid_argument on malformed input

// FNV-1a, used for short stable digests in transcripts and logs.
std::uint64_t fnv1a64(const Bytes& data);

// True when `needle` occurs as a contiguous byte run inside `haystack`.
bool contains_bytes(const Bytes& haystack, const Bytes& needle);

// A bit string with an explicit length.  Bit 0 is the most significant bit of
// byte 0; any trailing pad bits in the last byte are kept at zero so packed
// representations compare canonically.
class BitString {
 public:
  BitString() = default;
  BitString(Bytes packed, std::size_t bit_count);
  static BitString zeros(std::size_t bit_count);
  static BitString parse(std::string_view ascii01);  // e.g. "10110"

  std::size_t size() const { return bit_count_; }
  bool empty() const { return bit_count_ == 0; }
  bool bit(std::size_t i) const;
  void set_bit(std::size_t i, bool value);
  const Bytes& packed() const { return bytes_; }
  std::string to_string01() const;

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.bit_count_ == b.bit_count_ && a.bytes_ == b.bytes_;
  }

 private:
  Bytes bytes_;
  std::size_t bit_count_ = 0;
};

}  // namespace wbansec
