#include "wbansec/bytes.hpp"

#include <algorithm>
#include <stdexcept>

namespace wbansec {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

std::string to_hex(const Bytes& data) {
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_value(hex[i]);
    int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("hex string has non-hex character");
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

std::uint64_t fnv1a64(const Bytes& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t b : data) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

bool contains_bytes(const Bytes& haystack, const Bytes& needle) {
  if (needle.empty()) return true;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

BitString::BitString(Bytes packed, std::size_t bit_count) : bytes_(std::move(packed)), bit_count_(bit_count) {
  const std::size_t needed = (bit_count_ + 7) / 8;
  if (bytes_.size() != needed) throw std::invalid_argument("packed size does not match bit count");
  // Canonicalize: clear any pad bits in the final byte.
  if (bit_count_ % 8 != 0 && !bytes_.empty()) {
    const std::uint8_t mask = static_cast<std::uint8_t>(0xff00 >> (bit_count_ % 8));
    bytes_.back() &= mask;
  }
}

BitString BitString::zeros(std::size_t bit_count) {
  return BitString(Bytes((bit_count + 7) / 8, 0), bit_count);
}

BitString BitString::parse(std::string_view ascii01) {
  BitString out = zeros(ascii01.size());
  for (std::size_t i = 0; i < ascii01.size(); ++i) {
    if (ascii01[i] == '1') {
      out.set_bit(i, true);
    } else if (ascii01[i] != '0') {
      throw std::invalid_argument("bit string literal must contain only 0/1");
    }
  }
  return out;
}

bool BitString::bit(std::size_t i) const {
  return (bytes_[i / 8] >> (7 - i % 8)) & 1u;
}

void BitString::set_bit(std::size_t i, bool value) {
  const std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - i % 8));
  if (value) {
    bytes_[i / 8] |= mask;
  } else {
    bytes_[i / 8] &= static_cast<std::uint8_t>(~mask);
  }
}

std::string BitString::to_string01() const {
  std::string out;
  out.reserve(bit_count_);
  for (std::size_t i = 0; i < bit_count_; ++i) out.push_back(bit(i) ? '1' : '0');
  return out;
}

}  // namespace wbansec
