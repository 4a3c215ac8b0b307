#include "wbansec/group.hpp"

#include <fstream>
#include <sstream>

namespace wbansec {

namespace {

// 1096-bit prime: nextprime(2^1095) = 2^1095 + 225.  Exactly as wide as the
// secret rendering window, so every group element survives the fixed-width
// wire encoding losslessly.
constexpr const char* kStandardModulusHex =
    "80000000000000000000000000000000000000000000000000000000000000000000"
    "00000000000000000000000000000000000000000000000000000000000000000000"
    "00000000000000000000000000000000000000000000000000000000000000000000"
    "00000000000000000000000000000000000000000000000000000000000000000000"
    "E1";

// 2048-bit MODP prime (the widely deployed Diffie-Hellman group 14 modulus);
// profile for deployments that want a larger group, with the rendering window
// widened to match so wire encoding stays lossless.
constexpr const char* kWideModulusHex =
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
    "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
    "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
    "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
    "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718"
    "3995497CEA956AE515D2261898FA051015728E5A8AACAA68FFFFFFFFFFFFFFFF";

// 256-bit prime 2^256 - 2^32 - 977; small profile for bulk simulation.
constexpr const char* kCompactModulusHex =
    "FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F";

std::string trim(std::string s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.erase(s.begin());
  while (!s.empty() && is_space(s.back())) s.pop_back();
  return s;
}

mpz_class parse_mpz(const std::string& text) {
  std::string t = trim(text);
  int base = 10;
  if (t.rfind("0x", 0) == 0 || t.rfind("0X", 0) == 0) {
    base = 16;
    t = t.substr(2);
  }
  mpz_class v;
  if (t.empty() || mpz_set_str(v.get_mpz_t(), t.c_str(), base) != 0) {
    throw ConfigError("unparseable integer literal: " + text);
  }
  return v;
}

GroupParams make_profile(const char* modulus_hex, int min_secret_bits, int interval_bits,
                         int data_key_bits) {
  GroupParams p;
  p.modulus = parse_mpz(std::string("0x") + modulus_hex);
  p.min_secret_bits = min_secret_bits;
  p.interval_bits = interval_bits;
  p.data_key_bits = data_key_bits;
  p.validate();
  return p;
}

}  // namespace

const GroupParams& GroupParams::standard() {
  static const GroupParams p = make_profile(kStandardModulusHex, 1096, 200, 128);
  return p;
}

const GroupParams& GroupParams::compact() {
  static const GroupParams p = make_profile(kCompactModulusHex, 256, 200, 128);
  return p;
}

const GroupParams& GroupParams::wide() {
  static const GroupParams p = make_profile(kWideModulusHex, 2048, 200, 128);
  return p;
}

GroupParams GroupParams::parse(std::string_view text) {
  GroupParams p;
  p.min_secret_bits = 1096;
  bool have_modulus = false;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected `key = value`: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "modulus") {
      p.modulus = parse_mpz(value);
      have_modulus = true;
    } else if (key == "min_secret_bits") {
      p.min_secret_bits = static_cast<int>(parse_mpz(value).get_si());
    } else if (key == "interval_bits") {
      p.interval_bits = static_cast<int>(parse_mpz(value).get_si());
    } else if (key == "data_key_bits") {
      p.data_key_bits = static_cast<int>(parse_mpz(value).get_si());
    } else {
      throw ConfigError("unknown group parameter key: " + key);
    }
  }
  if (!have_modulus) throw ConfigError("group parameter config lacks a modulus");
  p.validate();
  return p;
}

GroupParams GroupParams::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open group parameter file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void GroupParams::validate() const {
  if (min_secret_bits <= 0 || min_secret_bits % 8 != 0) {
    throw ConfigError("min_secret_bits must be a positive multiple of 8");
  }
  if (interval_bits <= 0 || interval_bits > min_secret_bits) {
    throw ConfigError("interval_bits must lie in [1, min_secret_bits]");
  }
  if (data_key_bits <= 0 || data_key_bits > interval_bits) {
    throw ConfigError("data_key_bits must lie in [1, interval_bits]");
  }
  if (cmp(modulus, 3) <= 0) throw ConfigError("modulus must exceed 3");
  if (mpz_sizeinbase(modulus.get_mpz_t(), 2) < static_cast<std::size_t>(min_secret_bits)) {
    throw ConfigError("modulus bit length must be at least min_secret_bits");
  }
  if (!probably_prime(modulus)) throw ConfigError("modulus must be prime");
}

GroupElement make_element(const mpz_class& value, const GroupParams& params) {
  mpz_class reduced = value % params.modulus;
  if (sgn(reduced) < 0) reduced += params.modulus;
  return GroupElement{reduced};
}

GroupElement pow_secret(const GroupElement& base, const Nonce& exp, const GroupParams& params) {
  if (sgn(base.value) < 0 || cmp(base.value, params.modulus) >= 0) {
    throw DegenerateBase("base must be reduced into [0, modulus)");
  }
  mpz_class top = params.modulus - 1;
  if (cmp(base.value, 1) <= 0 || cmp(base.value, top) == 0) {
    throw DegenerateBase("base collapses the exponentiation (0, 1 or -1)");
  }
  if (cmp(exp.value, 2) < 0) {
    throw DegenerateExponent("exponent must be at least 2");
  }
  GroupElement out;
  mpz_powm(out.value.get_mpz_t(), base.value.get_mpz_t(), exp.value.get_mpz_t(),
           params.modulus.get_mpz_t());
  return out;
}

Nonce random_nonce(DeterministicRng& rng, int bits) {
  if (bits < 2) throw DegenerateExponent("nonce width must allow values >= 2");
  const int full_words = bits / 64;
  const int rem_bits = bits % 64;
  mpz_class v;
  do {
    v = 0;
    for (int i = 0; i < full_words; ++i) {
      v <<= 64;
      v += mpz_class(rng.next_u64());
    }
    if (rem_bits > 0) {
      v <<= rem_bits;
      v += mpz_class(rng.next_u64() >> (64 - rem_bits));
    }
  } while (cmp(v, 2) < 0);
  return Nonce{v};
}

IntervalPointer random_pointer(DeterministicRng& rng, const GroupParams& params) {
  return IntervalPointer{static_cast<int>(rng.below(static_cast<std::uint64_t>(params.min_secret_bits)))};
}

mpz_class mpz_from_bytes(const Bytes& data) {
  mpz_class v = 0;
  if (!data.empty()) {
    mpz_import(v.get_mpz_t(), data.size(), 1 /*msb first*/, 1, 0, 0, data.data());
  }
  return v;
}

Bytes mpz_to_fixed_bytes(const mpz_class& value, int width_bytes) {
  Bytes out(static_cast<std::size_t>(width_bytes), 0);
  if (sgn(value) == 0 || width_bytes == 0) return out;
  // Keep only the low width_bytes*8 bits, then export big-endian.
  mpz_class low;
  mpz_fdiv_r_2exp(low.get_mpz_t(), value.get_mpz_t(), static_cast<mp_bitcnt_t>(width_bytes) * 8);
  std::size_t written = 0;
  Bytes tmp(static_cast<std::size_t>(width_bytes), 0);
  mpz_export(tmp.data(), &written, 1, 1, 0, 0, low.get_mpz_t());
  // mpz_export writes only the significant bytes; right-align them.
  std::copy(tmp.begin(), tmp.begin() + static_cast<long>(written),
            out.begin() + (out.size() - written));
  return out;
}

bool probably_prime(const mpz_class& n, int reps) {
  return mpz_probab_prime_p(n.get_mpz_t(), reps) != 0;
}

}  // namespace wbansec
