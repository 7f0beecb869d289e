#pragma once

// Fixed symmetric suite: AES-128-CCM (88-bit nonce, 128-bit tag),
// PBKDF2-HMAC-SHA512 (16 iterations, empty salt) and SHA-1 for client IDs.
// SHA-1 is kept only for the client-ID digest; swap hash_client_id if the
// deployment allows a different digest width.

#include <array>
#include <cstdint>
#include <optional>

#include "lakee/bytes.hpp"

namespace lakee::crypto {

inline constexpr std::size_t kKeyBytes = 16;
inline constexpr std::size_t kNonceBytes = 11;
inline constexpr std::size_t kTagBytes = 16;
inline constexpr std::size_t kClientIdDigestBytes = 20;
inline constexpr unsigned kKdfIterations = 16;

using KeyBytes = std::array<std::uint8_t, kKeyBytes>;
using Nonce = std::array<std::uint8_t, kNonceBytes>;
using Tag = std::array<std::uint8_t, kTagBytes>;
using ClientIdDigest = std::array<std::uint8_t, kClientIdDigestBytes>;
using Sha512Digest = std::array<std::uint8_t, 64>;

/// Pre-shared 128-bit secret Y. Never placed on the wire.
class LongTermKey {
 public:
  explicit LongTermKey(const KeyBytes& bytes) : bytes_(bytes) {}
  /// Throws std::invalid_argument unless exactly 16 bytes.
  static LongTermKey from_bytes(ByteView bytes);

  const KeyBytes& bytes() const { return bytes_; }
  bool operator==(const LongTermKey&) const = default;

 private:
  KeyBytes bytes_;
};

enum class CoordinateOrigin { x, y };

class SessionKey {
 public:
  SessionKey(const KeyBytes& bytes, CoordinateOrigin origin) : bytes_(bytes), origin_(origin) {}

  const KeyBytes& bytes() const { return bytes_; }
  CoordinateOrigin derived_from() const { return origin_; }
  bool operator==(const SessionKey&) const = default;

 private:
  KeyBytes bytes_;
  CoordinateOrigin origin_;
};

struct AeadEnvelope {
  Nonce nonce{};
  Bytes ciphertext;
  Tag tag{};

  bool operator==(const AeadEnvelope&) const = default;
};

AeadEnvelope aead_seal(const LongTermKey& key, const Nonce& nonce, ByteView plaintext);

/// nullopt means AuthFailure: wrong key and tampering look the same, and no
/// plaintext is released on failure.
std::optional<Bytes> aead_open(const LongTermKey& key, const AeadEnvelope& envelope);

/// PBKDF2-HMAC-SHA512, 16 iterations, empty salt, 128-bit output.
/// Throws std::invalid_argument on an empty seed.
KeyBytes kdf(ByteView seed);

/// Generic PBKDF2-HMAC-SHA512 used by kdf().
Bytes pbkdf2_hmac_sha512(ByteView password, ByteView salt, unsigned iterations, std::size_t out_len);

Sha512Digest hmac_sha512(ByteView key, ByteView message);

/// SHA-1 of the 8-byte big-endian identifier.
ClientIdDigest hash_client_id(std::uint64_t client_id);

}  // namespace lakee::crypto
