#include "lakee/crypto/suite.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

#include "lakee/metrics.hpp"

namespace lakee::crypto {

namespace {

using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)>;

CipherCtx new_cipher_ctx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new(), &EVP_CIPHER_CTX_free);
  if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
  return ctx;
}

void check(int rc, const char* what) {
  if (rc != 1) throw std::runtime_error(what);
}

constexpr std::size_t kSha512Block = 128;

Sha512Digest sha512(ByteView a, ByteView b) {
  ++metrics::counters().hash_kdf;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx) throw std::runtime_error("EVP_MD_CTX_new failed");
  Sha512Digest out{};
  unsigned int len = 0;
  check(EVP_DigestInit_ex(ctx.get(), EVP_sha512(), nullptr), "SHA-512 init");
  check(EVP_DigestUpdate(ctx.get(), a.data(), a.size()), "SHA-512 update");
  check(EVP_DigestUpdate(ctx.get(), b.data(), b.size()), "SHA-512 update");
  check(EVP_DigestFinal_ex(ctx.get(), out.data(), &len), "SHA-512 final");
  return out;
}

}  // namespace

LongTermKey LongTermKey::from_bytes(ByteView bytes) {
  if (bytes.size() != kKeyBytes) throw std::invalid_argument("long-term key must be 16 bytes");
  KeyBytes k{};
  std::copy(bytes.begin(), bytes.end(), k.begin());
  return LongTermKey(k);
}

AeadEnvelope aead_seal(const LongTermKey& key, const Nonce& nonce, ByteView plaintext) {
  ++metrics::counters().aead_seal;
  auto ctx = new_cipher_ctx();
  AeadEnvelope env;
  env.nonce = nonce;
  env.ciphertext.resize(plaintext.size());
  int len = 0;
  check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_ccm(), nullptr, nullptr, nullptr), "CCM init");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_IVLEN, kNonceBytes, nullptr), "CCM ivlen");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG, kTagBytes, nullptr), "CCM taglen");
  check(EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.bytes().data(), nonce.data()), "CCM key");
  check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, nullptr, static_cast<int>(plaintext.size())), "CCM length");
  // A null output pointer means "set length" to OpenSSL, so an empty
  // message still needs a real buffer.
  std::uint8_t empty = 0;
  std::uint8_t* out = plaintext.empty() ? &empty : env.ciphertext.data();
  const std::uint8_t* in = plaintext.empty() ? &empty : plaintext.data();
  check(EVP_EncryptUpdate(ctx.get(), out, &len, in, static_cast<int>(plaintext.size())), "CCM encrypt");
  check(EVP_EncryptFinal_ex(ctx.get(), out + len, &len), "CCM final");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_GET_TAG, kTagBytes, env.tag.data()), "CCM tag");
  return env;
}

std::optional<Bytes> aead_open(const LongTermKey& key, const AeadEnvelope& envelope) {
  ++metrics::counters().aead_open;
  auto ctx = new_cipher_ctx();
  Bytes plaintext(envelope.ciphertext.size());
  Tag tag = envelope.tag;
  int len = 0;
  check(EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_ccm(), nullptr, nullptr, nullptr), "CCM init");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_IVLEN, kNonceBytes, nullptr), "CCM ivlen");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG, kTagBytes, tag.data()), "CCM tag");
  check(EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.bytes().data(), envelope.nonce.data()), "CCM key");
  check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, nullptr, static_cast<int>(envelope.ciphertext.size())),
        "CCM length");
  std::uint8_t empty = 0;
  std::uint8_t* out = plaintext.empty() ? &empty : plaintext.data();
  const std::uint8_t* in = plaintext.empty() ? &empty : envelope.ciphertext.data();
  int ok = EVP_DecryptUpdate(ctx.get(), out, &len, in, static_cast<int>(envelope.ciphertext.size()));
  if (ok != 1) {
    OPENSSL_cleanse(plaintext.data(), plaintext.size());
    return std::nullopt;
  }
  return plaintext;
}

Sha512Digest hmac_sha512(ByteView key, ByteView message) {
  std::array<std::uint8_t, kSha512Block> block{};
  if (key.size() > kSha512Block) {
    auto hashed = sha512(key, {});
    std::copy(hashed.begin(), hashed.end(), block.begin());
  } else {
    std::copy(key.begin(), key.end(), block.begin());
  }
  std::array<std::uint8_t, kSha512Block> ipad{};
  std::array<std::uint8_t, kSha512Block> opad{};
  for (std::size_t i = 0; i < kSha512Block; ++i) {
    ipad[i] = block[i] ^ 0x36;
    opad[i] = block[i] ^ 0x5c;
  }
  auto inner = sha512(ipad, message);
  auto outer = sha512(opad, inner);
  OPENSSL_cleanse(block.data(), block.size());
  OPENSSL_cleanse(ipad.data(), ipad.size());
  OPENSSL_cleanse(opad.data(), opad.size());
  return outer;
}

Bytes pbkdf2_hmac_sha512(ByteView password, ByteView salt, unsigned iterations, std::size_t out_len) {
  if (iterations == 0) throw std::invalid_argument("PBKDF2 needs at least one iteration");
  Bytes out;
  out.reserve(out_len);
  for (std::uint32_t block_index = 1; out.size() < out_len; ++block_index) {
    Bytes first(salt.begin(), salt.end());
    put_u32(first, block_index);
    Sha512Digest u = hmac_sha512(password, first);
    Sha512Digest t = u;
    for (unsigned i = 1; i < iterations; ++i) {
      u = hmac_sha512(password, u);
      for (std::size_t j = 0; j < t.size(); ++j) t[j] ^= u[j];
    }
    std::size_t take = std::min(t.size(), out_len - out.size());
    out.insert(out.end(), t.begin(), t.begin() + static_cast<std::ptrdiff_t>(take));
  }
  return out;
}

KeyBytes kdf(ByteView seed) {
  if (seed.empty()) throw std::invalid_argument("kdf seed must be nonempty");
  Bytes derived = pbkdf2_hmac_sha512(seed, {}, kKdfIterations, kKeyBytes);
  KeyBytes out{};
  std::copy(derived.begin(), derived.end(), out.begin());
  OPENSSL_cleanse(derived.data(), derived.size());
  return out;
}

ClientIdDigest hash_client_id(std::uint64_t client_id) {
  ++metrics::counters().hash_direct;
  Bytes id;
  put_u64(id, client_id);
  ClientIdDigest out{};
  unsigned int len = 0;
  check(EVP_Digest(id.data(), id.size(), out.data(), &len, EVP_sha1(), nullptr), "SHA-1");
  return out;
}

}  // namespace lakee::crypto
