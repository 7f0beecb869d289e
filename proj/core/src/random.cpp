#include "lakee/random.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <algorithm>
#include <stdexcept>

#include "lakee/bytes.hpp"

namespace lakee {

std::uint64_t RandomSource::next_u64() {
  std::array<std::uint8_t, 8> buf{};
  fill(buf);
  std::uint64_t v = 0;
  for (auto b : buf) v = (v << 8) | b;
  return v;
}

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
}

SeededRandom::SeededRandom(std::uint64_t seed, std::string_view label) : seed_(seed), label_(label) {}

void SeededRandom::refill() {
  Bytes input;
  put_u64(input, seed_);
  input.insert(input.end(), label_.begin(), label_.end());
  put_u64(input, counter_++);
  unsigned int len = 0;
  if (EVP_Digest(input.data(), input.size(), block_.data(), &len, EVP_sha512(), nullptr) != 1) {
    throw std::runtime_error("SHA-512 failed in SeededRandom");
  }
  used_ = 0;
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
  std::lock_guard lock(mutex_);
  std::size_t written = 0;
  while (written < out.size()) {
    if (used_ == block_.size()) refill();
    auto n = std::min(block_.size() - used_, out.size() - written);
    std::copy_n(block_.begin() + static_cast<std::ptrdiff_t>(used_), n, out.begin() + static_cast<std::ptrdiff_t>(written));
    used_ += n;
    written += n;
  }
}

}  // namespace lakee
