#pragma once

#include <array>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <string_view>

namespace lakee {

/// Source of key-grade random bytes. Implementations must tolerate
/// concurrent fill() calls.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  std::uint64_t next_u64();
};

/// Operating-system CSPRNG (OpenSSL RAND_bytes).
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

/// Deterministic stream: SHA-512(seed || label || counter) blocks.
/// Used wherever a run has to be reproducible from a --seed flag.
class SeededRandom final : public RandomSource {
 public:
  SeededRandom(std::uint64_t seed, std::string_view label);

  void fill(std::span<std::uint8_t> out) override;

 private:
  void refill();

  std::mutex mutex_;
  std::uint64_t seed_;
  std::string label_;
  std::uint64_t counter_ = 0;
  std::array<std::uint8_t, 64> block_{};
  std::size_t used_ = block_.size();
};

}  // namespace lakee
