#pragma once

#include <cstdint>

namespace lakee::metrics {

/// Primitive-operation counters. Counting is per thread; a measurement
/// drives both handshake parties on one thread and reads the sum.
struct OpCounters {
  std::uint64_t ecpm = 0;             // scalar multiplications, subgroup checks included
  std::uint64_t ecpa = 0;             // protocol point additions
  std::uint64_t subgroup_checks = 0;  // the n*Q = O share of ecpm
  std::uint64_t aead_seal = 0;
  std::uint64_t aead_open = 0;
  std::uint64_t hash_direct = 0;  // hash_client_id
  std::uint64_t hash_kdf = 0;     // SHA-512 invocations inside HMAC/PBKDF2

  std::uint64_t aead_ops() const { return aead_seal + aead_open; }
  std::uint64_t hash_ops() const { return hash_direct + hash_kdf; }

  bool operator==(const OpCounters&) const = default;
};

OpCounters& counters();
void reset();

}  // namespace lakee::metrics
