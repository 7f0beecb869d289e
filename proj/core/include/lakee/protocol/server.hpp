#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <variant>

#include "lakee/address.hpp"
#include "lakee/curve/group.hpp"
#include "lakee/protocol/keystore.hpp"
#include "lakee/protocol/session.hpp"
#include "lakee/random.hpp"

namespace lakee::protocol {

struct Msg2Reply {
  HandshakeMsg2 msg;
  bool cached = false;  // re-sent for a duplicate Msg1
};

struct SilentDrop {};

using Step2Outcome = std::variant<Msg2Reply, SilentDrop, Terminated>;

struct ServerEstablished {
  SessionResult result;
  curve::ECPoint secret;
};

using Step4Outcome = std::variant<ServerEstablished, Terminated>;

struct ServerStats {
  std::uint64_t replies = 0;
  std::uint64_t cached_replies = 0;
  std::uint64_t silent_drops = 0;
  std::uint64_t established = 0;
  std::uint64_t replaced_entries = 0;
  std::uint64_t expired_entries = 0;
  std::uint64_t invalid_curve_attempts = 0;
  std::map<TerminateReason, std::uint64_t> terminations;
};

/// Failed-attempt accounting per source prefix. Not synchronised; the
/// session table guards it.
class RateLimiter {
 public:
  explicit RateLimiter(const HandshakeConfig& config) : config_(config) {}

  /// True while the prefix is inside its block period. An expired block
  /// resets the prefix.
  bool blocked(const Address& source, Timestamp now);
  void record_failure(const Address& source, Timestamp now);
  unsigned failures(const Address& source) const;

 private:
  struct Entry {
    unsigned failures = 0;
    std::int64_t window_start = 0;
    std::int64_t blocked_until = 0;
    bool blocked = false;
  };

  const HandshakeConfig& config_;
  std::map<std::uint32_t, Entry> entries_;
};

/// Server half of the handshake. Non-blocking per client: step2 leaves an
/// AwaitMsg3 entry keyed by (client, source) and step4 consumes it.
/// All public members are safe to call concurrently.
class ServerSessionTable {
 public:
  ServerSessionTable(Keystore& keystore, const curve::CurveProfile& curve, HandshakeConfig config, RandomSource& rng);

  /// Processing order: rate-limit gate, keystore lookup, AEAD open, digest
  /// check, freshness, client_rand validation, then reply with
  /// client_rand + P (or + 2P when the rotation policy says so).
  Step2Outcome step2(ByteView wire, const Address& source, Timestamp now);
  Step2Outcome step2(const HandshakeMsg1& msg, const Address& source, Timestamp now);

  /// Verifies server_rand + offset and derives the session key. The entry
  /// is consumed whatever the outcome; on rotation Y' replaces Y in the
  /// keystore in the same critical section.
  Step4Outcome step4(ByteView wire, const Address& source, Timestamp now);
  Step4Outcome step4(const HandshakeMsg3& msg, const Address& source, Timestamp now);

  /// Drops AwaitMsg3 entries older than delta_t (lost Msg3).
  void expire(Timestamp now);

  std::size_t pending() const;
  unsigned failure_count(const Address& source) const;
  bool is_blocked(const Address& source, Timestamp now);
  ServerStats stats() const;
  const HandshakeConfig& config() const { return config_; }
  const curve::CurveProfile& curve() const { return curve_; }

  /// Test seam: r_s for the next accepted Msg1.
  void force_next_scalar(const curve::Scalar& scalar);

 private:
  struct PendingHandshake {
    std::uint64_t generation = 0;
    crypto::LongTermKey key;
    curve::Scalar r_s;
    curve::ECPoint server_rand;
    curve::ValidatedPoint client_rand;
    bool rotation = false;
    Timestamp t2;
    Bytes msg1_wire;
    HandshakeMsg2 reply;
    bool completing = false;
  };

  using Key = std::pair<ClientId, Address>;

  Step2Outcome step2_gated(const HandshakeMsg1& msg, ByteView wire, const Address& source, Timestamp now);
  Terminated terminate_locked(TerminateReason reason, const Address& source, Timestamp now);
  Terminated terminate(TerminateReason reason, const Address& source, Timestamp now);
  void expire_locked(Timestamp now);
  crypto::Nonce fresh_nonce();

  Keystore& keystore_;
  const curve::CurveProfile& curve_;
  HandshakeConfig config_;
  RandomSource& rng_;

  mutable std::mutex mutex_;
  std::map<Key, PendingHandshake> pending_;
  RateLimiter limiter_{config_};
  ServerStats stats_;
  std::uint64_t next_generation_ = 1;
  std::optional<curve::Scalar> forced_scalar_;
};

}  // namespace lakee::protocol
