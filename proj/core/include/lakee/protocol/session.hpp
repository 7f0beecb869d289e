#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string_view>

#include "lakee/crypto/suite.hpp"
#include "lakee/curve/profile.hpp"
#include "lakee/protocol/messages.hpp"

namespace lakee::protocol {

enum class TerminateReason {
  unknown_client,
  auth_failure,
  digest_mismatch,
  stale,
  invalid_point,
  bad_challenge_response,
  no_such_handshake,
  malformed,
};

std::string_view to_string(TerminateReason reason);
std::optional<TerminateReason> parse_terminate_reason(std::string_view text);

struct Terminated {
  TerminateReason reason;
};

/// Keys agreed by one side of a completed handshake.
struct SessionResult {
  crypto::SessionKey session_key;                 // kdf(secret.x)
  std::optional<crypto::LongTermKey> rotated_key;  // kdf(secret.y), 2P branch only
  ClientId peer;
  Timestamp established_at;
};

/// Derives session_key (and Y' when rotating) from the ECDH point.
SessionResult derive_session(const curve::ECPoint& secret, bool rotate, ClientId peer, Timestamp now,
                             const curve::CurveProfile& curve);

using RotationPolicy = std::function<bool(ClientId)>;

struct HandshakeConfig {
  std::chrono::seconds delta_t{30};
  unsigned failure_threshold = 3;
  std::chrono::seconds rate_window{60};
  std::chrono::seconds block_duration{300};
  unsigned prefix_bits = 24;
  RotationPolicy rotation_policy;  // empty: never rotate

  /// Throws std::invalid_argument on delta_t <= 0 or failure_threshold < 1.
  void validate() const;
  bool should_rotate(ClientId id) const { return rotation_policy && rotation_policy(id); }
};

/// |now - then| <= delta_t.
bool is_fresh(Timestamp now, Timestamp then, std::chrono::seconds delta_t);

}  // namespace lakee::protocol
