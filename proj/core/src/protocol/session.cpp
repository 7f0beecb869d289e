#include "lakee/protocol/session.hpp"

#include <array>
#include <cstdlib>
#include <stdexcept>

#include "lakee/curve/group.hpp"

namespace lakee::protocol {

namespace {
constexpr std::array<std::pair<TerminateReason, std::string_view>, 8> kReasonNames{{
    {TerminateReason::unknown_client, "UnknownClient"},
    {TerminateReason::auth_failure, "AuthFailure"},
    {TerminateReason::digest_mismatch, "DigestMismatch"},
    {TerminateReason::stale, "Stale"},
    {TerminateReason::invalid_point, "InvalidPoint"},
    {TerminateReason::bad_challenge_response, "BadChallengeResponse"},
    {TerminateReason::no_such_handshake, "NoSuchHandshake"},
    {TerminateReason::malformed, "MalformedMessage"},
}};
}  // namespace

std::string_view to_string(TerminateReason reason) {
  for (const auto& [r, name] : kReasonNames) {
    if (r == reason) return name;
  }
  return "Unknown";
}

std::optional<TerminateReason> parse_terminate_reason(std::string_view text) {
  for (const auto& [r, name] : kReasonNames) {
    if (name == text) return r;
  }
  return std::nullopt;
}

SessionResult derive_session(const curve::ECPoint& secret, bool rotate, ClientId peer, Timestamp now,
                             const curve::CurveProfile& curve) {
  SessionResult result{
      crypto::SessionKey(crypto::kdf(curve::encode_coordinate(secret.x(), curve)), crypto::CoordinateOrigin::x),
      std::nullopt,
      peer,
      now,
  };
  if (rotate) result.rotated_key = crypto::LongTermKey(crypto::kdf(curve::encode_coordinate(secret.y(), curve)));
  return result;
}

void HandshakeConfig::validate() const {
  if (delta_t.count() <= 0) throw std::invalid_argument("delta_t must be positive");
  if (failure_threshold < 1) throw std::invalid_argument("failure_threshold must be at least 1");
  if (rate_window.count() <= 0 || block_duration.count() < 0) throw std::invalid_argument("bad rate-limit window");
  if (prefix_bits > 32) throw std::invalid_argument("prefix_bits must be <= 32");
}

bool is_fresh(Timestamp now, Timestamp then, std::chrono::seconds delta_t) {
  std::int64_t diff = static_cast<std::int64_t>(now.seconds) - static_cast<std::int64_t>(then.seconds);
  return std::llabs(diff) <= delta_t.count();
}

}  // namespace lakee::protocol
