#pragma once

#include <optional>
#include <variant>

#include "lakee/curve/group.hpp"
#include "lakee/protocol/session.hpp"
#include "lakee/random.hpp"

namespace lakee::protocol {

enum class ClientState { init, sent_msg1, established, failed };

struct ClientEstablished {
  HandshakeMsg3 msg3;
  SessionResult result;
  curve::ECPoint secret;  // needed for export_dtls
};

using ClientStep3Outcome = std::variant<ClientEstablished, Terminated>;

/// Client half of the handshake. Sequential and single-owner: step1, then
/// step3 once the server's reply arrives.
class ClientSession {
 public:
  ClientSession(ClientId id, crypto::LongTermKey key, const curve::CurveProfile& curve, RandomSource& rng,
                HandshakeConfig config = {});

  /// Draws r_c, computes client_rand = r_c * P and seals
  /// h(id) || client_rand || T1 under Y.
  HandshakeMsg1 step1(Timestamp now);
  /// Same, with r_c supplied by the caller (tests).
  HandshakeMsg1 step1(Timestamp now, const curve::Scalar& forced_scalar);

  /// Authenticates the server's reply, answers its challenge and derives the
  /// session key. Any failure moves the session to `failed`.
  ClientStep3Outcome step3(const HandshakeMsg2& msg, Timestamp now);
  ClientStep3Outcome step3(ByteView wire, Timestamp now);

  ClientState state() const { return state_; }
  ClientId id() const { return id_; }
  bool rotation() const { return rotation_; }
  const curve::ECPoint& client_rand() const { return client_rand_; }
  const std::optional<crypto::SessionKey>& session_key() const { return session_key_; }
  const std::optional<crypto::LongTermKey>& new_long_term() const { return new_long_term_; }

 private:
  Terminated fail(TerminateReason reason);
  crypto::Nonce fresh_nonce();

  ClientId id_;
  crypto::LongTermKey key_;
  const curve::CurveProfile& curve_;
  RandomSource& rng_;
  HandshakeConfig config_;

  ClientState state_ = ClientState::init;
  std::optional<curve::Scalar> r_c_;
  curve::ECPoint client_rand_ = curve::ECPoint::infinity();
  bool rotation_ = false;
  std::optional<crypto::SessionKey> session_key_;
  std::optional<crypto::LongTermKey> new_long_term_;
};

}  // namespace lakee::protocol
