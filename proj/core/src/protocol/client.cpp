#include "lakee/protocol/client.hpp"

#include <stdexcept>

namespace lakee::protocol {

ClientSession::ClientSession(ClientId id, crypto::LongTermKey key, const curve::CurveProfile& curve,
                             RandomSource& rng, HandshakeConfig config)
    : id_(id), key_(key), curve_(curve), rng_(rng), config_(std::move(config)) {
  config_.validate();
}

crypto::Nonce ClientSession::fresh_nonce() {
  crypto::Nonce nonce{};
  rng_.fill(nonce);
  return nonce;
}

Terminated ClientSession::fail(TerminateReason reason) {
  state_ = ClientState::failed;
  r_c_.reset();
  return Terminated{reason};
}

HandshakeMsg1 ClientSession::step1(Timestamp now) { return step1(now, curve::Scalar::random(rng_, curve_)); }

HandshakeMsg1 ClientSession::step1(Timestamp now, const curve::Scalar& forced_scalar) {
  if (state_ != ClientState::init) throw std::logic_error("client_step1 requires the Init state");
  r_c_ = forced_scalar;
  client_rand_ = curve::scalar_mult(*r_c_, curve_.generator(), curve_);

  Msg1Payload payload{crypto::hash_client_id(id_.value), client_rand_, now};
  HandshakeMsg1 msg{id_, crypto::aead_seal(key_, fresh_nonce(), encode_payload(payload, curve_))};
  state_ = ClientState::sent_msg1;
  return msg;
}

ClientStep3Outcome ClientSession::step3(ByteView wire, Timestamp now) {
  if (state_ != ClientState::sent_msg1) throw std::logic_error("client_step3 requires the SentMsg1 state");
  HandshakeMsg2 msg;
  try {
    msg = decode_msg2(wire, curve_);
  } catch (const MalformedMessage&) {
    return fail(TerminateReason::malformed);
  }
  return step3(msg, now);
}

ClientStep3Outcome ClientSession::step3(const HandshakeMsg2& msg, Timestamp now) {
  if (state_ != ClientState::sent_msg1) throw std::logic_error("client_step3 requires the SentMsg1 state");

  auto plaintext = crypto::aead_open(key_, msg.envelope);
  if (!plaintext) return fail(TerminateReason::auth_failure);

  Msg2Payload payload;
  try {
    payload = decode_msg2_payload(*plaintext, curve_);
  } catch (const MalformedMessage&) {
    return fail(TerminateReason::malformed);
  }

  if (!is_fresh(now, payload.t2, config_.delta_t)) return fail(TerminateReason::stale);

  // The offset the server added tells us whether Y rotates this round.
  if (payload.response == curve::point_add(client_rand_, curve_.generator(), curve_)) {
    rotation_ = false;
  } else if (payload.response == curve::point_add(client_rand_, curve_.generator_doubled(), curve_)) {
    rotation_ = true;
  } else {
    return fail(TerminateReason::bad_challenge_response);
  }

  auto validated = curve::validate_point(payload.server_rand, curve_);
  if (!std::holds_alternative<curve::ValidatedPoint>(validated)) return fail(TerminateReason::invalid_point);
  const auto& server_rand = std::get<curve::ValidatedPoint>(validated);

  const curve::ECPoint& offset = rotation_ ? curve_.generator_doubled() : curve_.generator();
  Msg3Payload reply{curve::point_add(server_rand.point(), offset, curve_), now};

  curve::ECPoint secret = curve::ECPoint::infinity();
  try {
    secret = curve::ecdh_shared_secret(*r_c_, server_rand, curve_);
  } catch (const curve::CurveError&) {
    return fail(TerminateReason::invalid_point);
  }
  SessionResult result = derive_session(secret, rotation_, id_, now, curve_);

  HandshakeMsg3 msg3{crypto::aead_seal(key_, fresh_nonce(), encode_payload(reply, curve_))};
  session_key_ = result.session_key;
  new_long_term_ = result.rotated_key;
  r_c_.reset();
  state_ = ClientState::established;
  return ClientEstablished{std::move(msg3), std::move(result), std::move(secret)};
}

}  // namespace lakee::protocol
