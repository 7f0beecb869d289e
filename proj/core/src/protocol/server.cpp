#include "lakee/protocol/server.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace lakee::protocol {

bool RateLimiter::blocked(const Address& source, Timestamp now) {
  auto it = entries_.find(source.prefix(config_.prefix_bits));
  if (it == entries_.end() || !it->second.blocked) return false;
  if (static_cast<std::int64_t>(now.seconds) < it->second.blocked_until) return true;
  entries_.erase(it);
  return false;
}

void RateLimiter::record_failure(const Address& source, Timestamp now) {
  const std::int64_t t = now.seconds;
  Entry& entry = entries_[source.prefix(config_.prefix_bits)];
  if (!entry.blocked && (entry.failures == 0 || t - entry.window_start >= config_.rate_window.count())) {
    entry.failures = 0;
    entry.window_start = t;
  }
  ++entry.failures;
  if (!entry.blocked && entry.failures >= config_.failure_threshold) {
    entry.blocked = true;
    entry.blocked_until = t + config_.block_duration.count();
  }
}

unsigned RateLimiter::failures(const Address& source) const {
  auto it = entries_.find(source.prefix(config_.prefix_bits));
  return it == entries_.end() ? 0 : it->second.failures;
}

ServerSessionTable::ServerSessionTable(Keystore& keystore, const curve::CurveProfile& curve,
                                       HandshakeConfig config, RandomSource& rng)
    : keystore_(keystore), curve_(curve), config_(std::move(config)), rng_(rng) {
  config_.validate();
}

crypto::Nonce ServerSessionTable::fresh_nonce() {
  crypto::Nonce nonce{};
  rng_.fill(nonce);
  return nonce;
}

Terminated ServerSessionTable::terminate_locked(TerminateReason reason, const Address& source, Timestamp now) {
  limiter_.record_failure(source, now);
  ++stats_.terminations[reason];
  if (reason == TerminateReason::invalid_point) ++stats_.invalid_curve_attempts;
  return Terminated{reason};
}

Terminated ServerSessionTable::terminate(TerminateReason reason, const Address& source, Timestamp now) {
  std::lock_guard lock(mutex_);
  return terminate_locked(reason, source, now);
}

void ServerSessionTable::expire_locked(Timestamp now) {
  for (auto it = pending_.begin(); it != pending_.end();) {
    const auto& entry = it->second;
    std::int64_t age = static_cast<std::int64_t>(now.seconds) - static_cast<std::int64_t>(entry.t2.seconds);
    if (!entry.completing && age > config_.delta_t.count()) {
      it = pending_.erase(it);
      ++stats_.expired_entries;
    } else {
      ++it;
    }
  }
}

void ServerSessionTable::expire(Timestamp now) {
  std::lock_guard lock(mutex_);
  expire_locked(now);
}

Step2Outcome ServerSessionTable::step2(const HandshakeMsg1& msg, const Address& source, Timestamp now) {
  return step2(encode(msg), source, now);
}

Step2Outcome ServerSessionTable::step2(ByteView wire, const Address& source, Timestamp now) {
  {
    std::lock_guard lock(mutex_);
    expire_locked(now);
    if (limiter_.blocked(source, now)) {
      ++stats_.silent_drops;
      return SilentDrop{};
    }
  }

  HandshakeMsg1 msg;
  try {
    msg = decode_msg1(wire, curve_);
  } catch (const MalformedMessage&) {
    return terminate(TerminateReason::malformed, source, now);
  }

  {
    // A retransmitted Msg1 gets the same Msg2 back.
    std::lock_guard lock(mutex_);
    auto it = pending_.find(Key{msg.client_id, source});
    if (it != pending_.end() && !it->second.completing && std::ranges::equal(it->second.msg1_wire, wire)) {
      ++stats_.cached_replies;
      return Msg2Reply{it->second.reply, true};
    }
  }
  return step2_gated(msg, wire, source, now);
}

Step2Outcome ServerSessionTable::step2_gated(const HandshakeMsg1& msg, ByteView wire, const Address& source,
                                             Timestamp now) {
  auto key = keystore_.find(msg.client_id);
  if (!key) return terminate(TerminateReason::unknown_client, source, now);

  auto plaintext = crypto::aead_open(*key, msg.envelope);
  if (!plaintext) return terminate(TerminateReason::auth_failure, source, now);

  Msg1Payload payload;
  try {
    payload = decode_msg1_payload(*plaintext, curve_);
  } catch (const MalformedMessage&) {
    return terminate(TerminateReason::malformed, source, now);
  }
  if (payload.id_digest != crypto::hash_client_id(msg.client_id.value))
    return terminate(TerminateReason::digest_mismatch, source, now);
  if (!is_fresh(now, payload.t1, config_.delta_t)) return terminate(TerminateReason::stale, source, now);

  auto validated = curve::validate_point(payload.client_rand, curve_);
  if (!std::holds_alternative<curve::ValidatedPoint>(validated))
    return terminate(TerminateReason::invalid_point, source, now);
  const auto& client_rand = std::get<curve::ValidatedPoint>(validated);

  std::optional<curve::Scalar> forced;
  {
    std::lock_guard lock(mutex_);
    forced.swap(forced_scalar_);
  }
  curve::Scalar r_s = forced ? *forced : curve::Scalar::random(rng_, curve_);
  curve::ECPoint server_rand = curve::scalar_mult(r_s, curve_.generator(), curve_);

  const bool rotation = config_.should_rotate(msg.client_id);
  const curve::ECPoint& offset = rotation ? curve_.generator_doubled() : curve_.generator();
  Msg2Payload reply{curve::point_add(client_rand.point(), offset, curve_), server_rand, now};
  HandshakeMsg2 msg2{crypto::aead_seal(*key, fresh_nonce(), encode_payload(reply, curve_))};

  std::lock_guard lock(mutex_);
  Key slot{msg.client_id, source};
  if (auto it = pending_.find(slot); it != pending_.end()) {
    // A second, different Msg1 supersedes the outstanding one.
    pending_.erase(it);
    ++stats_.replaced_entries;
    limiter_.record_failure(source, now);
  }
  pending_.emplace(slot, PendingHandshake{next_generation_++, *key, std::move(r_s), server_rand, client_rand,
                                          rotation, now, Bytes(wire.begin(), wire.end()), msg2, false});
  ++stats_.replies;
  return Msg2Reply{std::move(msg2), false};
}

Step4Outcome ServerSessionTable::step4(const HandshakeMsg3& msg, const Address& source, Timestamp now) {
  return step4(encode(msg), source, now);
}

Step4Outcome ServerSessionTable::step4(ByteView wire, const Address& source, Timestamp now) {
  HandshakeMsg3 msg;
  try {
    msg = decode_msg3(wire, curve_);
  } catch (const MalformedMessage&) {
    return terminate(TerminateReason::malformed, source, now);
  }

  struct Candidate {
    Key slot;
    std::uint64_t generation;
    crypto::LongTermKey key;
    curve::Scalar r_s;
    curve::ECPoint server_rand;
    curve::ValidatedPoint client_rand;
    bool rotation;
  };
  std::vector<Candidate> candidates;
  {
    std::lock_guard lock(mutex_);
    expire_locked(now);
    for (auto& [slot, entry] : pending_) {
      if (slot.second != source || entry.completing) continue;
      entry.completing = true;
      candidates.push_back(
          {slot, entry.generation, entry.key, entry.r_s, entry.server_rand, entry.client_rand, entry.rotation});
    }
    if (candidates.empty()) return terminate_locked(TerminateReason::no_such_handshake, source, now);
  }

  auto release = [&](TerminateReason reason) -> Step4Outcome {
    std::lock_guard lock(mutex_);
    for (const auto& c : candidates) {
      auto it = pending_.find(c.slot);
      if (it != pending_.end() && it->second.generation == c.generation) pending_.erase(it);
    }
    return terminate_locked(reason, source, now);
  };

  const Candidate* match = nullptr;
  std::optional<Bytes> plaintext;
  for (const auto& c : candidates) {
    plaintext = crypto::aead_open(c.key, msg.envelope);
    if (plaintext) {
      match = &c;
      break;
    }
  }
  if (!match) return release(TerminateReason::auth_failure);

  Msg3Payload payload;
  try {
    payload = decode_msg3_payload(*plaintext, curve_);
  } catch (const MalformedMessage&) {
    return release(TerminateReason::malformed);
  }
  if (!is_fresh(now, payload.t3, config_.delta_t)) return release(TerminateReason::stale);

  const curve::ECPoint& offset = match->rotation ? curve_.generator_doubled() : curve_.generator();
  if (payload.response != curve::point_add(match->server_rand, offset, curve_))
    return release(TerminateReason::bad_challenge_response);

  curve::ECPoint secret = curve::ECPoint::infinity();
  try {
    secret = curve::ecdh_shared_secret(match->r_s, match->client_rand, curve_);
  } catch (const curve::CurveError&) {
    return release(TerminateReason::invalid_point);
  }
  ClientId peer = match->slot.first;
  SessionResult result = derive_session(secret, match->rotation, peer, now, curve_);

  std::lock_guard lock(mutex_);
  for (const auto& c : candidates) {
    auto it = pending_.find(c.slot);
    if (it == pending_.end() || it->second.generation != c.generation) continue;
    if (&c == match) {
      pending_.erase(it);
    } else {
      it->second.completing = false;  // another client behind the same address
    }
  }
  if (result.rotated_key) keystore_.put(peer, *result.rotated_key);
  ++stats_.established;
  return ServerEstablished{std::move(result), std::move(secret)};
}

std::size_t ServerSessionTable::pending() const {
  std::lock_guard lock(mutex_);
  return pending_.size();
}

unsigned ServerSessionTable::failure_count(const Address& source) const {
  std::lock_guard lock(mutex_);
  return limiter_.failures(source);
}

bool ServerSessionTable::is_blocked(const Address& source, Timestamp now) {
  std::lock_guard lock(mutex_);
  return limiter_.blocked(source, now);
}

ServerStats ServerSessionTable::stats() const {
  std::lock_guard lock(mutex_);
  return stats_;
}

void ServerSessionTable::force_next_scalar(const curve::Scalar& scalar) {
  std::lock_guard lock(mutex_);
  forced_scalar_ = scalar;
}

}  // namespace lakee::protocol
