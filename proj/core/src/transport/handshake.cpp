#include "lakee/transport/handshake.hpp"

#include <cmath>
#include <stdexcept>

namespace lakee::transport {

void RetransmitPolicy::validate() const {
  if (initial_timeout.count() <= 0) throw std::invalid_argument("initial_timeout must be positive");
  if (!(backoff_factor > 1.0)) throw std::invalid_argument("backoff_factor must exceed 1");
}

Millis RetransmitPolicy::timeout_after(unsigned transmission) const {
  return Millis(static_cast<Millis::rep>(std::llround(initial_timeout.count() * std::pow(backoff_factor, transmission))));
}

Millis SystemClock::now() const {
  return std::chrono::duration_cast<Millis>(std::chrono::system_clock::now().time_since_epoch());
}

ClientRun run_client_handshake(protocol::ClientSession& session, DatagramChannel& channel, RandomSource& rng,
                               const RetransmitPolicy& policy) {
  policy.validate();
  const Clock& clock = channel.clock();

  CoapMessage request;
  request.type = CoapType::con;
  request.code = code::post;
  request.message_id = static_cast<std::uint16_t>(rng.next_u64());
  request.token.resize(4);
  rng.fill(request.token);
  request.payload = protocol::encode(session.step1(clock.timestamp()));
  const Bytes con = encode_coap(request);

  ClientRun run{HandshakeTimeout{}, 0, {}, request.message_id};
  for (unsigned attempt = 0; attempt <= policy.max_retransmits; ++attempt) {
    channel.send(con);
    ++run.transmissions;
    run.con_sent.push_back(clock.now());
    const Millis deadline = clock.now() + policy.timeout_after(attempt);

    while (clock.now() < deadline) {
      auto datagram = channel.receive(deadline - clock.now());
      if (!datagram) break;
      CoapMessage reply;
      try {
        reply = decode_coap(*datagram);
      } catch (const MalformedCoap&) {
        continue;
      }
      if (reply.message_id != request.message_id) continue;
      if (reply.type == CoapType::rst) {
        run.outcome = ServerReset{};
        return run;
      }
      if (reply.type != CoapType::ack || reply.token != request.token || reply.payload.empty()) continue;

      auto outcome = session.step3(reply.payload, clock.timestamp());
      if (auto* done = std::get_if<protocol::ClientEstablished>(&outcome)) {
        CoapMessage msg3;
        msg3.type = CoapType::non;
        msg3.code = code::post;
        msg3.message_id = static_cast<std::uint16_t>(request.message_id + 1);
        msg3.token = request.token;
        msg3.payload = protocol::encode(done->msg3);
        channel.send(encode_coap(msg3));
        run.outcome = std::move(*done);
      } else {
        run.outcome = std::get<protocol::Terminated>(outcome);
      }
      return run;
    }
  }
  return run;
}

void HandshakeResponder::notify(ResponderEvent event) {
  if (observer_) observer_(event);
}

std::optional<Bytes> HandshakeResponder::handle(ByteView datagram, const Address& from) {
  using Kind = ResponderEvent::Kind;
  CoapMessage request;
  try {
    request = decode_coap(datagram);
  } catch (const MalformedCoap&) {
    notify({Kind::ignored, from, std::nullopt, std::nullopt});
    return std::nullopt;
  }
  if (request.type == CoapType::ack || request.type == CoapType::rst) {
    notify({Kind::ignored, from, std::nullopt, std::nullopt});
    return std::nullopt;
  }

  const protocol::Timestamp now = clock_.timestamp();
  if (protocol::peek_type(request.payload) == protocol::MessageType::client_response) {
    auto outcome = table_.step4(request.payload, from, now);
    if (auto* done = std::get_if<protocol::ServerEstablished>(&outcome)) {
      notify({Kind::established, from, std::nullopt, *done});
    } else {
      notify({Kind::terminated, from, std::get<protocol::Terminated>(outcome).reason, std::nullopt});
    }
    if (request.type == CoapType::con) return encode_coap(make_ack(request, code::empty, {}));
    return std::nullopt;
  }

  auto outcome = table_.step2(request.payload, from, now);
  if (auto* reply = std::get_if<protocol::Msg2Reply>(&outcome)) {
    notify({reply->cached ? Kind::replied_cached : Kind::replied, from, std::nullopt, std::nullopt});
    CoapMessage ack = make_ack(request, code::changed, protocol::encode(reply->msg));
    if (request.type == CoapType::non) {
      ack.type = CoapType::non;
      ack.message_id = static_cast<std::uint16_t>(request.message_id + 1);
    }
    return encode_coap(ack);
  }
  if (std::holds_alternative<protocol::SilentDrop>(outcome)) {
    notify({Kind::silent_drop, from, std::nullopt, std::nullopt});
    return std::nullopt;
  }
  notify({Kind::terminated, from, std::get<protocol::Terminated>(outcome).reason, std::nullopt});
  if (request.type == CoapType::con) return encode_coap(make_rst(request));
  return std::nullopt;
}

}  // namespace lakee::transport
