#include "lakee/protocol/messages.hpp"

#include <algorithm>

#include "lakee/curve/group.hpp"

namespace lakee::protocol {

namespace {

constexpr std::size_t kHeaderBytes = 2;
constexpr std::size_t kClientIdBytes = 8;
constexpr std::size_t kTimestampBytes = 4;

void put_header(Bytes& out, MessageType type) {
  out.push_back(kWireVersion);
  out.push_back(static_cast<std::uint8_t>(type));
}

void put_envelope(Bytes& out, const crypto::AeadEnvelope& env) {
  append(out, env.nonce);
  append(out, env.ciphertext);
  append(out, env.tag);
}

void check_frame(ByteView wire, MessageType type, const curve::CurveProfile& curve) {
  if (wire.size() != wire_size(type, curve)) throw MalformedMessage("message has the wrong length");
  if (wire[0] != kWireVersion) throw MalformedMessage("unknown wire version");
  if (wire[1] != static_cast<std::uint8_t>(type)) throw MalformedMessage("unexpected message type");
}

crypto::AeadEnvelope read_envelope(ByteReader& reader, std::size_t plaintext_len) {
  crypto::AeadEnvelope env;
  auto nonce = reader.take(crypto::kNonceBytes);
  std::copy(nonce.begin(), nonce.end(), env.nonce.begin());
  auto ct = reader.take(plaintext_len);
  env.ciphertext.assign(ct.begin(), ct.end());
  auto tag = reader.take(crypto::kTagBytes);
  std::copy(tag.begin(), tag.end(), env.tag.begin());
  return env;
}

void check_plaintext(ByteView plaintext, MessageType type, const curve::CurveProfile& curve) {
  if (plaintext.size() != plaintext_size(type, curve)) throw MalformedMessage("plaintext has the wrong length");
}

curve::ECPoint read_point(ByteReader& reader, const curve::CurveProfile& curve) {
  return curve::decode_point(reader.take(curve.point_bytes()), curve);
}

}  // namespace

std::size_t plaintext_size(MessageType type, const curve::CurveProfile& curve) {
  std::size_t point = curve.point_bytes();
  switch (type) {
    case MessageType::client_challenge: return crypto::kClientIdDigestBytes + point + kTimestampBytes;
    case MessageType::server_response: return 2 * point + kTimestampBytes;
    case MessageType::client_response: return point + kTimestampBytes;
  }
  throw std::invalid_argument("unknown message type");
}

std::size_t wire_size(MessageType type, const curve::CurveProfile& curve) {
  std::size_t size = kHeaderBytes + crypto::kNonceBytes + plaintext_size(type, curve) + crypto::kTagBytes;
  if (type == MessageType::client_challenge) size += kClientIdBytes;
  return size;
}

std::optional<MessageType> peek_type(ByteView wire) {
  if (wire.size() < kHeaderBytes || wire[0] != kWireVersion) return std::nullopt;
  switch (wire[1]) {
    case 0x01: return MessageType::client_challenge;
    case 0x02: return MessageType::server_response;
    case 0x03: return MessageType::client_response;
    default: return std::nullopt;
  }
}

Bytes encode(const HandshakeMsg1& msg) {
  Bytes out;
  put_header(out, MessageType::client_challenge);
  put_u64(out, msg.client_id.value);
  put_envelope(out, msg.envelope);
  return out;
}

Bytes encode(const HandshakeMsg2& msg) {
  Bytes out;
  put_header(out, MessageType::server_response);
  put_envelope(out, msg.envelope);
  return out;
}

Bytes encode(const HandshakeMsg3& msg) {
  Bytes out;
  put_header(out, MessageType::client_response);
  put_envelope(out, msg.envelope);
  return out;
}

HandshakeMsg1 decode_msg1(ByteView wire, const curve::CurveProfile& curve) {
  check_frame(wire, MessageType::client_challenge, curve);
  ByteReader reader(wire.subspan(kHeaderBytes));
  HandshakeMsg1 msg;
  msg.client_id.value = reader.u64();
  msg.envelope = read_envelope(reader, plaintext_size(MessageType::client_challenge, curve));
  return msg;
}

HandshakeMsg2 decode_msg2(ByteView wire, const curve::CurveProfile& curve) {
  check_frame(wire, MessageType::server_response, curve);
  ByteReader reader(wire.subspan(kHeaderBytes));
  return {read_envelope(reader, plaintext_size(MessageType::server_response, curve))};
}

HandshakeMsg3 decode_msg3(ByteView wire, const curve::CurveProfile& curve) {
  check_frame(wire, MessageType::client_response, curve);
  ByteReader reader(wire.subspan(kHeaderBytes));
  return {read_envelope(reader, plaintext_size(MessageType::client_response, curve))};
}

Bytes encode_payload(const Msg1Payload& payload, const curve::CurveProfile& curve) {
  Bytes out(payload.id_digest.begin(), payload.id_digest.end());
  append(out, curve::encode_point(payload.client_rand, curve));
  put_u32(out, payload.t1.seconds);
  return out;
}

Bytes encode_payload(const Msg2Payload& payload, const curve::CurveProfile& curve) {
  Bytes out = curve::encode_point(payload.response, curve);
  append(out, curve::encode_point(payload.server_rand, curve));
  put_u32(out, payload.t2.seconds);
  return out;
}

Bytes encode_payload(const Msg3Payload& payload, const curve::CurveProfile& curve) {
  Bytes out = curve::encode_point(payload.response, curve);
  put_u32(out, payload.t3.seconds);
  return out;
}

Msg1Payload decode_msg1_payload(ByteView plaintext, const curve::CurveProfile& curve) {
  check_plaintext(plaintext, MessageType::client_challenge, curve);
  ByteReader reader(plaintext);
  Msg1Payload out;
  auto digest = reader.take(crypto::kClientIdDigestBytes);
  std::copy(digest.begin(), digest.end(), out.id_digest.begin());
  out.client_rand = read_point(reader, curve);
  out.t1.seconds = reader.u32();
  return out;
}

Msg2Payload decode_msg2_payload(ByteView plaintext, const curve::CurveProfile& curve) {
  check_plaintext(plaintext, MessageType::server_response, curve);
  ByteReader reader(plaintext);
  Msg2Payload out;
  out.response = read_point(reader, curve);
  out.server_rand = read_point(reader, curve);
  out.t2.seconds = reader.u32();
  return out;
}

Msg3Payload decode_msg3_payload(ByteView plaintext, const curve::CurveProfile& curve) {
  check_plaintext(plaintext, MessageType::client_response, curve);
  ByteReader reader(plaintext);
  Msg3Payload out;
  out.response = read_point(reader, curve);
  out.t3.seconds = reader.u32();
  return out;
}

std::vector<WireField> wire_layout(MessageType type, std::size_t point_bytes, std::size_t nominal_point_bits) {
  const std::size_t point_bits = point_bytes * 8;
  std::vector<WireField> fields = {
      {"version", FieldRole::framing, 8, 8},
      {"type", FieldRole::framing, 8, 8},
  };
  if (type == MessageType::client_challenge) fields.push_back({"client_id", FieldRole::cleartext, 64, 64});
  fields.push_back({"nonce", FieldRole::framing, crypto::kNonceBytes * 8, crypto::kNonceBytes * 8});
  switch (type) {
    case MessageType::client_challenge:
      fields.push_back({"h(client_id)", FieldRole::payload, crypto::kClientIdDigestBytes * 8, 160});
      fields.push_back({"client_rand", FieldRole::payload, point_bits, nominal_point_bits});
      fields.push_back({"T1", FieldRole::payload, 32, 32});
      break;
    case MessageType::server_response:
      fields.push_back({"client_rand+offset", FieldRole::payload, point_bits, nominal_point_bits});
      fields.push_back({"server_rand", FieldRole::payload, point_bits, nominal_point_bits});
      fields.push_back({"T2", FieldRole::payload, 32, 32});
      break;
    case MessageType::client_response:
      fields.push_back({"server_rand+offset", FieldRole::payload, point_bits, nominal_point_bits});
      fields.push_back({"T3", FieldRole::payload, 32, 32});
      break;
  }
  fields.push_back({"tag", FieldRole::tag, crypto::kTagBytes * 8, 128});
  return fields;
}

std::vector<WireField> wire_layout(MessageType type, const curve::CurveProfile& curve) {
  return wire_layout(type, curve.point_bytes(), static_cast<std::size_t>(curve.nominal_point_bits()));
}

std::size_t nominal_bits(const std::vector<WireField>& layout) {
  std::size_t total = 0;
  for (const auto& f : layout) {
    if (f.role != FieldRole::framing) total += f.nominal_bits;
  }
  return total;
}

std::size_t wire_bits(const std::vector<WireField>& layout) {
  std::size_t total = 0;
  for (const auto& f : layout) total += f.wire_bits;
  return total;
}

}  // namespace lakee::protocol
