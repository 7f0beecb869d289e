#pragma once

// Wire format, version 1:
//
//   Msg1: 0x01 0x01 | client_id (8) | nonce (11) | ciphertext | tag (16)
//   Msg2: 0x01 0x02 | nonce (11) | ciphertext | tag (16)
//   Msg3: 0x01 0x03 | nonce (11) | ciphertext | tag (16)
//
// Plaintexts (fixed width, big-endian, in protocol field order):
//   Msg1: SHA-1(client_id) (20) | client_rand | T1 (4)
//   Msg2: client_rand + offset | server_rand | T2 (4)
//   Msg3: server_rand + offset | T3 (4)
// with points encoded as x || y at the profile's coordinate width.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lakee/bytes.hpp"
#include "lakee/crypto/suite.hpp"
#include "lakee/curve/profile.hpp"

namespace lakee::protocol {

struct ClientId {
  std::uint64_t value = 0;
  auto operator<=>(const ClientId&) const = default;
};

/// 32-bit Unix seconds.
struct Timestamp {
  std::uint32_t seconds = 0;
  auto operator<=>(const Timestamp&) const = default;
};

inline constexpr std::uint8_t kWireVersion = 0x01;

enum class MessageType : std::uint8_t {
  client_challenge = 0x01,  // Msg1
  server_response = 0x02,   // Msg2
  client_response = 0x03,   // Msg3
};

class MalformedMessage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HandshakeMsg1 {
  ClientId client_id;
  crypto::AeadEnvelope envelope;
  bool operator==(const HandshakeMsg1&) const = default;
};

struct HandshakeMsg2 {
  crypto::AeadEnvelope envelope;
  bool operator==(const HandshakeMsg2&) const = default;
};

struct HandshakeMsg3 {
  crypto::AeadEnvelope envelope;
  bool operator==(const HandshakeMsg3&) const = default;
};

struct Msg1Payload {
  crypto::ClientIdDigest id_digest{};
  curve::ECPoint client_rand = curve::ECPoint::infinity();
  Timestamp t1;
};

struct Msg2Payload {
  curve::ECPoint response = curve::ECPoint::infinity();  // client_rand + P or + 2P
  curve::ECPoint server_rand = curve::ECPoint::infinity();
  Timestamp t2;
};

struct Msg3Payload {
  curve::ECPoint response = curve::ECPoint::infinity();  // server_rand + P or + 2P
  Timestamp t3;
};

std::size_t plaintext_size(MessageType type, const curve::CurveProfile& curve);
std::size_t wire_size(MessageType type, const curve::CurveProfile& curve);

/// Type byte of a framed message, if the version byte is recognised.
std::optional<MessageType> peek_type(ByteView wire);

Bytes encode(const HandshakeMsg1& msg);
Bytes encode(const HandshakeMsg2& msg);
Bytes encode(const HandshakeMsg3& msg);

/// Throw MalformedMessage on wrong length, version or type.
HandshakeMsg1 decode_msg1(ByteView wire, const curve::CurveProfile& curve);
HandshakeMsg2 decode_msg2(ByteView wire, const curve::CurveProfile& curve);
HandshakeMsg3 decode_msg3(ByteView wire, const curve::CurveProfile& curve);

Bytes encode_payload(const Msg1Payload& payload, const curve::CurveProfile& curve);
Bytes encode_payload(const Msg2Payload& payload, const curve::CurveProfile& curve);
Bytes encode_payload(const Msg3Payload& payload, const curve::CurveProfile& curve);

Msg1Payload decode_msg1_payload(ByteView plaintext, const curve::CurveProfile& curve);
Msg2Payload decode_msg2_payload(ByteView plaintext, const curve::CurveProfile& curve);
Msg3Payload decode_msg3_payload(ByteView plaintext, const curve::CurveProfile& curve);

enum class FieldRole {
  framing,    // version/type bytes and the AEAD nonce: real overhead, not in the nominal accounting
  cleartext,  // client_id
  payload,    // encrypted field
  tag,
};

struct WireField {
  std::string name;
  FieldRole role;
  std::size_t wire_bits;     // width in this encoder
  std::size_t nominal_bits;  // width in the nominal size accounting
};

/// Field-by-field layout of a framed message. Points count as
/// nominal_point_bits in the nominal column.
std::vector<WireField> wire_layout(MessageType type, std::size_t point_bytes, std::size_t nominal_point_bits);
std::vector<WireField> wire_layout(MessageType type, const curve::CurveProfile& curve);

/// Sum of nominal_bits over non-framing fields.
std::size_t nominal_bits(const std::vector<WireField>& layout);
std::size_t wire_bits(const std::vector<WireField>& layout);

}  // namespace lakee::protocol
