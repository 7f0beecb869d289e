#pragma once

// CoAP framing subset: the 4-byte fixed header, an optional token and a
// payload behind the 0xff marker. Options are never emitted; incoming
// options are skipped.

#include <cstdint>
#include <stdexcept>

#include "lakee/bytes.hpp"

namespace lakee::transport {

inline constexpr std::uint8_t kCoapVersion = 1;
inline constexpr std::size_t kCoapHeaderBytes = 4;
inline constexpr std::size_t kMaxTokenBytes = 8;

enum class CoapType : std::uint8_t { con = 0, non = 1, ack = 2, rst = 3 };

namespace code {
inline constexpr std::uint8_t empty = 0x00;
inline constexpr std::uint8_t post = 0x02;     // 0.02
inline constexpr std::uint8_t changed = 0x44;  // 2.04
}  // namespace code

class MalformedCoap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CoapHeader {
  std::uint8_t version = kCoapVersion;
  CoapType type = CoapType::con;
  std::uint8_t token_length = 0;
  std::uint8_t code = code::empty;
  std::uint16_t message_id = 0;

  bool operator==(const CoapHeader&) const = default;
};

struct CoapMessage {
  CoapType type = CoapType::con;
  std::uint8_t code = code::empty;
  std::uint16_t message_id = 0;
  Bytes token;
  Bytes payload;

  CoapHeader header() const;
  bool operator==(const CoapMessage&) const = default;
};

std::string_view to_string(CoapType type);

/// Throws std::invalid_argument if the token exceeds 8 bytes.
Bytes encode_coap(const CoapMessage& msg);

/// Throws MalformedCoap on a short header, wrong version, token overrun,
/// bad option encoding or an empty payload after the marker.
CoapMessage decode_coap(ByteView wire);

/// ACK answering `request`, same message id and token.
CoapMessage make_ack(const CoapMessage& request, std::uint8_t response_code, Bytes payload);
CoapMessage make_rst(const CoapMessage& request);

}  // namespace lakee::transport
