#include "lakee/transport/coap.hpp"

namespace lakee::transport {

CoapHeader CoapMessage::header() const {
  return CoapHeader{kCoapVersion, type, static_cast<std::uint8_t>(token.size()), code, message_id};
}

std::string_view to_string(CoapType type) {
  switch (type) {
    case CoapType::con: return "CON";
    case CoapType::non: return "NON";
    case CoapType::ack: return "ACK";
    case CoapType::rst: return "RST";
  }
  return "?";
}

Bytes encode_coap(const CoapMessage& msg) {
  if (msg.token.size() > kMaxTokenBytes) throw std::invalid_argument("CoAP token longer than 8 bytes");
  Bytes out;
  out.reserve(kCoapHeaderBytes + msg.token.size() + 1 + msg.payload.size());
  out.push_back(static_cast<std::uint8_t>((kCoapVersion << 6) | (static_cast<unsigned>(msg.type) << 4) |
                                          msg.token.size()));
  out.push_back(msg.code);
  put_u16(out, msg.message_id);
  append(out, msg.token);
  if (!msg.payload.empty()) {
    out.push_back(0xff);
    append(out, msg.payload);
  }
  return out;
}

namespace {

// Option delta/length nibble with its 13/14 extensions.
std::size_t option_field(unsigned nibble, ByteReader& reader) {
  if (nibble < 13) return nibble;
  if (nibble == 13) return 13 + reader.u8();
  if (nibble == 14) return 269 + reader.u16();
  throw MalformedCoap("reserved option nibble");
}

}  // namespace

CoapMessage decode_coap(ByteView wire) {
  if (wire.size() < kCoapHeaderBytes) throw MalformedCoap("CoAP header too short");
  ByteReader reader(wire);
  try {
    std::uint8_t first = reader.u8();
    if ((first >> 6) != kCoapVersion) throw MalformedCoap("unsupported CoAP version");
    CoapMessage msg;
    msg.type = static_cast<CoapType>((first >> 4) & 0x3);
    std::size_t tkl = first & 0x0f;
    if (tkl > kMaxTokenBytes) throw MalformedCoap("token length above 8");
    msg.code = reader.u8();
    msg.message_id = reader.u16();
    if (reader.remaining() < tkl) throw MalformedCoap("token overruns message");
    auto token = reader.take(tkl);
    msg.token.assign(token.begin(), token.end());

    while (!reader.done()) {
      std::uint8_t byte = reader.u8();
      if (byte == 0xff) {
        if (reader.done()) throw MalformedCoap("payload marker without payload");
        auto rest = reader.take(reader.remaining());
        msg.payload.assign(rest.begin(), rest.end());
        break;
      }
      option_field(byte >> 4, reader);
      std::size_t length = option_field(byte & 0x0f, reader);
      if (reader.remaining() < length) throw MalformedCoap("option overruns message");
      reader.take(length);
    }
    return msg;
  } catch (const ReadOverrun&) {
    throw MalformedCoap("truncated CoAP message");
  }
}

CoapMessage make_ack(const CoapMessage& request, std::uint8_t response_code, Bytes payload) {
  return CoapMessage{CoapType::ack, response_code, request.message_id, request.token, std::move(payload)};
}

CoapMessage make_rst(const CoapMessage& request) {
  return CoapMessage{CoapType::rst, code::empty, request.message_id, {}, {}};
}

}  // namespace lakee::transport
