#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace lakee {

/// IPv4 endpoint. Rate limiting keys on prefix(), handshake state on the
/// full address.
struct Address {
  std::uint32_t ipv4 = 0;
  std::uint16_t port = 0;

  /// "a.b.c.d:port"; throws std::invalid_argument.
  static Address parse(std::string_view text);
  std::string to_string() const;

  /// Network prefix of the given length (0-32), host bits cleared.
  std::uint32_t prefix(unsigned bits) const;

  auto operator<=>(const Address&) const = default;
};

}  // namespace lakee
