#include "lakee/address.hpp"

#include <charconv>
#include <stdexcept>

namespace lakee {

namespace {
template <typename T>
T parse_number(std::string_view text, T max) {
  unsigned long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || value > max) {
    throw std::invalid_argument("bad address component: " + std::string(text));
  }
  return static_cast<T>(value);
}
}  // namespace

Address Address::parse(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("address needs host:port");
  std::string_view host = text.substr(0, colon);
  Address out;
  out.port = parse_number<std::uint16_t>(text.substr(colon + 1), 0xffff);
  for (int i = 0; i < 4; ++i) {
    auto dot = host.find('.');
    if ((i < 3) == (dot == std::string_view::npos)) throw std::invalid_argument("bad IPv4 address");
    std::string_view part = i < 3 ? host.substr(0, dot) : host;
    out.ipv4 = (out.ipv4 << 8) | parse_number<std::uint32_t>(part, 255);
    if (i < 3) host.remove_prefix(dot + 1);
  }
  return out;
}

std::string Address::to_string() const {
  return std::to_string(ipv4 >> 24) + "." + std::to_string((ipv4 >> 16) & 0xff) + "." +
         std::to_string((ipv4 >> 8) & 0xff) + "." + std::to_string(ipv4 & 0xff) + ":" + std::to_string(port);
}

std::uint32_t Address::prefix(unsigned bits) const {
  if (bits == 0) return 0;
  if (bits >= 32) return ipv4;
  return ipv4 & ~((std::uint32_t{1} << (32 - bits)) - 1);
}

}  // namespace lakee
