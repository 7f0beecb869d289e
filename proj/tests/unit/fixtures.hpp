#pragma once

#include <memory>

#include "lakee/address.hpp"
#include "lakee/protocol/client.hpp"
#include "lakee/protocol/keystore.hpp"
#include "lakee/protocol/server.hpp"
#include "lakee/random.hpp"

namespace lakee::testing {

inline crypto::LongTermKey key_of(std::uint8_t fill) {
  crypto::KeyBytes k{};
  k.fill(fill);
  return crypto::LongTermKey(k);
}

/// One server, one provisioned client.
struct Pair {
  explicit Pair(const curve::CurveProfile& c, protocol::HandshakeConfig cfg = {}, std::uint64_t seed = 1)
      : curve(c), client_rng(seed, "client"), server_rng(seed, "server"), config(std::move(cfg)) {
    keystore.put(id, key);
    server = std::make_unique<protocol::ServerSessionTable>(keystore, curve, config, server_rng);
  }

  protocol::ClientSession client(std::optional<crypto::LongTermKey> k = std::nullopt) {
    return protocol::ClientSession(id, k.value_or(*keystore.find(id)), curve, client_rng, config);
  }

  const curve::CurveProfile& curve;
  SeededRandom client_rng;
  SeededRandom server_rng;
  protocol::HandshakeConfig config;
  protocol::Keystore keystore;
  protocol::ClientId id{0x1122334455667788ULL};
  crypto::LongTermKey key = key_of(0x5a);
  Address client_addr = Address::parse("10.0.0.2:40000");
  std::unique_ptr<protocol::ServerSessionTable> server;
};

inline protocol::Timestamp at(std::uint32_t s) { return protocol::Timestamp{s}; }

template <class T, class V>
const T& expect(const V& v) {
  REQUIRE(std::holds_alternative<T>(v));
  return std::get<T>(v);
}

template <class V>
protocol::TerminateReason reason_of(const V& v) {
  REQUIRE(std::holds_alternative<protocol::Terminated>(v));
  return std::get<protocol::Terminated>(v).reason;
}

}  // namespace lakee::testing
