#pragma once

#include <memory>
#include <vector>

#include "lakee/address.hpp"
#include "lakee/curve/profile.hpp"
#include "lakee/protocol/client.hpp"
#include "lakee/protocol/keystore.hpp"
#include "lakee/protocol/server.hpp"
#include "lakee/random.hpp"
#include "lakee/transport/handshake.hpp"
#include "lakee/transport/sim.hpp"

namespace lakee::adversary {

inline const Address kServerAddress{0x0a000001, 5683};    // 10.0.0.1:5683
inline const Address kClientAddress{0x0a000002, 40000};   // 10.0.0.2:40000
inline const Address kAttackerAddress{0x0a090042, 7000};  // 10.9.0.66:7000

struct WorldOptions {
  const curve::CurveProfile* curve = nullptr;  // toy when null
  std::uint64_t seed = 1;
  bool rotate = false;
  protocol::HandshakeConfig handshake;
  transport::RetransmitPolicy retransmit;
  transport::Millis latency{5};  // one way
};

/// One provisioned client and one server on a simulated link. Everything
/// random is derived from the seed.
class World {
 public:
  explicit World(const WorldOptions& options);
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  /// One client handshake, then pumps the network until idle. A rotated
  /// key is adopted by the client for later runs.
  const transport::ClientRun& run_client();

  const curve::CurveProfile& curve;
  const protocol::ClientId client_id{0x00000000c0ffee01ULL};
  crypto::LongTermKey client_key;
  protocol::Keystore keystore;
  SeededRandom server_rng;
  SeededRandom client_rng;
  SeededRandom link_rng;
  protocol::HandshakeConfig config;
  transport::RetransmitPolicy retransmit;
  protocol::ServerSessionTable table;
  transport::SimNetwork net;
  transport::HandshakeResponder responder;
  std::unique_ptr<transport::DatagramChannel> channel;

  std::vector<transport::ResponderEvent> events;
  std::vector<transport::ClientRun> client_runs;

 private:
  static crypto::LongTermKey provision(std::uint64_t seed);
};

}  // namespace lakee::adversary
