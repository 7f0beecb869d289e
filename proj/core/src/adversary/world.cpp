#include "lakee/adversary/world.hpp"

namespace lakee::adversary {

crypto::LongTermKey World::provision(std::uint64_t seed) {
  SeededRandom rng(seed, "provision");
  crypto::KeyBytes k{};
  rng.fill(k);
  return crypto::LongTermKey(k);
}

namespace {

protocol::HandshakeConfig with_rotation(protocol::HandshakeConfig cfg, bool rotate) {
  if (rotate) cfg.rotation_policy = [](protocol::ClientId) { return true; };
  return cfg;
}

}  // namespace

World::World(const WorldOptions& options)
    : curve(options.curve ? *options.curve : curve::toy_profile()),
      client_key(provision(options.seed)),
      server_rng(options.seed, "server"),
      client_rng(options.seed, "client"),
      link_rng(options.seed, "link"),
      config(with_rotation(options.handshake, options.rotate)),
      retransmit(options.retransmit),
      table((keystore.put(client_id, client_key), keystore), curve, config, server_rng),
      net(kServerAddress, transport::Millis(1'700'000'000'000), options.latency),
      responder(table, net.clock()),
      channel(net.connect(kClientAddress)) {
  transport::attach_responder(net, kServerAddress, responder);
  responder.set_observer([this](const transport::ResponderEvent& e) { events.push_back(e); });
}

const transport::ClientRun& World::run_client() {
  protocol::ClientSession session(client_id, client_key, curve, client_rng, config);
  client_runs.push_back(transport::run_client_handshake(session, *channel, link_rng, retransmit));
  net.run_until_idle();
  const auto& run = client_runs.back();
  if (auto* done = std::get_if<protocol::ClientEstablished>(&run.outcome)) {
    if (done->result.rotated_key) client_key = *done->result.rotated_key;
  }
  return run;
}

}  // namespace lakee::adversary
