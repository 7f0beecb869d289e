#include <catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "lakee/transport/sim.hpp"

using namespace lakee;
using namespace lakee::protocol;
using namespace lakee::transport;
using namespace lakee::testing;

namespace {

const Address kServer = Address::parse("10.0.0.1:5683");
const Address kClient = Address::parse("10.0.0.2:40000");

struct SimWorld {
  explicit SimWorld(const curve::CurveProfile& c = curve::toy_profile(), std::uint64_t seed = 1)
      : pair(c, {}, seed), net(kServer), responder(*pair.server, net.clock()), link_rng(seed, "link") {
    attach_responder(net, kServer, responder);
    responder.set_observer([this](const ResponderEvent& e) { events.push_back(e); });
    channel = net.connect(kClient);
  }

  ClientRun handshake(const RetransmitPolicy& policy = {}) {
    auto client = pair.client();
    auto run = run_client_handshake(client, *channel, link_rng, policy);
    net.run_until_idle();
    return run;
  }

  std::size_t count(ResponderEvent::Kind kind) const {
    std::size_t n = 0;
    for (const auto& e : events) n += e.kind == kind;
    return n;
  }

  Pair pair;
  SimNetwork net;
  HandshakeResponder responder;
  SeededRandom link_rng;
  std::unique_ptr<DatagramChannel> channel;
  std::vector<ResponderEvent> events;
};

}  // namespace

TEST_CASE("clean link: three datagrams and matching keys", "[sim]") {
  SimWorld w;
  auto run = w.handshake();
  auto& done = expect<ClientEstablished>(run.outcome);
  CHECK(run.transmissions == 1);
  CHECK(w.net.datagrams_sent() == 3);
  CHECK(w.net.sent_in(Direction::client_to_server) == 2);
  CHECK(w.net.sent_in(Direction::server_to_client) == 1);
  REQUIRE(w.count(ResponderEvent::Kind::established) == 1);
  for (const auto& e : w.events) {
    if (e.session) CHECK(e.session->result.session_key == done.result.session_key);
  }
}

TEST_CASE("first CON dropped: one retransmission, handshake completes", "[sim]") {
  SimWorld w;
  w.net.schedule().drop(Direction::client_to_server, 1);
  auto run = w.handshake();
  expect<ClientEstablished>(run.outcome);
  REQUIRE(run.transmissions == 2);
  CHECK(run.con_sent[1] - run.con_sent[0] == Millis(2000));
  CHECK(w.count(ResponderEvent::Kind::established) == 1);
}

TEST_CASE("lost ACK: retransmitted CON gets the cached Msg2", "[sim]") {
  SimWorld w;
  w.net.schedule().drop(Direction::server_to_client, 1);
  auto run = w.handshake();
  expect<ClientEstablished>(run.outcome);
  CHECK(run.transmissions == 2);
  CHECK(w.count(ResponderEvent::Kind::replied) == 1);
  CHECK(w.count(ResponderEvent::Kind::replied_cached) == 1);
  CHECK(w.count(ResponderEvent::Kind::established) == 1);
}

TEST_CASE("retransmission backoff and timeout", "[sim]") {
  SimWorld w;
  for (unsigned i = 1; i <= 5; ++i) w.net.schedule().drop(Direction::client_to_server, i);
  auto run = w.handshake();
  CHECK(std::holds_alternative<HandshakeTimeout>(run.outcome));
  REQUIRE(run.transmissions == 5);
  for (unsigned i = 1; i < run.transmissions; ++i) {
    CHECK(run.con_sent[i] - run.con_sent[i - 1] == Millis(2000LL << (i - 1)));
  }
  CHECK(w.pair.server->failure_count(kClient) == 0);
}

TEST_CASE("ACK with the wrong message id is ignored", "[sim]") {
  SimWorld w;
  w.net.set_tap([](Datagram& d, Direction dir, unsigned index) {
    if (dir == Direction::server_to_client && index == 1) d.payload[3] ^= 0x01;
    return true;
  });
  auto run = w.handshake();
  expect<ClientEstablished>(run.outcome);
  CHECK(run.transmissions == 2);
}

TEST_CASE("duplicated Msg1 re-elicits the identical Msg2", "[sim]") {
  SimWorld w;
  w.net.schedule().duplicate(Direction::client_to_server, 1);
  std::vector<Bytes> acks;
  w.net.set_tap([&](Datagram& d, Direction dir, unsigned) {
    if (dir == Direction::server_to_client) acks.push_back(d.payload);
    return true;
  });
  auto run = w.handshake();
  expect<ClientEstablished>(run.outcome);
  REQUIRE(acks.size() == 2);
  CHECK(acks[0] == acks[1]);
  CHECK(w.count(ResponderEvent::Kind::replied_cached) == 1);
  CHECK(w.count(ResponderEvent::Kind::established) == 1);
}

TEST_CASE("duplicated Msg3 never creates a second session", "[sim]") {
  SimWorld w;
  w.net.schedule().duplicate(Direction::client_to_server, 2);
  auto run = w.handshake();
  expect<ClientEstablished>(run.outcome);
  CHECK(w.count(ResponderEvent::Kind::established) == 1);
  REQUIRE(w.count(ResponderEvent::Kind::terminated) == 1);
  CHECK(w.events.back().reason == TerminateReason::no_such_handshake);
}

TEST_CASE("dropped Msg3: client established, server entry expires", "[sim]") {
  SimWorld w;
  w.net.schedule().drop(Direction::client_to_server, 2);
  auto run = w.handshake();
  expect<ClientEstablished>(run.outcome);
  CHECK(w.count(ResponderEvent::Kind::established) == 0);
  CHECK(w.pair.server->pending() == 1);
  w.net.advance(Millis(31'000));
  w.pair.server->expire(w.net.clock().timestamp());
  CHECK(w.pair.server->pending() == 0);
}

TEST_CASE("Msg2 delayed past delta_t: client terminates Stale", "[sim]") {
  SimWorld w;
  w.net.schedule().delay_all(Direction::server_to_client, Millis(31'000));
  RetransmitPolicy patient{Millis(40'000), 2.0, 0};
  auto run = w.handshake(patient);
  CHECK(expect<Terminated>(run.outcome).reason == TerminateReason::stale);
}

TEST_CASE("server termination answers a CON with RST", "[sim]") {
  SimWorld w;
  auto client = ClientSession(w.pair.id, key_of(0x01), w.pair.curve, w.pair.client_rng);
  auto run = run_client_handshake(client, *w.channel, w.link_rng);
  CHECK(std::holds_alternative<ServerReset>(run.outcome));
  CHECK(w.pair.server->failure_count(kClient) == 1);
}

TEST_CASE("reordered datagrams", "[sim]") {
  SimWorld w;
  w.net.schedule().reorder(Direction::client_to_server, 1).drop(Direction::server_to_client, 1);
  // CON #1 is held until CON #2 (the retransmission) goes out; the server
  // sees #2 first and then the identical #1, answered from cache.
  auto run = w.handshake();
  expect<ClientEstablished>(run.outcome);
  CHECK(w.count(ResponderEvent::Kind::established) == 1);
}

TEST_CASE("seeded loss is deterministic", "[sim]") {
  auto sample = [](std::uint64_t seed) {
    SimWorld w(curve::toy_profile(), 9);
    w.net.schedule().loss(0.3, seed);
    auto run = w.handshake();
    return std::make_pair(run.transmissions, w.net.datagrams_sent());
  };
  CHECK(sample(5) == sample(5));
}

TEST_CASE("honest sim handshake on ed448", "[sim][ed448]") {
  SimWorld w(curve::ed448_profile());
  auto run = w.handshake();
  expect<ClientEstablished>(run.outcome);
  CHECK(w.count(ResponderEvent::Kind::established) == 1);
  CHECK(w.net.datagrams_sent() == 3);
}
