#include <catch_amalgamated.hpp>

#include <mutex>

#include "fixtures.hpp"
#include "lakee/transport/udp.hpp"

using namespace lakee;
using namespace lakee::protocol;
using namespace lakee::transport;
using namespace lakee::testing;

TEST_CASE("udp loopback handshake", "[udp]") {
  for (const auto* c : {&curve::toy_profile(), &curve::ed448_profile()}) {
    Pair pair(*c);
    UdpServer server(*pair.server, Address::parse("127.0.0.1:0"), 2);
    std::mutex m;
    std::vector<ServerEstablished> sessions;
    server.responder().set_observer([&](const ResponderEvent& e) {
      if (e.session) {
        std::lock_guard lock(m);
        sessions.push_back(*e.session);
      }
    });
    server.start();

    UdpClientChannel channel(server.local_address());
    SeededRandom rng(51, "udp");
    auto client = pair.client();
    auto run = run_client_handshake(client, channel, rng, RetransmitPolicy{Millis(500), 2.0, 4});
    auto& done = expect<ClientEstablished>(run.outcome);

    for (int i = 0; i < 200; ++i) {
      {
        std::lock_guard lock(m);
        if (!sessions.empty()) break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    server.stop();
    REQUIRE(sessions.size() == 1);
    CHECK(sessions[0].result.session_key == done.result.session_key);
    CHECK(server.datagrams_received() == 2);
  }
}

TEST_CASE("udp server handles concurrent clients", "[udp]") {
  Pair pair(curve::toy_profile());
  std::vector<ClientId> ids;
  for (std::uint64_t i = 0; i < 8; ++i) {
    ids.push_back(ClientId{1000 + i});
    pair.keystore.put(ids.back(), key_of(static_cast<std::uint8_t>(i)));
  }
  UdpServer server(*pair.server, Address::parse("127.0.0.1:0"), 3);
  std::atomic<int> established{0};
  server.responder().set_observer([&](const ResponderEvent& e) {
    if (e.session) ++established;
  });
  server.start();

  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (std::size_t i = 0; i < ids.size(); ++i) {
    threads.emplace_back([&, i] {
      SeededRandom rng(60 + i, "client");
      UdpClientChannel channel(server.local_address());
      ClientSession client(ids[i], key_of(static_cast<std::uint8_t>(i)), pair.curve, rng);
      auto run = run_client_handshake(client, channel, rng, RetransmitPolicy{Millis(500), 2.0, 4});
      if (std::holds_alternative<ClientEstablished>(run.outcome)) ++ok;
    });
  }
  for (auto& t : threads) t.join();
  for (int i = 0; i < 200 && established < 8; ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  server.stop();
  CHECK(ok == 8);
  CHECK(established == 8);
}
