#include <catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "lakee/metrics.hpp"

using namespace lakee;
using namespace lakee::protocol;
using namespace lakee::testing;

namespace {

struct Completed {
  ClientEstablished client;
  ServerEstablished server;
};

Completed run(Pair& pair, ClientSession& client, std::uint32_t t = 1000) {
  auto msg1 = client.step1(at(t));
  auto reply = expect<Msg2Reply>(pair.server->step2(msg1, pair.client_addr, at(t)));
  auto done = expect<ClientEstablished>(client.step3(reply.msg, at(t + 1)));
  auto server = expect<ServerEstablished>(pair.server->step4(done.msg3, pair.client_addr, at(t + 2)));
  return {done, server};
}

HandshakeConfig rotating() {
  HandshakeConfig cfg;
  cfg.rotation_policy = [](ClientId) { return true; };
  return cfg;
}

}  // namespace

TEST_CASE("honest handshake agrees on the session key", "[handshake]") {
  for (const auto* c : {&curve::toy_profile(), &curve::ed448_profile()}) {
    Pair pair(*c);
    auto client = pair.client();
    auto [ce, se] = run(pair, client);
    CHECK(ce.result.session_key == se.result.session_key);
    CHECK(ce.secret == se.secret);
    CHECK(ce.result.session_key.derived_from() == crypto::CoordinateOrigin::x);
    CHECK_FALSE(ce.result.rotated_key);
    CHECK_FALSE(se.result.rotated_key);
    CHECK(se.result.peer == pair.id);
    CHECK(client.state() == ClientState::established);
    CHECK(pair.server->pending() == 0);
  }
}

TEST_CASE("forced scalars reproduce the reference session key", "[handshake]") {
  // r_c = 3, r_s = 5: secret = 15G = (3, 16); session key = kdf(0x03).
  const auto& toy = curve::toy_profile();
  Pair pair(toy);
  auto client = pair.client();
  pair.server->force_next_scalar(curve::Scalar::from_integer(5, toy));
  auto msg1 = client.step1(at(50), curve::Scalar::from_integer(3, toy));
  CHECK(client.client_rand() == curve::ECPoint(10, 6));

  auto reply = expect<Msg2Reply>(pair.server->step2(msg1, pair.client_addr, at(50)));
  auto payload = decode_msg2_payload(*crypto::aead_open(pair.key, reply.msg.envelope), toy);
  CHECK(payload.response == curve::ECPoint(3, 1));  // 3G + G
  CHECK(payload.server_rand == curve::ECPoint(9, 16));

  auto done = expect<ClientEstablished>(client.step3(reply.msg, at(51)));
  CHECK(done.secret == curve::ECPoint(3, 16));
  CHECK(to_hex(done.result.session_key.bytes()) == "8f15c2c1b005b8f06741c23e956d06cc");
  auto m3 = decode_msg3_payload(*crypto::aead_open(pair.key, done.msg3.envelope), toy);
  CHECK(m3.response == curve::ECPoint(16, 13));  // 5G + G

  auto server = expect<ServerEstablished>(pair.server->step4(done.msg3, pair.client_addr, at(52)));
  CHECK(to_hex(server.result.session_key.bytes()) == "8f15c2c1b005b8f06741c23e956d06cc");
}

TEST_CASE("forced scalars on the rotation branch", "[handshake]") {
  const auto& toy = curve::toy_profile();
  Pair pair(toy, rotating());
  auto client = pair.client();
  pair.server->force_next_scalar(curve::Scalar::from_integer(5, toy));
  auto msg1 = client.step1(at(50), curve::Scalar::from_integer(3, toy));
  auto reply = expect<Msg2Reply>(pair.server->step2(msg1, pair.client_addr, at(50)));
  auto payload = decode_msg2_payload(*crypto::aead_open(pair.key, reply.msg.envelope), toy);
  CHECK(payload.response == curve::ECPoint(9, 16));  // 3G + 2G
  auto done = expect<ClientEstablished>(client.step3(reply.msg, at(51)));
  CHECK(client.rotation());
  REQUIRE(done.result.rotated_key);
  // y(15G) = 16
  CHECK(done.result.rotated_key->bytes() == crypto::kdf(Bytes{0x10}));
}

TEST_CASE("rotation replaces Y on both sides", "[handshake]") {
  for (const auto* c : {&curve::toy_profile(), &curve::ed448_profile()}) {
    Pair pair(*c, rotating());
    auto client = pair.client();
    auto [ce, se] = run(pair, client);
    REQUIRE(ce.result.rotated_key);
    REQUIRE(se.result.rotated_key);
    CHECK(*ce.result.rotated_key == *se.result.rotated_key);
    CHECK(*client.new_long_term() == *ce.result.rotated_key);
    CHECK(*pair.keystore.find(pair.id) == *se.result.rotated_key);
    CHECK_FALSE(*se.result.rotated_key == pair.key);

    // Follow-up under Y' succeeds.
    ClientSession next(pair.id, *ce.result.rotated_key, *c, pair.client_rng, pair.config);
    auto again = run(pair, next, 2000);
    CHECK(again.client.result.session_key == again.server.result.session_key);

    // A client still holding the old Y is refused.
    ClientSession stale(pair.id, pair.key, *c, pair.client_rng, pair.config);
    auto m1 = stale.step1(at(3000));
    CHECK(reason_of(pair.server->step2(m1, pair.client_addr, at(3000))) == TerminateReason::auth_failure);
  }
}

TEST_CASE("operation counts for one handshake", "[handshake][counts]") {
  for (bool rotate : {false, true}) {
    for (const auto* c : {&curve::toy_profile(), &curve::ed448_profile()}) {
      Pair pair(*c, rotate ? rotating() : HandshakeConfig{});
      auto client = pair.client();
      metrics::reset();
      run(pair, client);
      const auto ops = metrics::counters();
      INFO(c->name() << " rotate=" << rotate);
      CHECK(ops.ecpm == 6);
      CHECK(ops.subgroup_checks == 2);
      CHECK(ops.aead_seal == 3);
      CHECK(ops.aead_open == 3);
      CHECK(ops.hash_direct == 2);
      CHECK(ops.hash_kdf == (rotate ? 128u : 64u));
      CHECK(ops.ecpa == (rotate ? 5u : 4u));
    }
  }
}

TEST_CASE("client rejects a tampered or forged Msg2", "[handshake]") {
  const auto& toy = curve::toy_profile();

  SECTION("bit flip") {
    Pair pair(toy);
    auto client = pair.client();
    auto reply = expect<Msg2Reply>(pair.server->step2(client.step1(at(10)), pair.client_addr, at(10)));
    reply.msg.envelope.ciphertext[0] ^= 1;
    CHECK(reason_of(client.step3(reply.msg, at(10))) == TerminateReason::auth_failure);
    CHECK(client.state() == ClientState::failed);
    CHECK_THROWS_AS(client.step3(reply.msg, at(10)), std::logic_error);
  }

  SECTION("stale") {
    Pair pair(toy);
    auto client = pair.client();
    auto reply = expect<Msg2Reply>(pair.server->step2(client.step1(at(10)), pair.client_addr, at(10)));
    CHECK(reason_of(client.step3(reply.msg, at(41))) == TerminateReason::stale);
  }

  SECTION("wrong offset") {
    Pair pair(toy);
    auto client = pair.client();
    client.step1(at(10), curve::Scalar::from_integer(3, toy));
    Msg2Payload forged{curve::ECPoint(16, 13), curve::ECPoint(9, 16), at(10)};  // 3G + 3G
    HandshakeMsg2 m{crypto::aead_seal(pair.key, {}, encode_payload(forged, toy))};
    CHECK(reason_of(client.step3(m, at(10))) == TerminateReason::bad_challenge_response);
  }

  SECTION("server_rand off the curve or at infinity") {
    for (auto bad : {curve::ECPoint(1, 1), curve::ECPoint::infinity()}) {
      Pair pair(toy);
      auto client = pair.client();
      client.step1(at(10), curve::Scalar::from_integer(3, toy));
      Msg2Payload forged{curve::ECPoint(3, 1), bad, at(10)};
      HandshakeMsg2 m{crypto::aead_seal(pair.key, {}, encode_payload(forged, toy))};
      metrics::reset();
      CHECK(reason_of(client.step3(m, at(10))) == TerminateReason::invalid_point);
      CHECK(metrics::counters().ecpm == 0);
    }
  }

  SECTION("wrong length") {
    Pair pair(toy);
    auto client = pair.client();
    client.step1(at(10));
    CHECK(reason_of(client.step3(Bytes{0x01, 0x02, 0x03}, at(10))) == TerminateReason::malformed);
  }
}

TEST_CASE("client state machine guards", "[handshake]") {
  Pair pair(curve::toy_profile());
  auto client = pair.client();
  CHECK_THROWS_AS(client.step3(HandshakeMsg2{}, at(1)), std::logic_error);
  client.step1(at(1));
  CHECK_THROWS_AS(client.step1(at(1)), std::logic_error);
}

TEST_CASE("session key needs a secret scalar", "[handshake]") {
  // Knowing Y and the transcript gives client_rand and server_rand but the
  // session key is kdf(x(r_c * server_rand)), not a function of the two
  // public points alone.
  const auto& ed = curve::ed448_profile();
  Pair pair(ed);
  auto client = pair.client();
  auto msg1 = client.step1(at(10));
  auto reply = expect<Msg2Reply>(pair.server->step2(msg1, pair.client_addr, at(10)));
  auto done = expect<ClientEstablished>(client.step3(reply.msg, at(10)));

  auto p1 = decode_msg1_payload(*crypto::aead_open(pair.key, msg1.envelope), ed);
  auto p2 = decode_msg2_payload(*crypto::aead_open(pair.key, reply.msg.envelope), ed);
  CHECK(p1.client_rand == client.client_rand());
  auto sum = curve::point_add(p1.client_rand, p2.server_rand, ed);
  CHECK(crypto::kdf(curve::encode_coordinate(sum.x(), ed)) != done.result.session_key.bytes());
  CHECK(crypto::kdf(curve::encode_coordinate(p1.client_rand.x(), ed)) != done.result.session_key.bytes());
  CHECK(crypto::kdf(curve::encode_coordinate(p2.server_rand.x(), ed)) != done.result.session_key.bytes());
}
