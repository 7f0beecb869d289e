#include <catch_amalgamated.hpp>

#include "lakee/curve/group.hpp"
#include "lakee/protocol/messages.hpp"
#include "lakee/random.hpp"

using namespace lakee;
using namespace lakee::protocol;

namespace {

crypto::AeadEnvelope random_envelope(RandomSource& rng, std::size_t len) {
  crypto::AeadEnvelope env;
  rng.fill(env.nonce);
  env.ciphertext.resize(len);
  rng.fill(env.ciphertext);
  rng.fill(env.tag);
  return env;
}

}  // namespace

TEST_CASE("framed messages round trip", "[messages]") {
  SeededRandom rng(21, "msgs");
  for (const auto* c : {&curve::toy_profile(), &curve::ed448_profile()}) {
    for (int i = 0; i < 20; ++i) {
      HandshakeMsg1 m1{ClientId{rng.next_u64()},
                       random_envelope(rng, plaintext_size(MessageType::client_challenge, *c))};
      HandshakeMsg2 m2{random_envelope(rng, plaintext_size(MessageType::server_response, *c))};
      HandshakeMsg3 m3{random_envelope(rng, plaintext_size(MessageType::client_response, *c))};
      auto w1 = encode(m1), w2 = encode(m2), w3 = encode(m3);
      CHECK(w1.size() == wire_size(MessageType::client_challenge, *c));
      CHECK(decode_msg1(w1, *c) == m1);
      CHECK(decode_msg2(w2, *c) == m2);
      CHECK(decode_msg3(w3, *c) == m3);
      CHECK(peek_type(w2) == MessageType::server_response);
    }
  }
}

TEST_CASE("decoders reject truncated, extended and mislabelled input", "[messages]") {
  const auto& toy = curve::toy_profile();
  SeededRandom rng(22, "bad");
  HandshakeMsg1 m1{ClientId{7}, random_envelope(rng, plaintext_size(MessageType::client_challenge, toy))};
  Bytes wire = encode(m1);
  for (std::size_t n = 0; n < wire.size(); ++n) {
    CHECK_THROWS_AS(decode_msg1(ByteView(wire.data(), n), toy), MalformedMessage);
  }
  Bytes longer = wire;
  longer.push_back(0);
  CHECK_THROWS_AS(decode_msg1(longer, toy), MalformedMessage);

  Bytes wrong_version = wire;
  wrong_version[0] = 0x02;
  CHECK_THROWS_AS(decode_msg1(wrong_version, toy), MalformedMessage);
  CHECK_FALSE(peek_type(wrong_version));

  CHECK_THROWS_AS(decode_msg2(wire, toy), MalformedMessage);
  CHECK_FALSE(peek_type(Bytes{}));
}

TEST_CASE("payloads round trip", "[messages]") {
  const auto& toy = curve::toy_profile();
  Msg1Payload p1{crypto::hash_client_id(9), curve::ECPoint(3, 1), Timestamp{123456}};
  auto d1 = decode_msg1_payload(encode_payload(p1, toy), toy);
  CHECK(d1.id_digest == p1.id_digest);
  CHECK(d1.client_rand == p1.client_rand);
  CHECK(d1.t1 == p1.t1);

  Msg2Payload p2{curve::ECPoint(9, 16), curve::ECPoint(10, 6), Timestamp{0xfffffffe}};
  auto d2 = decode_msg2_payload(encode_payload(p2, toy), toy);
  CHECK(d2.response == p2.response);
  CHECK(d2.server_rand == p2.server_rand);
  CHECK(d2.t2 == p2.t2);

  Msg3Payload p3{curve::ECPoint::infinity(), Timestamp{1}};
  auto d3 = decode_msg3_payload(encode_payload(p3, toy), toy);
  CHECK(d3.response.is_infinity());
  CHECK_THROWS_AS(decode_msg3_payload(Bytes(3), toy), MalformedMessage);
}

TEST_CASE("msg1 layout: 64-bit id, big-endian timestamp at the end", "[messages]") {
  const auto& toy = curve::toy_profile();
  Msg1Payload p{crypto::hash_client_id(1), curve::ECPoint(5, 1), Timestamp{0x01020304}};
  Bytes pt = encode_payload(p, toy);
  REQUIRE(pt.size() == 20 + 2 + 4);
  CHECK(pt[20] == 5);
  CHECK(pt[21] == 1);
  CHECK(pt[22] == 1);
  CHECK(pt[25] == 4);

  HandshakeMsg1 m{ClientId{0x0102030405060708ULL}, {}};
  m.envelope.ciphertext = pt;
  Bytes wire = encode(m);
  CHECK(wire[0] == kWireVersion);
  CHECK(wire[1] == 0x01);
  CHECK(wire[2] == 0x01);
  CHECK(wire[9] == 0x08);
}

TEST_CASE("nominal field widths", "[messages]") {
  const auto l1 = wire_layout(MessageType::client_challenge, 56, 224);
  const auto l2 = wire_layout(MessageType::server_response, 56, 224);
  const auto l3 = wire_layout(MessageType::client_response, 56, 224);
  CHECK(nominal_bits(l1) == 608);
  CHECK(nominal_bits(l2) == 608);
  CHECK(nominal_bits(l3) == 384);

  const auto& ed = curve::ed448_profile();
  for (auto t : {MessageType::client_challenge, MessageType::server_response, MessageType::client_response}) {
    CHECK(wire_bits(wire_layout(t, ed)) == wire_size(t, ed) * 8);
  }
  CHECK(nominal_bits(wire_layout(MessageType::client_challenge, ed)) == 608);
}
