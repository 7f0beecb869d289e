#include <catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "lakee/protocol/dtls_export.hpp"

using namespace lakee;
using namespace lakee::protocol;
using namespace lakee::testing;

TEST_CASE("dtls export fields", "[dtls]") {
  const auto& toy = curve::toy_profile();
  Pair pair(toy);
  auto client = pair.client();
  pair.server->force_next_scalar(curve::Scalar::from_integer(5, toy));
  auto reply = expect<Msg2Reply>(pair.server->step2(client.step1(at(1), curve::Scalar::from_integer(3, toy)),
                                                    pair.client_addr, at(1)));
  auto done = expect<ClientEstablished>(client.step3(reply.msg, at(1)));

  SeededRandom rng(31, "dtls");
  auto ex = export_dtls(done.result, done.secret, toy, rng);
  CHECK(ex.cipher_suite == "TLS_PSK_WITH_AES_128_CCM_8");
  CHECK(to_hex(ex.read_state.key) == "8f15c2c1b005b8f06741c23e956d06cc");  // kdf(x = 3)
  CHECK(ex.write_state.key == crypto::kdf(Bytes{0x10}));                  // kdf(y = 16)
  CHECK(ex.read_state.key != ex.write_state.key);
  CHECK(ex.sequence_number == 0);
  CHECK_FALSE(ex.peer_certificate.has_value());

  auto again = export_dtls(done.result, done.secret, toy, rng);
  CHECK(again.read_state.key == ex.read_state.key);
  CHECK(again.write_state.key == ex.write_state.key);
  CHECK(again.client_iv != ex.client_iv);
  CHECK(again.read_state.nonce != ex.read_state.nonce);
}

TEST_CASE("dtls export refuses a mismatched secret", "[dtls]") {
  const auto& toy = curve::toy_profile();
  Pair pair(toy);
  auto client = pair.client();
  auto reply = expect<Msg2Reply>(pair.server->step2(client.step1(at(1)), pair.client_addr, at(1)));
  auto done = expect<ClientEstablished>(client.step3(reply.msg, at(1)));
  SeededRandom rng(32, "dtls");
  auto wrong = curve::point_add(done.secret, toy.generator(), toy);
  CHECK_THROWS_AS(export_dtls(done.result, wrong, toy, rng), std::invalid_argument);
  CHECK_THROWS_AS(export_dtls(done.result, curve::ECPoint::infinity(), toy, rng), std::invalid_argument);
}
