#include <catch_amalgamated.hpp>

#include <json.hpp>

#include "lakee/bench/report.hpp"
#include "lakee/random.hpp"

using namespace lakee;
using namespace lakee::bench;

TEST_CASE("nominal sizes at 224 and 128 bit points", "[bench]") {
  auto m = nominal_sizes(224);
  REQUIRE(m.messages.size() == 3);
  CHECK(m.messages[0].total_bits == 608);
  CHECK(m.messages[1].total_bits == 608);
  CHECK(m.messages[2].total_bits == 384);
  CHECK(m.total_bits == 1600);
  // 64 + 160 + 224 + 32 + 128
  std::vector<std::size_t> msg1;
  for (const auto& f : m.messages[0].fields) msg1.push_back(f.bits);
  CHECK(msg1 == std::vector<std::size_t>{64, 160, 224, 32, 128});

  auto small = nominal_sizes(128);
  CHECK(small.messages[0].total_bits == 512);
  CHECK(small.messages[1].total_bits == 416);
  CHECK(small.messages[2].total_bits == 288);
  CHECK(small.total_bits == 1216);

  CHECK_THROWS_AS(nominal_sizes(0), std::invalid_argument);
}

TEST_CASE("size totals are field sums", "[bench]") {
  SeededRandom rng(31, "sizes");
  for (int i = 0; i < 200; ++i) {
    const std::size_t bits = 1 + rng.next_u64() % 4096;
    auto m = nominal_sizes(bits);
    std::size_t total = 0;
    for (const auto& msg : m.messages) {
      std::size_t sum = 0;
      for (const auto& f : msg.fields) sum += f.bits;
      CHECK(sum == msg.total_bits);
      total += sum;
    }
    CHECK(total == m.total_bits);
    CHECK(m.total_bits == 64 + 160 + 4 * bits + 3 * 32 + 3 * 128);
  }
}

TEST_CASE("measured handshake counts", "[bench]") {
  for (bool rotate : {false, true}) {
    auto a = measure_handshake(curve::toy_profile(), rotate, 4);
    auto b = measure_handshake(curve::toy_profile(), rotate, 4);
    CHECK(a.established);
    CHECK(a.keys_match);
    CHECK(a.messages == 3);
    CHECK(a.ops.ecpm == 6);
    CHECK(a.ops.aead_seal == 3);
    CHECK(a.ops.hash_direct == 2);
    CHECK(a.ops.ecpm == b.ops.ecpm);
    CHECK(a.ops.hash_kdf == b.ops.hash_kdf);
    CHECK(a.wire_bytes == b.wire_bytes);
  }
  auto ed = measure_handshake(curve::ed448_profile(), false);
  // Msg1 + Msg2 + Msg3 with 112-byte points.
  CHECK(ed.lakee_bytes == (2 + 8 + 11 + 20 + 112 + 4 + 16) + (2 + 11 + 224 + 4 + 16) + (2 + 11 + 112 + 4 + 16));
  CHECK(ed.ops.ecpm == 6);
}

TEST_CASE("tables render identically for a fixed seed", "[bench]") {
  auto make = [] {
    return report_tables({measure_handshake(curve::toy_profile(), false, 9),
                          measure_handshake(curve::toy_profile(), true, 9)},
                         224);
  };
  auto t1 = make(), t2 = make();
  CHECK(render_text(t1) == render_text(t2));
  CHECK(render_json(t1) == render_json(t2));
  REQUIRE(t1.message_counts.size() == 5);
  CHECK(t1.message_counts[0].protocol == "LAKEE");
  CHECK(t1.message_counts[0].measured);
  CHECK(t1.message_counts[0].messages == 3);
  CHECK(t1.message_counts[4].messages == 6);

  auto j = nlohmann::json::parse(render_json(t1));
  CHECK(j["sizes"]["total_bits"] == 1600);
  CHECK(j["runs"][1]["hash_kdf"] == 128);
  CHECK_FALSE(j["runs"][0].contains("wall_ms"));
  CHECK(nlohmann::json::parse(render_json(t1, true))["runs"][0].contains("wall_ms"));
  CHECK_THROWS_AS(report_tables({}, 224), std::invalid_argument);
}
