#include <catch_amalgamated.hpp>

#include "lakee/adversary/attack.hpp"

using namespace lakee;
using namespace lakee::adversary;

namespace {

curve::CurveProfile edwards59() { return curve::load_profile(LAKEE_TEST_DATA_DIR "/edwards59.profile"); }

}  // namespace

TEST_CASE("every built-in script passes", "[adversary]") {
  for (const auto& name : builtin_script_names()) {
    auto report = run_attack(builtin_script(name));
    INFO(report.render());
    CHECK(report.passed);
    CHECK(report.checks.size() >= 2);
  }
}

TEST_CASE("built-in scripts on Ed448", "[adversary][ed448]") {
  for (const auto* name : {"mitm", "replay_msg3", "invalid_curve", "cross_branch", "insider"}) {
    auto report = run_attack(builtin_script(name), &curve::ed448_profile());
    INFO(report.render());
    CHECK(report.passed);
  }
}

TEST_CASE("scripts with rotation on", "[adversary]") {
  for (const auto* name : {"mitm", "tamper_msg2", "tamper_msg3", "insider", "known_session_temporary"}) {
    auto script = builtin_script(name);
    script.rotate = true;
    auto report = run_attack(script);
    INFO(report.render());
    CHECK(report.passed);
  }
}

TEST_CASE("attack reports are deterministic", "[adversary]") {
  for (const auto* name : {"dos_unblock", "cross_branch"}) {
    auto a = run_attack(builtin_script(name)).render();
    auto b = run_attack(builtin_script(name)).render();
    CHECK(a == b);
  }
  auto script = builtin_script("mitm");
  auto first = run_attack(script).render();
  script.seed = 2;
  CHECK(run_attack(script).render() != first);
}

TEST_CASE("reports never carry key material", "[adversary]") {
  auto script = builtin_script("known_session_temporary");
  World world(WorldOptions{&curve::toy_profile(), script.seed});
  auto key_hex = to_hex(world.client_key.bytes());
  auto text = run_attack(script).render();
  CHECK(text.find(key_hex) == std::string::npos);
}

TEST_CASE("a failed expectation fails the report", "[adversary]") {
  auto report = run_attack(parse_script("handshake\nexpect no_established\n"));
  CHECK_FALSE(report.passed);
  REQUIRE(report.checks.size() == 2);
  CHECK_FALSE(report.checks[0].ok);
  CHECK(report.checks[1].ok);  // the soundness invariant still holds
}

TEST_CASE("drop and delay on the link", "[adversary]") {
  // Dropping the first Msg1 forces one retransmission.
  auto dropped = run_attack(parse_script("drop 1\nhandshake\nexpect established 1\n"));
  INFO(dropped.render());
  CHECK(dropped.passed);
  CHECK(dropped.client_log.front().find("after 2 CON") != std::string::npos);

  // Msg3 held past delta_t finds its entry expired.
  auto late = run_attack(parse_script("delay 3 31000\nhandshake\nexpect server_rejects NoSuchHandshake 1\n"));
  INFO(late.render());
  CHECK(late.passed);
}

TEST_CASE("inject of a truncated message", "[adversary]") {
  auto report = run_attack(parse_script("inject 0101aabb\nexpect server_rejects MalformedMessage 1\n"));
  INFO(report.render());
  CHECK(report.passed);
}

TEST_CASE("invalid curve probe on every profile", "[adversary]") {
  for (const auto* c : {&curve::toy_profile(), &curve::ed448_profile()}) {
    auto report = invalid_curve_probe(*c, 3);
    INFO(report.render());
    CHECK(report.passed);
    CHECK(report.rejections.at("InvalidPoint") == 2);
  }
}

TEST_CASE("small-order probe costs exactly the subgroup check", "[adversary]") {
  auto ed59 = edwards59();
  auto script = parse_script("disclose_key\nprobe 1 0\nexpect server_rejects InvalidPoint 1\nexpect probe_without_ecpm\n");
  auto report = run_attack(script, &ed59);
  INFO(report.render());
  CHECK(report.checks[0].ok);
  CHECK_FALSE(report.checks[1].ok);
  CHECK(report.checks[1].detail == "1 probes, 1 ECPM");
}

TEST_CASE("script errors", "[adversary]") {
  CHECK_THROWS_AS(parse_script("bogus 1"), ScriptError);
  CHECK_THROWS_AS(parse_script("tamper 1 2"), ScriptError);
  CHECK_THROWS_AS(parse_script("tamper 0 2 0x01"), ScriptError);
  CHECK_THROWS_AS(parse_script("tamper 1 2 0x100"), ScriptError);
  CHECK_THROWS_AS(parse_script("expect server_rejects Nope"), ScriptError);
  CHECK_THROWS_AS(parse_script("expect server_rejects"), ScriptError);
  CHECK_THROWS_AS(parse_script("replay 1 to 1.2.3.4:5"), ScriptError);
  CHECK_THROWS_AS(parse_script("inject zz"), ScriptError);
  CHECK_THROWS_AS(builtin_script("nope"), ScriptError);
  try {
    parse_script("handshake\n\nadvance -1\n");
    FAIL("no throw");
  } catch (const ScriptError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  CHECK_THROWS_AS(run_attack(parse_script("replay 1")), ScriptError);
  CHECK_THROWS_AS(run_attack(parse_script("drop 9\nhandshake")), ScriptError);
  CHECK_THROWS_AS(run_attack(parse_script("handshake\ndrop 2")), ScriptError);
  CHECK_THROWS_AS(run_attack(parse_script("rebranch 2\nhandshake")), ScriptError);
  CHECK_THROWS_AS(run_attack(parse_script("probe infinity")), ScriptError);
  CHECK_THROWS_AS(run_attack(parse_script("tamper 1 500 0x01\nhandshake")), ScriptError);
  CHECK_THROWS_AS(run_attack(parse_script("disclose_key\nprobe x y")), ScriptError);
}

TEST_CASE("script round trip of expectations", "[adversary]") {
  auto s = parse_script("name t\nseed 0x10\nrotate on\nexpect server_rejects AuthFailure 2\nexpect key_not_on_wire\n");
  CHECK(s.name == "t");
  CHECK(s.seed == 16);
  CHECK(s.rotate);
  CHECK(format_expectation(s.expectations[0]) == "server_rejects AuthFailure 2");
  CHECK(format_expectation(s.expectations[1]) == "key_not_on_wire");
}

TEST_CASE("mutation sweep: no mutated transcript establishes", "[adversary][sweep]") {
  SweepOptions opts;
  opts.trials = 600;
  auto report = mutation_sweep(opts);
  INFO(report.render());
  CHECK(report.passed);
  CHECK(report.trials == 600);
  CHECK(report.server_established == 0);
  CHECK(report.unclassified == 0);
  CHECK(report.by_field.size() == 16);  // 6 Msg1 fields, 5 each for Msg2 and Msg3
}

TEST_CASE("mutation sweep identity control establishes every trial", "[adversary][sweep]") {
  SweepOptions opts;
  opts.trials = 60;
  opts.identity_control = true;
  auto report = mutation_sweep(opts);
  INFO(report.render());
  CHECK(report.passed);
  CHECK(report.server_established == 60);
}

TEST_CASE("client_id mutations only miss the keystore", "[adversary][sweep]") {
  SweepOptions opts;
  opts.trials = 200;
  opts.only_field = MutationField::client_id;
  auto report = mutation_sweep(opts);
  INFO(report.render());
  CHECK(report.passed);
  for (const auto& [key, n] : report.histogram) {
    CHECK((key == "Msg1 UnknownClient" || key == "Msg1 DigestMismatch"));
  }
}

TEST_CASE("mutation sweep is reproducible", "[adversary][sweep]") {
  SweepOptions opts;
  opts.trials = 90;
  opts.seed = 7;
  CHECK(mutation_sweep(opts).render() == mutation_sweep(opts).render());
  CHECK_THROWS_AS(mutation_sweep(SweepOptions{.trials = 1, .transcripts = 0}), std::invalid_argument);
  SweepOptions bad;
  bad.only_field = MutationField::client_id;
  bad.only_message = 2;
  CHECK_THROWS_AS(mutation_sweep(bad), std::invalid_argument);
}

TEST_CASE("Msg1 relabelled as Msg3 gets an empty ACK and the retransmission completes", "[adversary]") {
  auto report = run_attack(parse_script(
      "tamper 1 1 0x02\nhandshake\nexpect server_rejects MalformedMessage 1\nexpect established 1\n"));
  INFO(report.render());
  CHECK(report.passed);
  CHECK(report.client_log.front().find("after 2 CON") != std::string::npos);
}
