#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "settings.hpp"

using namespace lakee::cli;

namespace {

EnvLookup env_of(std::map<std::string, std::string> vars) {
  return [vars](const std::string& name) -> std::optional<std::string> {
    auto it = vars.find(name);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

}  // namespace

TEST_CASE("defaults", "[settings]") {
  auto s = resolve_settings({}, {}, env_of({}));
  CHECK(s.profile == "toy");
  CHECK_FALSE(s.seed);
  CHECK(s.delta_t == std::chrono::seconds(30));
  CHECK_FALSE(s.rotate);
  CHECK(s.point_bits == 224);
  CHECK(s.format == "text");
  CHECK(s.sources.at("seed") == Source::fallback);
}

TEST_CASE("flags beat env beats config", "[settings]") {
  std::map<std::string, std::string> config{{"seed", "1"}, {"profile", "ed448"}, {"delta-t", "10"}, {"rotate", "yes"}};
  auto env = env_of({{"LAKEE_SEED", "2"}, {"LAKEE_DELTA_T", "20"}});
  auto s = resolve_settings({{"seed", "3"}}, config, env);
  CHECK(*s.seed == 3);
  CHECK(s.sources.at("seed") == Source::flag);
  CHECK(s.delta_t == std::chrono::seconds(20));
  CHECK(s.sources.at("delta-t") == Source::env);
  CHECK(s.profile == "ed448");
  CHECK(s.sources.at("profile") == Source::config);
  CHECK(s.rotate);
}

TEST_CASE("env names", "[settings]") {
  CHECK(env_name("delta-t") == "LAKEE_DELTA_T");
  CHECK(env_name("point-bits") == "LAKEE_POINT_BITS");
}

TEST_CASE("bad values name their source", "[settings]") {
  CHECK_THROWS_AS(resolve_settings({{"delta-t", "0"}}, {}, env_of({})), SettingsError);
  CHECK_THROWS_AS(resolve_settings({{"seed", "-4"}}, {}, env_of({})), SettingsError);
  CHECK_THROWS_AS(resolve_settings({{"format", "xml"}}, {}, env_of({})), SettingsError);
  CHECK_THROWS_AS(resolve_settings({}, {{"rotate", "maybe"}}, env_of({})), SettingsError);
  try {
    resolve_settings({}, {}, env_of({{"LAKEE_POINT_BITS", "12x"}}));
    FAIL("no throw");
  } catch (const SettingsError& e) {
    CHECK(std::string(e.what()).find("from env") != std::string::npos);
  }
  CHECK(*resolve_settings({{"seed", "0x10"}}, {}, env_of({})).seed == 16);
}

TEST_CASE("config file", "[settings]") {
  auto path = std::filesystem::temp_directory_path() / "lakee_settings_test.ini";
  {
    std::ofstream out(path);
    out << "# defaults\nprofile = ed448\npoint_bits = 128\n";
  }
  auto config = load_config(path);
  CHECK(config.at("profile") == "ed448");
  CHECK(config.at("point-bits") == "128");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config(path), SettingsError);
}
