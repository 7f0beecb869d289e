#include "settings.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include <CLI11.hpp>

namespace lakee::cli {

std::string_view to_string(Source source) {
  switch (source) {
    case Source::flag: return "flag";
    case Source::env: return "env";
    case Source::config: return "config";
    case Source::fallback: return "default";
  }
  return "?";
}

std::string env_name(std::string_view key) {
  std::string out = "LAKEE_";
  for (char c : key) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
}

std::map<std::string, std::string> load_config(const std::filesystem::path& path) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(path.string());
  } catch (const CLI::Error& e) {
    throw SettingsError("config file " + path.string() + ": " + e.what());
  }
  std::map<std::string, std::string> out;
  for (const auto& item : items) {
    if (item.inputs.empty()) continue;
    std::string key = item.name;
    std::replace(key.begin(), key.end(), '_', '-');
    out[key] = item.inputs.front();
  }
  return out;
}

namespace {

struct Lookup {
  const std::map<std::string, std::string>& flags;
  const std::map<std::string, std::string>& config;
  const EnvLookup& env;
  Settings& settings;

  std::optional<std::string> operator()(const std::string& key) {
    if (auto it = flags.find(key); it != flags.end()) {
      settings.sources[key] = Source::flag;
      return it->second;
    }
    if (auto v = env(env_name(key))) {
      settings.sources[key] = Source::env;
      return v;
    }
    if (auto it = config.find(key); it != config.end()) {
      settings.sources[key] = Source::config;
      return it->second;
    }
    settings.sources[key] = Source::fallback;
    return std::nullopt;
  }

  [[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) {
    throw SettingsError("bad value '" + value + "' for " + key + " (from " +
                        std::string(to_string(settings.sources[key])) + "): " + why);
  }

  std::uint64_t number(const std::string& key, const std::string& value) {
    try {
      std::size_t used = 0;
      if (!value.empty() && value[0] == '-') bad(key, value, "negative");
      auto n = std::stoull(value, &used, 0);
      if (used != value.size()) bad(key, value, "not a number");
      return n;
    } catch (const std::logic_error&) {
      bad(key, value, "not a number");
    }
  }

  bool boolean(const std::string& key, std::string value) {
    std::transform(value.begin(), value.end(), value.begin(), [](unsigned char c) { return std::tolower(c); });
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    bad(key, value, "expected true or false");
  }
};

}  // namespace

Settings resolve_settings(const std::map<std::string, std::string>& flags,
                          const std::map<std::string, std::string>& config, const EnvLookup& env) {
  Settings s;
  Lookup get{flags, config, env, s};

  if (auto v = get("profile")) {
    if (v->empty()) get.bad("profile", *v, "empty");
    s.profile = *v;
  }
  if (auto v = get("seed")) s.seed = get.number("seed", *v);
  if (auto v = get("delta-t")) {
    auto n = get.number("delta-t", *v);
    if (n == 0) get.bad("delta-t", *v, "must be positive");
    s.delta_t = std::chrono::seconds(n);
  }
  if (auto v = get("rotate")) s.rotate = get.boolean("rotate", *v);
  if (auto v = get("keystore")) s.keystore = *v;
  if (auto v = get("listen")) s.listen = *v;
  if (auto v = get("point-bits")) {
    auto n = get.number("point-bits", *v);
    if (n == 0) get.bad("point-bits", *v, "must be positive");
    s.point_bits = n;
  }
  if (auto v = get("format")) {
    if (*v != "text" && *v != "json") get.bad("format", *v, "expected text or json");
    s.format = *v;
  }
  return s;
}

}  // namespace lakee::cli
