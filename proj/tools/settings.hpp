#pragma once

// Option resolution for the lakee tool. Each key is looked up on the
// command line, then in LAKEE_<KEY> (dashes become underscores), then in
// the config file, then falls back to its default.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace lakee::cli {

class SettingsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Source { flag, env, config, fallback };

std::string_view to_string(Source source);

struct Settings {
  std::string profile = "toy";  // toy, ed448 or a profile file
  std::optional<std::uint64_t> seed;
  std::chrono::seconds delta_t{30};
  bool rotate = false;
  std::string keystore;
  std::string listen = "0.0.0.0:5683";
  std::size_t point_bits = 224;
  std::string format = "text";

  std::map<std::string, Source> sources;
};

inline constexpr const char* kSettingKeys[] = {"profile", "seed",   "delta-t", "rotate",
                                                "keystore", "listen", "point-bits", "format"};

/// "LAKEE_DELTA_T" for "delta-t".
std::string env_name(std::string_view key);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Process environment.
EnvLookup process_env();

/// INI-style `key = value` file. Underscores in keys are read as dashes.
/// Throws SettingsError if the file is unreadable.
std::map<std::string, std::string> load_config(const std::filesystem::path& path);

/// `flags` holds only the keys given on the command line. Throws
/// SettingsError naming the key and where its bad value came from.
Settings resolve_settings(const std::map<std::string, std::string>& flags,
                          const std::map<std::string, std::string>& config, const EnvLookup& env);

}  // namespace lakee::cli
