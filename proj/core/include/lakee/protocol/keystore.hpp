#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "lakee/crypto/suite.hpp"
#include "lakee/protocol/messages.hpp"

namespace lakee::protocol {

/// Server-side map ClientId -> Y. Text format, one entry per line:
///
///   <client_id as 16 hex digits> <key as 32 hex digits>
///
/// Blank lines and '#' comments are ignored. When bound to a file, every
/// put() rewrites it atomically (temp file + rename).
class Keystore {
 public:
  Keystore() = default;
  Keystore(const Keystore&) = delete;
  Keystore& operator=(const Keystore&) = delete;

  /// Replaces the contents. Throws std::invalid_argument on a bad line.
  void parse(std::string_view text);
  /// Loads the file and binds it for write-back. Throws std::runtime_error.
  void load(const std::filesystem::path& path);
  void bind(const std::filesystem::path& path);

  std::optional<crypto::LongTermKey> find(ClientId id) const;
  void put(ClientId id, const crypto::LongTermKey& key);
  std::size_t size() const;

  std::string serialize() const;
  void save(const std::filesystem::path& path) const;

 private:
  void save_locked(const std::filesystem::path& path) const;

  mutable std::mutex mutex_;
  std::map<ClientId, crypto::LongTermKey> keys_;
  std::optional<std::filesystem::path> backing_;
};

}  // namespace lakee::protocol
