#include "lakee/protocol/keystore.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lakee::protocol {

namespace {

std::string client_id_hex(ClientId id) {
  Bytes raw;
  put_u64(raw, id.value);
  return to_hex(raw);
}

std::string serialize_map(const std::map<ClientId, crypto::LongTermKey>& keys) {
  std::ostringstream out;
  for (const auto& [id, key] : keys) out << client_id_hex(id) << ' ' << to_hex(key.bytes()) << '\n';
  return out.str();
}

}  // namespace

void Keystore::parse(std::string_view text) {
  std::map<ClientId, crypto::LongTermKey> parsed;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string id_hex, key_hex, extra;
    if (!(fields >> id_hex)) continue;
    if (!(fields >> key_hex) || (fields >> extra) || id_hex.size() != 16 || key_hex.size() != 32) {
      throw std::invalid_argument("keystore line " + std::to_string(lineno) + ": expected '<id16> <key32>'");
    }
    Bytes id_bytes = from_hex(id_hex);
    ClientId id{ByteReader(id_bytes).u64()};
    parsed.insert_or_assign(id, crypto::LongTermKey::from_bytes(from_hex(key_hex)));
  }
  std::lock_guard lock(mutex_);
  keys_ = std::move(parsed);
}

void Keystore::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open keystore: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  parse(buf.str());
  bind(path);
}

void Keystore::bind(const std::filesystem::path& path) {
  std::lock_guard lock(mutex_);
  backing_ = path;
}

std::optional<crypto::LongTermKey> Keystore::find(ClientId id) const {
  std::lock_guard lock(mutex_);
  auto it = keys_.find(id);
  if (it == keys_.end()) return std::nullopt;
  return it->second;
}

void Keystore::put(ClientId id, const crypto::LongTermKey& key) {
  std::lock_guard lock(mutex_);
  keys_.insert_or_assign(id, key);
  if (backing_) save_locked(*backing_);
}

std::size_t Keystore::size() const {
  std::lock_guard lock(mutex_);
  return keys_.size();
}

std::string Keystore::serialize() const {
  std::lock_guard lock(mutex_);
  return serialize_map(keys_);
}

void Keystore::save(const std::filesystem::path& path) const {
  std::lock_guard lock(mutex_);
  save_locked(path);
}

void Keystore::save_locked(const std::filesystem::path& path) const {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write keystore: " + tmp.string());
    out << serialize_map(keys_);
    out.flush();
    if (!out) throw std::runtime_error("short write to keystore: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace lakee::protocol
