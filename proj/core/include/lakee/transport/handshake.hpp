#pragma once

#include <functional>
#include <mutex>
#include <optional>
#include <variant>
#include <vector>

#include "lakee/protocol/client.hpp"
#include "lakee/protocol/server.hpp"
#include "lakee/random.hpp"
#include "lakee/transport/channel.hpp"
#include "lakee/transport/coap.hpp"

namespace lakee::transport {

struct RetransmitPolicy {
  Millis initial_timeout{2000};
  double backoff_factor = 2.0;
  unsigned max_retransmits = 4;

  /// Throws std::invalid_argument unless timeout > 0 and factor > 1.
  void validate() const;
  /// Wait after the i-th transmission (0-based).
  Millis timeout_after(unsigned transmission) const;
};

struct HandshakeTimeout {};
struct ServerReset {};  // RST for our CON: the server terminated

using ClientOutcome = std::variant<protocol::ClientEstablished, protocol::Terminated, HandshakeTimeout, ServerReset>;

struct ClientRun {
  ClientOutcome outcome;
  unsigned transmissions = 0;    // CON sends, first one included
  std::vector<Millis> con_sent;  // clock reading at each CON send
  std::uint16_t message_id = 0;
};

/// Drives one client handshake: Msg1 as CON with retransmission until the
/// matching ACK, then Msg3 as NON. Returns as soon as Msg3 is sent.
ClientRun run_client_handshake(protocol::ClientSession& session, DatagramChannel& channel, RandomSource& rng,
                               const RetransmitPolicy& policy = {});

struct ResponderEvent {
  enum class Kind { replied, replied_cached, silent_drop, terminated, established, ignored };
  Kind kind;
  Address peer;
  std::optional<protocol::TerminateReason> reason;
  std::optional<protocol::ServerEstablished> session;
};

/// Server side: maps datagrams onto the session table. Thread-safe.
class HandshakeResponder {
 public:
  using Observer = std::function<void(const ResponderEvent&)>;

  HandshakeResponder(protocol::ServerSessionTable& table, const Clock& clock) : table_(table), clock_(clock) {}

  /// Reply datagram payload for `from`, if any.
  std::optional<Bytes> handle(ByteView datagram, const Address& from);

  /// Called for every processed datagram, outside any lock of ours.
  void set_observer(Observer observer) { observer_ = std::move(observer); }

 private:
  void notify(ResponderEvent event);

  protocol::ServerSessionTable& table_;
  const Clock& clock_;
  Observer observer_;
};

}  // namespace lakee::transport
