#pragma once

#include <chrono>
#include <optional>

#include "lakee/address.hpp"
#include "lakee/bytes.hpp"
#include "lakee/protocol/messages.hpp"

namespace lakee::transport {

using Millis = std::chrono::milliseconds;

class Clock {
 public:
  virtual ~Clock() = default;
  /// Milliseconds since the Unix epoch.
  virtual Millis now() const = 0;

  protocol::Timestamp timestamp() const {
    return protocol::Timestamp{static_cast<std::uint32_t>(now().count() / 1000)};
  }
};

class SystemClock final : public Clock {
 public:
  Millis now() const override;
};

/// Manually advanced clock for the simulator.
class VirtualClock final : public Clock {
 public:
  explicit VirtualClock(Millis start) : now_(start) {}
  Millis now() const override { return now_; }
  /// Never moves backwards.
  void advance_to(Millis t) {
    if (t > now_) now_ = t;
  }

 private:
  Millis now_;
};

struct Datagram {
  Address from;
  Address to;
  Bytes payload;
};

/// Client side of a connected datagram link.
class DatagramChannel {
 public:
  virtual ~DatagramChannel() = default;
  virtual void send(ByteView payload) = 0;
  /// Next datagram from the peer, or nullopt once `timeout` has elapsed.
  virtual std::optional<Bytes> receive(Millis timeout) = 0;
  virtual const Clock& clock() const = 0;
};

}  // namespace lakee::transport
