#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "lakee/transport/channel.hpp"
#include "lakee/transport/handshake.hpp"

namespace lakee::transport {

enum class Direction { client_to_server, server_to_client };

std::string_view to_string(Direction direction);

/// Per-direction link behaviour. Indices are 1-based and count datagrams
/// entering the link in that direction.
class LinkSchedule {
 public:
  LinkSchedule& drop(Direction dir, unsigned index);
  LinkSchedule& delay(Direction dir, unsigned index, Millis extra);
  LinkSchedule& delay_all(Direction dir, Millis extra);
  LinkSchedule& duplicate(Direction dir, unsigned index);
  /// Hold datagram `index` back until the next one in the same direction
  /// has been sent, then deliver it right after that one.
  LinkSchedule& reorder(Direction dir, unsigned index);
  /// Independent random loss in both directions.
  LinkSchedule& loss(double probability, std::uint64_t seed);

  struct Verdict {
    bool drop = false;
    bool hold = false;
    Millis extra_delay{0};
    unsigned copies = 1;
  };
  Verdict decide(Direction dir, unsigned index);

 private:
  struct Rule {
    bool drop = false;
    bool hold = false;
    Millis delay{0};
    unsigned copies = 1;
  };
  std::map<std::pair<Direction, unsigned>, Rule> rules_;
  std::map<Direction, Millis> delay_all_;
  double loss_ = 0.0;
  std::mt19937_64 loss_rng_;
};

struct TraceEntry {
  Millis at;
  Direction direction;
  unsigned index;  // per-direction send index; 0 for injected datagrams
  std::string event;  // "sent", "dropped", "delivered", "injected", "swallowed"
  std::size_t bytes;
};

/// Deterministic in-process network. One designated server address
/// defines the direction of every datagram. Time only moves when events
/// are pumped.
class SimNetwork {
 public:
  using Handler = std::function<void(const Datagram&)>;
  /// Sees each sent datagram before the link schedule; may rewrite it.
  /// Returning false swallows it.
  using Tap = std::function<bool(Datagram&, Direction, unsigned index)>;

  explicit SimNetwork(Address server, Millis start = Millis(1'700'000'000'000), Millis latency = Millis(5));

  const VirtualClock& clock() const { return clock_; }
  const Address& server_address() const { return server_; }
  Direction direction_of(const Datagram& d) const;

  void attach(const Address& address, Handler handler);
  /// Active endpoint bound to `local`, talking to the server.
  std::unique_ptr<DatagramChannel> connect(const Address& local);

  void send(Datagram datagram);
  /// Attacker traffic: skips the tap and the schedule.
  void inject(Datagram datagram, Millis delay = Millis(0));

  void set_tap(Tap tap) { tap_ = std::move(tap); }
  LinkSchedule& schedule() { return schedule_; }

  /// Delivers the next event. False when the queue is empty.
  bool step();
  std::optional<Millis> next_event_time() const;
  /// Delivers everything due up to `t`, then moves the clock to `t`.
  void run_until(Millis t);
  void advance(Millis d) { run_until(clock_.now() + d); }
  void run_until_idle();

  std::uint64_t datagrams_sent() const { return sent_; }
  std::uint64_t datagrams_delivered() const { return delivered_; }
  std::uint64_t sent_in(Direction dir) const;
  const std::vector<TraceEntry>& trace() const { return trace_; }

  std::deque<Bytes>& inbox(const Address& address) { return inboxes_[address]; }

 private:
  struct Event {
    Millis at;
    std::uint64_t seq;
    Datagram datagram;
    Direction direction;
    unsigned index;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };

  void enqueue(Datagram datagram, Millis at, Direction dir, unsigned index);

  Address server_;
  VirtualClock clock_;
  Millis latency_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
  std::map<Address, Handler> handlers_;
  std::map<Address, std::deque<Bytes>> inboxes_;
  std::map<Direction, unsigned> counters_;
  std::map<Direction, std::optional<std::pair<Datagram, unsigned>>> held_;
  Tap tap_;
  LinkSchedule schedule_;
  std::uint64_t sent_ = 0;
  std::uint64_t delivered_ = 0;
  std::vector<TraceEntry> trace_;
};

/// Wires a responder to the network at `address`.
void attach_responder(SimNetwork& network, const Address& address, HandshakeResponder& responder);

}  // namespace lakee::transport
