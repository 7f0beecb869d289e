#include "lakee/transport/sim.hpp"

#include <stdexcept>

namespace lakee::transport {

std::string_view to_string(Direction direction) {
  return direction == Direction::client_to_server ? "c->s" : "s->c";
}

LinkSchedule& LinkSchedule::drop(Direction dir, unsigned index) {
  rules_[{dir, index}].drop = true;
  return *this;
}

LinkSchedule& LinkSchedule::delay(Direction dir, unsigned index, Millis extra) {
  rules_[{dir, index}].delay += extra;
  return *this;
}

LinkSchedule& LinkSchedule::delay_all(Direction dir, Millis extra) {
  delay_all_[dir] = extra;
  return *this;
}

LinkSchedule& LinkSchedule::duplicate(Direction dir, unsigned index) {
  ++rules_[{dir, index}].copies;
  return *this;
}

LinkSchedule& LinkSchedule::reorder(Direction dir, unsigned index) {
  rules_[{dir, index}].hold = true;
  return *this;
}

LinkSchedule& LinkSchedule::loss(double probability, std::uint64_t seed) {
  if (probability < 0.0 || probability > 1.0) throw std::invalid_argument("loss probability outside [0, 1]");
  loss_ = probability;
  loss_rng_.seed(seed);
  return *this;
}

LinkSchedule::Verdict LinkSchedule::decide(Direction dir, unsigned index) {
  Verdict v;
  if (auto it = delay_all_.find(dir); it != delay_all_.end()) v.extra_delay = it->second;
  if (auto it = rules_.find({dir, index}); it != rules_.end()) {
    v.drop = it->second.drop;
    v.hold = it->second.hold;
    v.extra_delay += it->second.delay;
    v.copies = it->second.copies;
  }
  if (loss_ > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(loss_rng_) < loss_) v.drop = true;
  return v;
}

namespace {

class SimChannel final : public DatagramChannel {
 public:
  SimChannel(SimNetwork& net, Address local) : net_(net), local_(local) {}

  void send(ByteView payload) override {
    net_.send(Datagram{local_, net_.server_address(), Bytes(payload.begin(), payload.end())});
  }

  std::optional<Bytes> receive(Millis timeout) override {
    const Millis deadline = net_.clock().now() + timeout;
    auto& inbox = net_.inbox(local_);
    while (true) {
      if (!inbox.empty()) {
        Bytes out = std::move(inbox.front());
        inbox.pop_front();
        return out;
      }
      auto next = net_.next_event_time();
      if (!next || *next > deadline) {
        net_.run_until(deadline);
        return std::nullopt;
      }
      net_.step();
    }
  }

  const Clock& clock() const override { return net_.clock(); }

 private:
  SimNetwork& net_;
  Address local_;
};

}  // namespace

SimNetwork::SimNetwork(Address server, Millis start, Millis latency)
    : server_(server), clock_(start), latency_(latency) {}

Direction SimNetwork::direction_of(const Datagram& d) const {
  return d.to == server_ ? Direction::client_to_server : Direction::server_to_client;
}

void SimNetwork::attach(const Address& address, Handler handler) { handlers_[address] = std::move(handler); }

std::unique_ptr<DatagramChannel> SimNetwork::connect(const Address& local) {
  inboxes_[local];
  return std::make_unique<SimChannel>(*this, local);
}

std::uint64_t SimNetwork::sent_in(Direction dir) const {
  auto it = counters_.find(dir);
  return it == counters_.end() ? 0 : it->second;
}

void SimNetwork::enqueue(Datagram datagram, Millis at, Direction dir, unsigned index) {
  queue_.push(Event{at, seq_++, std::move(datagram), dir, index});
}

void SimNetwork::send(Datagram datagram) {
  const Direction dir = direction_of(datagram);
  const unsigned index = ++counters_[dir];
  ++sent_;
  trace_.push_back({clock_.now(), dir, index, "sent", datagram.payload.size()});

  if (tap_ && !tap_(datagram, dir, index)) {
    trace_.push_back({clock_.now(), dir, index, "swallowed", datagram.payload.size()});
    return;
  }
  auto verdict = schedule_.decide(dir, index);
  if (verdict.drop) {
    trace_.push_back({clock_.now(), dir, index, "dropped", datagram.payload.size()});
    return;
  }
  if (verdict.hold) {
    held_[dir] = std::make_pair(std::move(datagram), index);
    return;
  }
  const Millis at = clock_.now() + latency_ + verdict.extra_delay;
  for (unsigned copy = 0; copy < verdict.copies; ++copy) enqueue(datagram, at, dir, index);
  if (auto& held = held_[dir]) {
    enqueue(std::move(held->first), at, dir, held->second);
    held.reset();
  }
}

void SimNetwork::inject(Datagram datagram, Millis delay) {
  const Direction dir = direction_of(datagram);
  trace_.push_back({clock_.now(), dir, 0, "injected", datagram.payload.size()});
  enqueue(std::move(datagram), clock_.now() + delay, dir, 0);
}

std::optional<Millis> SimNetwork::next_event_time() const {
  if (queue_.empty()) return std::nullopt;
  return queue_.top().at;
}

bool SimNetwork::step() {
  if (queue_.empty()) return false;
  Event event = queue_.top();
  queue_.pop();
  clock_.advance_to(event.at);
  ++delivered_;
  trace_.push_back({clock_.now(), event.direction, event.index, "delivered", event.datagram.payload.size()});
  if (auto it = handlers_.find(event.datagram.to); it != handlers_.end()) {
    it->second(event.datagram);
  } else if (auto inbox = inboxes_.find(event.datagram.to); inbox != inboxes_.end()) {
    inbox->second.push_back(std::move(event.datagram.payload));
  }
  return true;
}

void SimNetwork::run_until(Millis t) {
  while (!queue_.empty() && queue_.top().at <= t) step();
  clock_.advance_to(t);
}

void SimNetwork::run_until_idle() {
  while (step()) {
  }
}

void attach_responder(SimNetwork& network, const Address& address, HandshakeResponder& responder) {
  network.attach(address, [&network, &responder, address](const Datagram& d) {
    if (auto reply = responder.handle(d.payload, d.from)) {
      network.send(Datagram{address, d.from, std::move(*reply)});
    }
  });
}

}  // namespace lakee::transport
