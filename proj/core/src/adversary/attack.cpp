#include "lakee/adversary/attack.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "lakee/metrics.hpp"

namespace lakee::adversary {

using protocol::MessageType;
using transport::CoapMessage;
using transport::CoapType;
using transport::Datagram;
using transport::Direction;
using transport::Millis;

namespace {

std::string hex_byte(std::uint8_t b) {
  static constexpr char digits[] = "0123456789abcdef";
  return {'0', 'x', digits[b >> 4], digits[b & 0xf]};
}

bool contains(ByteView haystack, ByteView needle) {
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

class Attacker {
 public:
  Attacker(World& world, const AttackScript& script)
      : w_(world), script_(script), rng_(script.seed, "attacker"), start_(world.net.clock().now()) {
    w_.net.set_tap([this](Datagram& d, Direction dir, unsigned) { return on_datagram(d, dir); });
    w_.responder.set_observer([this](const transport::ResponderEvent& e) {
      w_.events.push_back(e);
      server_log_.push_back(stamp() + " " + e.peer.to_string() + " " + describe(e));
    });
  }

  void run() {
    for (const auto& action : script_.actions) execute(action);
    if (!pending_.empty()) {
      const auto& [index, actions] = *pending_.begin();
      fail(*actions.front(), "datagram " + std::to_string(index) + " was never observed");
    }
  }

  AttackReport report() const;

 private:
  [[noreturn]] static void fail(const Action& a, const std::string& what) {
    throw ScriptError("script line " + std::to_string(a.line) + ": " + what);
  }

  std::string stamp() const { return "+" + std::to_string((w_.net.clock().now() - start_).count()) + "ms"; }

  void note(std::string text) { notes_.push_back({w_.net.trace().size(), stamp() + " attacker " + text}); }

  static std::string describe(const transport::ResponderEvent& e) {
    using Kind = transport::ResponderEvent::Kind;
    switch (e.kind) {
      case Kind::replied: return "replied";
      case Kind::replied_cached: return "replied (cached)";
      case Kind::silent_drop: return "silent drop";
      case Kind::terminated: return "terminated " + std::string(protocol::to_string(*e.reason));
      case Kind::established: return std::string("established") + (e.session->result.rotated_key ? ", Y rotated" : "");
      case Kind::ignored: return "ignored";
    }
    return "?";
  }

  const crypto::LongTermKey& insider_key(const Action& a) {
    if (!insider_) fail(a, "insider action without disclose_key");
    learn_key();
    return disclosed_keys_.back();
  }

  // The insider tracks Y across rotations.
  void learn_key() {
    auto y = *w_.keystore.find(w_.client_id);
    if (disclosed_keys_.empty() || !(disclosed_keys_.back() == y)) disclosed_keys_.push_back(y);
  }

  crypto::Nonce fresh_nonce() {
    crypto::Nonce n{};
    rng_.fill(n);
    return n;
  }

  Bytes wrap_con(Bytes payload) {
    CoapMessage m;
    m.type = CoapType::con;
    m.code = transport::code::post;
    m.message_id = static_cast<std::uint16_t>(rng_.next_u64());
    m.token.resize(4);
    rng_.fill(m.token);
    m.payload = std::move(payload);
    return transport::encode_coap(m);
  }

  void inject(Bytes wire, const Address& from) {
    w_.net.inject(Datagram{from, kServerAddress, std::move(wire)});
    w_.net.run_until_idle();
  }

  void execute(const Action& a) {
    switch (a.kind) {
      case ActionKind::handshake: {
        const auto& run = w_.run_client();
        client_log_.push_back(stamp() + " run " + std::to_string(w_.client_runs.size()) + ": " + describe(run));
        if (insider_) learn_key();
        break;
      }
      case ActionKind::drop:
      case ActionKind::intercept:
      case ActionKind::tamper:
      case ActionKind::delay:
      case ActionKind::forge:
      case ActionKind::rebranch:
        if (a.kind == ActionKind::rebranch) insider_key(a);
        if (a.index <= observed_.size()) fail(a, "datagram " + std::to_string(a.index) + " has already passed");
        pending_[a.index].push_back(&a);
        break;
      case ActionKind::replay: {
        if (a.index > observed_.size()) fail(a, "datagram " + std::to_string(a.index) + " not observed yet");
        Datagram d = observed_[a.index - 1];
        if (a.from) d.from = *a.from;
        note("replays #" + std::to_string(a.index) + " from " + d.from.to_string());
        w_.net.inject(std::move(d));
        w_.net.run_until_idle();
        break;
      }
      case ActionKind::inject: {
        const Address from = a.from.value_or(kAttackerAddress);
        note("injects " + std::to_string(a.raw.size()) + "B from " + from.to_string());
        inject(wrap_con(a.raw), from);
        break;
      }
      case ActionKind::junk_msg1: {
        const Address from = a.from.value_or(kAttackerAddress);
        note("sends " + std::to_string(a.count) + " junk Msg1 from " + from.to_string());
        for (unsigned i = 0; i < a.count; ++i) {
          protocol::ClientId id{rng_.next_u64()};
          if (id == w_.client_id) ++id.value;
          crypto::KeyBytes k{};
          rng_.fill(k);
          Bytes pt(protocol::plaintext_size(MessageType::client_challenge, w_.curve));
          rng_.fill(pt);
          protocol::HandshakeMsg1 m{id, crypto::aead_seal(crypto::LongTermKey(k), fresh_nonce(), pt)};
          inject(wrap_con(protocol::encode(m)), from);
        }
        break;
      }
      case ActionKind::advance:
        w_.net.advance(a.duration);
        note("waits " + std::to_string(a.duration.count() / 1000) + "s");
        break;
      case ActionKind::disclose_key:
        insider_ = true;
        learn_key();
        note("learns Y");
        break;
      case ActionKind::probe: {
        const auto& key = insider_key(a);
        const Address from = a.from.value_or(kAttackerAddress);
        Bytes wire;
        try {
          auto point = a.point ? curve::ECPoint(curve::Integer(a.point->first, 0), curve::Integer(a.point->second, 0))
                               : curve::ECPoint::infinity();
          protocol::Msg1Payload p{crypto::hash_client_id(w_.client_id.value), point, w_.net.clock().timestamp()};
          protocol::HandshakeMsg1 m{w_.client_id,
                                    crypto::aead_seal(key, fresh_nonce(), protocol::encode_payload(p, w_.curve))};
          wire = wrap_con(protocol::encode(m));
        } catch (const std::exception& e) {
          fail(a, std::string("bad probe point: ") + e.what());
        }
        note("probes with " + (a.point ? "(" + a.point->first + ", " + a.point->second + ")" : std::string("infinity")));
        const auto before = metrics::counters().ecpm;
        inject(std::move(wire), from);
        probe_ecpm_.push_back(metrics::counters().ecpm - before);
        break;
      }
    }
  }

  static std::string describe(const transport::ClientRun& run) {
    std::string out;
    if (auto* done = std::get_if<protocol::ClientEstablished>(&run.outcome)) {
      out = done->result.rotated_key ? "established, Y rotated" : "established";
    } else if (auto* t = std::get_if<protocol::Terminated>(&run.outcome)) {
      out = "rejected " + std::string(protocol::to_string(t->reason));
    } else if (std::holds_alternative<transport::ServerReset>(run.outcome)) {
      out = "reset by server";
    } else {
      out = "timed out";
    }
    return out + " after " + std::to_string(run.transmissions) + " CON";
  }

  template <typename F>
  void edit_message(const Action& a, Datagram& d, F&& edit) {
    CoapMessage m;
    try {
      m = transport::decode_coap(d.payload);
    } catch (const transport::MalformedCoap&) {
      fail(a, "datagram " + std::to_string(a.index) + " is not CoAP");
    }
    if (m.payload.empty()) fail(a, "datagram " + std::to_string(a.index) + " carries no handshake message");
    edit(m.payload);
    d.payload = transport::encode_coap(m);
  }

  void forge(const Action& a, Bytes& msg) {
    auto type = protocol::peek_type(msg);
    if (!type) fail(a, "cannot forge an unrecognised message");
    crypto::KeyBytes k{};
    rng_.fill(k);
    Bytes pt(protocol::plaintext_size(*type, w_.curve));
    rng_.fill(pt);
    auto env = crypto::aead_seal(crypto::LongTermKey(k), fresh_nonce(), pt);
    switch (*type) {
      case MessageType::client_challenge:
        msg = protocol::encode(protocol::HandshakeMsg1{protocol::decode_msg1(msg, w_.curve).client_id, env});
        break;
      case MessageType::server_response: msg = protocol::encode(protocol::HandshakeMsg2{env}); break;
      case MessageType::client_response: msg = protocol::encode(protocol::HandshakeMsg3{env}); break;
    }
  }

  void rebranch(const Action& a, Bytes& msg) {
    const auto& key = insider_key(a);
    const auto& g = w_.curve.generator();
    auto type = protocol::peek_type(msg);
    if (type == MessageType::server_response) {
      auto m = protocol::decode_msg2(msg, w_.curve);
      auto p = protocol::decode_msg2_payload(*crypto::aead_open(key, m.envelope), w_.curve);
      p.response = curve::point_add(p.response, g, w_.curve);
      m.envelope = crypto::aead_seal(key, fresh_nonce(), protocol::encode_payload(p, w_.curve));
      msg = protocol::encode(m);
    } else if (type == MessageType::client_response) {
      auto m = protocol::decode_msg3(msg, w_.curve);
      auto p = protocol::decode_msg3_payload(*crypto::aead_open(key, m.envelope), w_.curve);
      p.response = curve::point_add(p.response, g, w_.curve);
      m.envelope = crypto::aead_seal(key, fresh_nonce(), protocol::encode_payload(p, w_.curve));
      msg = protocol::encode(m);
    } else {
      fail(a, "rebranch needs a Msg2 or Msg3");
    }
  }

  bool on_datagram(Datagram& d, Direction dir) {
    observed_.push_back(d);
    const unsigned index = static_cast<unsigned>(observed_.size());
    auto it = pending_.find(index);
    if (it == pending_.end()) return true;
    const auto actions = std::move(it->second);
    pending_.erase(it);

    const std::string tag = "#" + std::to_string(index) + " " + std::string(transport::to_string(dir));
    for (const Action* a : actions) {
      switch (a->kind) {
        case ActionKind::tamper:
          edit_message(*a, d, [&](Bytes& msg) {
            const long size = static_cast<long>(msg.size());
            const long at = a->offset < 0 ? size + a->offset : a->offset;
            if (at < 0 || at >= size) fail(*a, "offset " + std::to_string(a->offset) + " outside the message");
            msg[static_cast<std::size_t>(at)] ^= a->mask;
          });
          note("tampers " + tag + " byte " + std::to_string(a->offset) + " ^ " + hex_byte(a->mask));
          break;
        case ActionKind::forge:
          edit_message(*a, d, [&](Bytes& msg) { forge(*a, msg); });
          note("forges " + tag);
          break;
        case ActionKind::rebranch:
          edit_message(*a, d, [&](Bytes& msg) { rebranch(*a, msg); });
          note("rebranches " + tag);
          break;
        default: break;
      }
    }
    for (const Action* a : actions) {
      if (a->kind == ActionKind::drop || a->kind == ActionKind::intercept) {
        note((a->kind == ActionKind::drop ? "drops " : "intercepts ") + tag);
        return false;
      }
    }
    for (const Action* a : actions) {
      if (a->kind == ActionKind::delay) {
        note("delays " + tag + " by " + std::to_string(a->duration.count()) + "ms");
        w_.net.inject(d, a->duration);
        return false;
      }
    }
    return true;
  }

  struct Note {
    std::size_t trace_position;
    std::string text;
  };

  World& w_;
  const AttackScript& script_;
  SeededRandom rng_;
  Millis start_;
  bool insider_ = false;
  std::vector<Datagram> observed_;
  std::map<unsigned, std::vector<const Action*>> pending_;
  std::vector<Note> notes_;
  std::vector<std::string> server_log_;
  std::vector<std::string> client_log_;
  std::vector<std::uint64_t> probe_ecpm_;
  std::vector<crypto::LongTermKey> disclosed_keys_;

  friend struct Evaluation;
};

struct Evaluation {
  const World& w;
  std::vector<protocol::ServerEstablished> server_sessions;
  std::vector<protocol::ClientEstablished> client_sessions;
  std::map<protocol::TerminateReason, unsigned> server_rejects;
  std::map<protocol::TerminateReason, unsigned> client_rejects;
  unsigned resets = 0;
  unsigned silent_drops = 0;

  explicit Evaluation(const World& world) : w(world) {
    using Kind = transport::ResponderEvent::Kind;
    for (const auto& e : w.events) {
      if (e.kind == Kind::established) server_sessions.push_back(*e.session);
      if (e.kind == Kind::terminated) ++server_rejects[*e.reason];
      if (e.kind == Kind::silent_drop) ++silent_drops;
    }
    for (const auto& run : w.client_runs) {
      if (auto* done = std::get_if<protocol::ClientEstablished>(&run.outcome)) client_sessions.push_back(*done);
      if (auto* t = std::get_if<protocol::Terminated>(&run.outcome)) ++client_rejects[t->reason];
      if (std::holds_alternative<transport::ServerReset>(run.outcome)) ++resets;
    }
  }

  static unsigned lookup(const std::map<protocol::TerminateReason, unsigned>& m, protocol::TerminateReason r) {
    auto it = m.find(r);
    return it == m.end() ? 0 : it->second;
  }
};

// Every session key an insider can build from public points alone.
std::set<crypto::KeyBytes> insider_candidates(const std::vector<Datagram>& observed,
                                              const std::vector<crypto::LongTermKey>& keys,
                                              const curve::CurveProfile& curve) {
  std::vector<curve::ECPoint> client_rands, server_rands, others;
  for (const auto& d : observed) {
    CoapMessage m;
    try {
      m = transport::decode_coap(d.payload);
    } catch (const transport::MalformedCoap&) {
      continue;
    }
    for (const auto& key : keys) {
      try {
        switch (protocol::peek_type(m.payload).value_or(MessageType{})) {
          case MessageType::client_challenge: {
            auto msg = protocol::decode_msg1(m.payload, curve);
            if (auto pt = crypto::aead_open(key, msg.envelope)) {
              client_rands.push_back(protocol::decode_msg1_payload(*pt, curve).client_rand);
            }
            break;
          }
          case MessageType::server_response: {
            auto msg = protocol::decode_msg2(m.payload, curve);
            if (auto pt = crypto::aead_open(key, msg.envelope)) {
              auto p = protocol::decode_msg2_payload(*pt, curve);
              server_rands.push_back(p.server_rand);
              others.push_back(p.response);
            }
            break;
          }
          case MessageType::client_response: {
            auto msg = protocol::decode_msg3(m.payload, curve);
            if (auto pt = crypto::aead_open(key, msg.envelope)) {
              others.push_back(protocol::decode_msg3_payload(*pt, curve).response);
            }
            break;
          }
        }
      } catch (const std::exception&) {
      }
    }
  }
  std::vector<curve::ECPoint> points = client_rands;
  points.insert(points.end(), server_rands.begin(), server_rands.end());
  points.insert(points.end(), others.begin(), others.end());
  for (const auto& c : client_rands) {
    for (const auto& s : server_rands) {
      try {
        points.push_back(curve::point_add(c, s, curve));
      } catch (const curve::CurveError&) {
      }
    }
  }
  std::set<crypto::KeyBytes> out;
  for (const auto& p : points) {
    if (p.is_infinity()) continue;
    out.insert(crypto::kdf(curve::encode_coordinate(p.x(), curve)));
    out.insert(crypto::kdf(curve::encode_coordinate(p.y(), curve)));
  }
  return out;
}

}  // namespace

AttackReport Attacker::report() const {
  AttackReport r;
  r.script = script_.name;
  r.profile = w_.curve.name();
  r.seed = script_.seed;

  std::size_t next_note = 0;
  const auto& trace = w_.net.trace();
  for (std::size_t i = 0; i <= trace.size(); ++i) {
    while (next_note < notes_.size() && notes_[next_note].trace_position == i) r.transcript.push_back(notes_[next_note++].text);
    if (i == trace.size()) break;
    const auto& t = trace[i];
    std::ostringstream line;
    line << "+" << (t.at - start_).count() << "ms " << transport::to_string(t.direction) << " ";
    line << (t.index ? "#" + std::to_string(t.index) : std::string("inj")) << " " << t.event << " " << t.bytes << "B";
    r.transcript.push_back(line.str());
  }
  r.server_log = server_log_;
  r.client_log = client_log_;

  const Evaluation ev(w_);
  r.server_established = ev.server_sessions.size();
  for (const auto& [reason, n] : ev.server_rejects) r.rejections[std::string(protocol::to_string(reason))] = n;

  const auto candidates =
      insider_ ? insider_candidates(observed_, disclosed_keys_, w_.curve) : std::set<crypto::KeyBytes>{};

  auto count_check = [&](const Expectation& e, std::uint64_t observed) {
    bool ok = e.count ? observed == *e.count : observed >= 1;
    return Check{format_expectation(e), ok, "observed " + std::to_string(observed)};
  };

  for (const auto& e : script_.expectations) {
    switch (e.kind) {
      case ExpectKind::server_rejects:
        r.checks.push_back(count_check(e, Evaluation::lookup(ev.server_rejects, *e.reason)));
        break;
      case ExpectKind::client_rejects:
        r.checks.push_back(count_check(e, Evaluation::lookup(ev.client_rejects, *e.reason)));
        break;
      case ExpectKind::client_reset: r.checks.push_back(count_check(e, ev.resets)); break;
      case ExpectKind::silent_drop: r.checks.push_back(count_check(e, ev.silent_drops)); break;
      case ExpectKind::established: r.checks.push_back(count_check(e, ev.server_sessions.size())); break;
      case ExpectKind::no_established:
        r.checks.push_back({format_expectation(e), ev.server_sessions.empty(),
                            "observed " + std::to_string(ev.server_sessions.size())});
        break;
      case ExpectKind::no_second_session: {
        std::set<crypto::KeyBytes> distinct;
        for (const auto& s : ev.server_sessions) distinct.insert(s.result.session_key.bytes());
        bool ok = ev.server_sessions.size() <= ev.client_sessions.size() && distinct.size() == ev.server_sessions.size();
        r.checks.push_back({format_expectation(e), ok,
                            std::to_string(ev.server_sessions.size()) + " server sessions for " +
                                std::to_string(ev.client_sessions.size()) + " client handshakes"});
        break;
      }
      case ExpectKind::key_not_on_wire: {
        bool ok = !ev.server_sessions.empty();
        for (const auto& s : ev.server_sessions) {
          std::vector<Bytes> secrets{Bytes(s.result.session_key.bytes().begin(), s.result.session_key.bytes().end()),
                                     curve::encode_coordinate(s.secret.x(), w_.curve),
                                     curve::encode_coordinate(s.secret.y(), w_.curve)};
          if (s.result.rotated_key) {
            secrets.emplace_back(s.result.rotated_key->bytes().begin(), s.result.rotated_key->bytes().end());
          }
          for (const auto& d : observed_) {
            for (const auto& secret : secrets) ok = ok && !contains(d.payload, secret);
          }
        }
        r.checks.push_back({format_expectation(e), ok,
                            "searched " + std::to_string(observed_.size()) + " datagrams"});
        break;
      }
      case ExpectKind::attacker_cannot_derive: {
        bool ok = insider_ && !ev.server_sessions.empty();
        for (const auto& s : ev.server_sessions) ok = ok && !candidates.count(s.result.session_key.bytes());
        r.checks.push_back({format_expectation(e), ok,
                            std::to_string(candidates.size()) + " candidate keys from public points"});
        break;
      }
      case ExpectKind::probe_without_ecpm: {
        bool ok = !probe_ecpm_.empty() && std::all_of(probe_ecpm_.begin(), probe_ecpm_.end(), [](auto n) { return n == 0; });
        std::uint64_t total = 0;
        for (auto n : probe_ecpm_) total += n;
        r.checks.push_back({format_expectation(e), ok,
                            std::to_string(probe_ecpm_.size()) + " probes, " + std::to_string(total) + " ECPM"});
        break;
      }
    }
  }

  // Whatever the script expects, no server session may belong to the attacker.
  std::set<crypto::KeyBytes> honest;
  for (const auto& c : ev.client_sessions) honest.insert(c.result.session_key.bytes());
  bool sound = true;
  for (const auto& s : ev.server_sessions) {
    sound = sound && honest.count(s.result.session_key.bytes());
  }
  r.checks.push_back({"every server session belongs to the honest client", sound,
                      std::to_string(ev.server_sessions.size()) + " server sessions"});

  r.passed = std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.ok; });
  return r;
}

std::string AttackReport::render() const {
  std::ostringstream out;
  out << "attack " << script << " profile " << profile << " seed " << seed << "\n";
  out << "transcript:\n";
  for (const auto& line : transcript) out << "  " << line << "\n";
  out << "server:\n";
  for (const auto& line : server_log) out << "  " << line << "\n";
  out << "client:\n";
  for (const auto& line : client_log) out << "  " << line << "\n";
  out << "checks:\n";
  for (const auto& c : checks) out << "  " << (c.ok ? "ok   " : "FAIL ") << c.what << " (" << c.detail << ")\n";
  out << "server sessions " << server_established << ", rejections";
  if (rejections.empty()) out << " none";
  for (const auto& [reason, n] : rejections) out << " " << reason << "=" << n;
  out << "\n" << (passed ? "PASS" : "FAIL") << "\n";
  return out.str();
}

AttackReport run_attack(const AttackScript& script, const curve::CurveProfile* profile_override) {
  const auto& curve = profile_override ? *profile_override : curve::builtin_profile(script.profile);
  WorldOptions options;
  options.curve = &curve;
  options.seed = script.seed;
  options.rotate = script.rotate;
  World world(options);
  Attacker attacker(world, script);
  attacker.run();
  return attacker.report();
}

AttackReport invalid_curve_probe(const curve::CurveProfile& profile, std::uint64_t seed) {
  // First (x, 1) with x >= 1 that is off the curve.
  curve::Integer x = 1;
  while (curve::is_on_curve(curve::ECPoint(x, 1), profile)) ++x;

  AttackScript script;
  script.name = "invalid_curve_probe";
  script.profile = profile.name();
  script.seed = seed;
  auto action = [](ActionKind kind) {
    Action a{};
    a.kind = kind;
    return a;
  };
  script.actions.push_back(action(ActionKind::disclose_key));
  Action off = action(ActionKind::probe);
  off.point = std::make_pair(x.get_str(), std::string("1"));
  script.actions.push_back(off);
  script.actions.push_back(action(ActionKind::probe));
  script.actions.push_back(action(ActionKind::handshake));
  script.expectations.push_back({ExpectKind::server_rejects, protocol::TerminateReason::invalid_point, 2u});
  script.expectations.push_back({ExpectKind::probe_without_ecpm, std::nullopt, std::nullopt});
  script.expectations.push_back({ExpectKind::established, std::nullopt, 1u});
  return run_attack(script, &profile);
}

}  // namespace lakee::adversary
