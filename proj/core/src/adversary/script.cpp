#include "lakee/adversary/script.hpp"

#include <array>
#include <charconv>
#include <sstream>

namespace lakee::adversary {

namespace {

struct Builtin {
  std::string_view name;
  std::string_view text;
};

constexpr std::array<Builtin, 13> kBuiltins{{
    {"mitm", R"(name mitm
# Altering Msg1 in flight: one ciphertext bit, then the cleartext id.
tamper 1 21 0x01
handshake
tamper 3 9 0x01
handshake
expect server_rejects AuthFailure 1
expect server_rejects UnknownClient 1
expect client_reset
expect no_established
)"},
    {"tamper_msg2", R"(name tamper_msg2
tamper 2 13 0x01
handshake
expect client_rejects AuthFailure
expect no_established
)"},
    {"tamper_msg3", R"(name tamper_msg3
tamper 3 -1 0x80
handshake
expect server_rejects AuthFailure
expect no_established
)"},
    {"dos", R"(name dos
# Four junk session requests from one source, then a fifth.
junk_msg1 4 from 10.9.0.66:7000
junk_msg1 1 from 10.9.0.66:7000
expect server_rejects UnknownClient 3
expect silent_drop 2
# A client in another prefix is unaffected.
handshake
expect established 1
)"},
    {"dos_unblock", R"(name dos_unblock
# Three failures from the client's own /24 block it; retransmissions are
# dropped silently until the block expires.
junk_msg1 3 from 10.0.0.66:7000
handshake
expect silent_drop 5
advance 300
handshake
expect established 1
)"},
    {"replay", R"(name replay
handshake
advance 31
replay 1
expect established 1
expect server_rejects Stale
expect no_second_session
)"},
    {"replay_msg3", R"(name replay_msg3
handshake
replay 3
replay 1
replay 3
expect established 1
expect server_rejects NoSuchHandshake
expect server_rejects BadChallengeResponse
expect no_second_session
)"},
    {"impersonate_server", R"(name impersonate_server
forge 2
handshake
expect client_rejects AuthFailure
expect no_established
)"},
    {"impersonate_client", R"(name impersonate_client
forge 1
handshake
forge 5
handshake
expect server_rejects AuthFailure 2
expect no_established
)"},
    {"known_session_temporary", R"(name known_session_temporary
handshake
expect established 1
expect key_not_on_wire
)"},
    {"insider", R"(name insider
# The attacker holds Y and decrypts every message, but sees only public points.
# On the toy group the scalar can be found by exhaustive search.
profile ed448
disclose_key
handshake
expect established 1
expect attacker_cannot_derive
)"},
    {"invalid_curve", R"(name invalid_curve
disclose_key
probe 1 1 from 10.9.0.66:7000
probe infinity from 10.9.0.66:7000
expect server_rejects InvalidPoint 2
expect probe_without_ecpm
handshake
expect established 1
)"},
    {"cross_branch", R"(name cross_branch
# Insider flips the P/2P offset: first in Msg3, then in Msg2.
disclose_key
rebranch 3
handshake
rebranch 5
handshake
expect server_rejects BadChallengeResponse 2
expect no_established
)"},
}};

constexpr std::array<std::pair<ExpectKind, std::string_view>, 10> kExpectNames{{
    {ExpectKind::server_rejects, "server_rejects"},
    {ExpectKind::client_rejects, "client_rejects"},
    {ExpectKind::client_reset, "client_reset"},
    {ExpectKind::silent_drop, "silent_drop"},
    {ExpectKind::no_second_session, "no_second_session"},
    {ExpectKind::established, "established"},
    {ExpectKind::no_established, "no_established"},
    {ExpectKind::key_not_on_wire, "key_not_on_wire"},
    {ExpectKind::attacker_cannot_derive, "attacker_cannot_derive"},
    {ExpectKind::probe_without_ecpm, "probe_without_ecpm"},
}};

[[noreturn]] void error(unsigned line, const std::string& what) {
  throw ScriptError("script line " + std::to_string(line) + ": " + what);
}

long parse_long(unsigned line, const std::string& s) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used, 0);
    if (used != s.size()) error(line, "bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    error(line, "bad number '" + s + "'");
  }
}

unsigned parse_index(unsigned line, const std::string& s) {
  long v = parse_long(line, s);
  if (v < 1) error(line, "datagram index must be >= 1");
  return static_cast<unsigned>(v);
}

std::optional<Address> parse_from(unsigned line, std::vector<std::string>& words, std::size_t at) {
  if (words.size() == at) return std::nullopt;
  if (words.size() != at + 2 || words[at] != "from") error(line, "expected 'from <a.b.c.d:port>'");
  try {
    return Address::parse(words[at + 1]);
  } catch (const std::invalid_argument& e) {
    error(line, e.what());
  }
}

void arity(unsigned line, const std::vector<std::string>& words, std::size_t n) {
  if (words.size() != n) error(line, "'" + words[0] + "' takes " + std::to_string(n - 1) + " argument(s)");
}

}  // namespace

AttackScript parse_script(std::string_view text) {
  AttackScript script;
  std::istringstream in{std::string(text)};
  std::string raw;
  unsigned line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    std::vector<std::string> words;
    for (std::string w; fields >> w;) words.push_back(w);
    if (words.empty()) continue;
    const std::string& verb = words[0];

    if (verb == "name") {
      arity(line, words, 2);
      script.name = words[1];
    } else if (verb == "profile") {
      arity(line, words, 2);
      script.profile = words[1];
    } else if (verb == "seed") {
      arity(line, words, 2);
      script.seed = static_cast<std::uint64_t>(parse_long(line, words[1]));
    } else if (verb == "rotate") {
      arity(line, words, 2);
      if (words[1] != "on" && words[1] != "off") error(line, "rotate takes on|off");
      script.rotate = words[1] == "on";
    } else if (verb == "expect") {
      if (words.size() < 2) error(line, "expect needs a kind");
      Expectation e{ExpectKind::established, std::nullopt, std::nullopt, line};
      bool known = false;
      for (const auto& [kind, name] : kExpectNames) {
        if (name == words[1]) {
          e.kind = kind;
          known = true;
        }
      }
      if (!known) error(line, "unknown expectation '" + words[1] + "'");
      std::size_t next = 2;
      if (e.kind == ExpectKind::server_rejects || e.kind == ExpectKind::client_rejects) {
        if (words.size() < 3) error(line, words[1] + " needs a reason");
        e.reason = protocol::parse_terminate_reason(words[2]);
        if (!e.reason) error(line, "unknown reason '" + words[2] + "'");
        next = 3;
      }
      if (words.size() == next + 1) {
        long n = parse_long(line, words[next]);
        if (n < 0) error(line, "negative count");
        e.count = static_cast<unsigned>(n);
      } else if (words.size() > next + 1) {
        error(line, "too many arguments to expect");
      }
      script.expectations.push_back(e);
    } else {
      Action a{};
      a.line = line;
      if (verb == "handshake") {
        arity(line, words, 1);
        a.kind = ActionKind::handshake;
      } else if (verb == "drop" || verb == "intercept" || verb == "forge" || verb == "rebranch") {
        arity(line, words, 2);
        a.kind = verb == "drop"        ? ActionKind::drop
                 : verb == "intercept" ? ActionKind::intercept
                 : verb == "forge"     ? ActionKind::forge
                                       : ActionKind::rebranch;
        a.index = parse_index(line, words[1]);
      } else if (verb == "tamper") {
        arity(line, words, 4);
        a.kind = ActionKind::tamper;
        a.index = parse_index(line, words[1]);
        a.offset = parse_long(line, words[2]);
        long mask = parse_long(line, words[3]);
        if (mask < 0 || mask > 0xff) error(line, "mask must fit in a byte");
        a.mask = static_cast<std::uint8_t>(mask);
      } else if (verb == "delay") {
        arity(line, words, 3);
        a.kind = ActionKind::delay;
        a.index = parse_index(line, words[1]);
        long ms = parse_long(line, words[2]);
        if (ms < 0) error(line, "negative delay");
        a.duration = std::chrono::milliseconds(ms);
      } else if (verb == "replay") {
        if (words.size() < 2) error(line, "replay needs an index");
        a.kind = ActionKind::replay;
        a.index = parse_index(line, words[1]);
        a.from = parse_from(line, words, 2);
      } else if (verb == "inject") {
        if (words.size() < 2) error(line, "inject needs hex bytes");
        a.kind = ActionKind::inject;
        try {
          a.raw = from_hex(words[1]);
        } catch (const std::invalid_argument& e) {
          error(line, e.what());
        }
        a.from = parse_from(line, words, 2);
      } else if (verb == "junk_msg1") {
        if (words.size() < 2) error(line, "junk_msg1 needs a count");
        a.kind = ActionKind::junk_msg1;
        a.count = parse_index(line, words[1]);
        a.from = parse_from(line, words, 2);
      } else if (verb == "advance") {
        arity(line, words, 2);
        a.kind = ActionKind::advance;
        long s = parse_long(line, words[1]);
        if (s < 0) error(line, "cannot advance backwards");
        a.duration = std::chrono::seconds(s);
      } else if (verb == "disclose_key") {
        arity(line, words, 1);
        a.kind = ActionKind::disclose_key;
      } else if (verb == "probe") {
        a.kind = ActionKind::probe;
        if (words.size() >= 2 && words[1] == "infinity") {
          a.from = parse_from(line, words, 2);
        } else {
          if (words.size() < 3) error(line, "probe takes <x> <y> or infinity");
          a.point = std::make_pair(words[1], words[2]);
          a.from = parse_from(line, words, 3);
        }
      } else {
        error(line, "unknown directive '" + verb + "'");
      }
      script.actions.push_back(std::move(a));
    }
  }
  return script;
}

std::string format_expectation(const Expectation& e) {
  std::string out;
  for (const auto& [kind, name] : kExpectNames) {
    if (kind == e.kind) out = std::string(name);
  }
  if (e.reason) out += " " + std::string(protocol::to_string(*e.reason));
  if (e.count) out += " " + std::to_string(*e.count);
  return out;
}

const std::vector<std::string>& builtin_script_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& b : kBuiltins) out.emplace_back(b.name);
    return out;
  }();
  return names;
}

std::string_view builtin_script_text(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (b.name == name) return b.text;
  }
  throw ScriptError("no built-in script named '" + std::string(name) + "'");
}

AttackScript builtin_script(std::string_view name) { return parse_script(builtin_script_text(name)); }

}  // namespace lakee::adversary
