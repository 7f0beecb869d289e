#pragma once

// Attack scripts, one directive per line ('#' starts a comment):
//
//   name <word>                 profile toy|ed448     seed <n>
//   rotate on|off
//   handshake                   run one honest client handshake
//   drop <i> | intercept <i>    swallow observed datagram i
//   tamper <i> <offset> <mask>  xor a byte of datagram i's handshake message
//                               (negative offsets count from the end)
//   delay <i> <ms>              hold datagram i back
//   forge <i>                   replace datagram i with a same-shape message
//                               sealed under a key the attacker guessed
//   replay <i> [from <addr>]    re-send observed datagram i now
//   inject <hex> [from <addr>]  send a raw handshake message as CON
//   junk_msg1 <n> [from <addr>] n well-formed Msg1s for an unknown client
//   advance <seconds>
//   disclose_key                insider mode: the attacker learns Y
//   probe <x> <y> | probe infinity [from <addr>]
//                               insider: Msg1 carrying an arbitrary point
//   rebranch <i>                insider: switch the P/2P offset in Msg2/Msg3
//   expect <what> [arg]
//
// Datagram indices count every datagram the attacker has observed, from 1.
// Actions that touch a datagram must appear before the handshake that
// produces it.

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lakee/address.hpp"
#include "lakee/bytes.hpp"
#include "lakee/protocol/session.hpp"

namespace lakee::adversary {

class ScriptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ActionKind {
  handshake,
  drop,
  intercept,
  tamper,
  delay,
  forge,
  replay,
  inject,
  junk_msg1,
  advance,
  disclose_key,
  probe,
  rebranch,
};

struct Action {
  ActionKind kind;
  unsigned index = 0;  // observed datagram, 1-based
  long offset = 0;
  std::uint8_t mask = 0;
  std::chrono::milliseconds duration{0};
  unsigned count = 0;
  Bytes raw;
  std::optional<Address> from;
  std::optional<std::pair<std::string, std::string>> point;  // probe coordinates; nullopt = infinity
  unsigned line = 0;
};

enum class ExpectKind {
  server_rejects,
  client_rejects,
  client_reset,
  silent_drop,
  no_second_session,
  established,
  no_established,
  key_not_on_wire,
  attacker_cannot_derive,
  probe_without_ecpm,
};

struct Expectation {
  ExpectKind kind;
  std::optional<protocol::TerminateReason> reason;
  std::optional<unsigned> count;
  unsigned line = 0;
};

struct AttackScript {
  std::string name = "unnamed";
  std::string profile = "toy";
  std::uint64_t seed = 1;
  bool rotate = false;
  std::vector<Action> actions;
  std::vector<Expectation> expectations;
};

/// Throws ScriptError with the line number.
AttackScript parse_script(std::string_view text);
std::string format_expectation(const Expectation& e);

const std::vector<std::string>& builtin_script_names();
/// Throws ScriptError for an unknown name.
AttackScript builtin_script(std::string_view name);
std::string_view builtin_script_text(std::string_view name);

}  // namespace lakee::adversary
