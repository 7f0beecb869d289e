#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lakee/adversary/script.hpp"
#include "lakee/adversary/world.hpp"

namespace lakee::adversary {

struct Check {
  std::string what;
  bool ok = false;
  std::string detail;
};

struct AttackReport {
  std::string script;
  std::string profile;
  std::uint64_t seed = 0;
  std::vector<std::string> transcript;  // network trace, virtual time
  std::vector<std::string> server_log;
  std::vector<std::string> client_log;
  std::vector<Check> checks;  // expectations, then the attacker-success invariant
  std::uint64_t server_established = 0;
  std::map<std::string, std::uint64_t> rejections;  // reason name -> count
  bool passed = false;

  /// Deterministic text rendering.
  std::string render() const;
};

/// Runs the script against a fresh world. `profile_override` replaces the
/// script's profile line. Throws ScriptError on bad datagram references.
AttackReport run_attack(const AttackScript& script, const curve::CurveProfile* profile_override = nullptr);

/// Insider probe: Msg1s carrying an off-curve point and the identity,
/// sealed under the real Y, plus an honest control Msg1. Passes when both
/// probes are rejected InvalidPoint with no scalar multiplication and the
/// control is answered.
AttackReport invalid_curve_probe(const curve::CurveProfile& profile, std::uint64_t seed = 1);

enum class MutationField { version, type, client_id, nonce, ciphertext, tag };

std::string_view to_string(MutationField field);

struct SweepOptions {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  const curve::CurveProfile* profile = nullptr;  // toy when null
  unsigned transcripts = 8;
  std::optional<MutationField> only_field;
  std::optional<unsigned> only_message;  // 1, 2 or 3
  bool identity_control = false;         // mask 0: no change
};

struct SweepReport {
  std::uint64_t trials = 0;
  std::uint64_t server_established = 0;
  std::uint64_t unclassified = 0;  // trials that ended without a named reason
  std::map<std::string, std::uint64_t> histogram;
  std::map<std::string, std::uint64_t> by_field;
  bool passed = false;

  std::string render() const;
};

/// Single-field mutations of recorded honest transcripts. Each trial
/// rebuilds the world from the transcript's seed, so the client emits the
/// recorded bytes again, and the chosen message is altered on the wire.
SweepReport mutation_sweep(const SweepOptions& options);

}  // namespace lakee::adversary
