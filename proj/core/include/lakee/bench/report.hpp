#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "lakee/curve/profile.hpp"
#include "lakee/metrics.hpp"

namespace lakee::bench {

struct SizedField {
  std::string name;
  std::size_t bits;
};

struct MessageSize {
  std::string name;  // "Msg1" ...
  std::vector<SizedField> fields;
  std::size_t total_bits = 0;
};

/// Nominal message sizes. Framing (version, type, AEAD nonce) is not
/// counted; points count as point_bits.
struct SizeModel {
  std::size_t point_bits = 0;
  std::vector<MessageSize> messages;
  std::size_t total_bits = 0;
};

/// Throws std::invalid_argument when point_bits is 0.
SizeModel nominal_sizes(std::size_t point_bits);

struct HandshakeMeasurement {
  std::string profile;
  bool rotate = false;
  std::uint64_t seed = 0;
  metrics::OpCounters ops;  // both parties, one handshake
  std::uint64_t messages = 0;      // datagrams put on the link
  std::uint64_t wire_bytes = 0;    // CoAP datagrams
  std::uint64_t lakee_bytes = 0;   // handshake messages inside them
  std::chrono::duration<double, std::milli> wall{0};
  bool established = false;
  bool keys_match = false;
};

/// One honest handshake over the simulated link with fresh counters.
HandshakeMeasurement measure_handshake(const curve::CurveProfile& profile, bool rotate, std::uint64_t seed = 1);

struct ProtocolRow {
  std::string protocol;
  unsigned messages = 0;
  bool measured = false;  // false: quoted constant
};

struct Tables {
  std::vector<ProtocolRow> message_counts;
  SizeModel sizes;
  std::vector<HandshakeMeasurement> runs;
};

/// Message-count comparison (LAKEE from `runs.front()`), size model and
/// operation counts. Throws std::invalid_argument with no runs.
Tables report_tables(std::vector<HandshakeMeasurement> runs, std::size_t point_bits);

/// Wall time is printed only when asked, so the default text is stable
/// for a fixed seed.
std::string render_text(const Tables& tables, bool with_timing = false);
std::string render_json(const Tables& tables, bool with_timing = false);
std::string render_sizes_text(const SizeModel& model);
std::string render_sizes_json(const SizeModel& model);

}  // namespace lakee::bench
