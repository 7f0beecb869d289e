#include "lakee/bench/report.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lakee/adversary/world.hpp"
#include "lakee/protocol/messages.hpp"

namespace lakee::bench {

using protocol::MessageType;

SizeModel nominal_sizes(std::size_t point_bits) {
  if (point_bits == 0) throw std::invalid_argument("point_bits must be positive");
  SizeModel model;
  model.point_bits = point_bits;
  const std::pair<MessageType, const char*> kinds[] = {
      {MessageType::client_challenge, "Msg1"},
      {MessageType::server_response, "Msg2"},
      {MessageType::client_response, "Msg3"},
  };
  for (const auto& [type, name] : kinds) {
    MessageSize m;
    m.name = name;
    // The encoder's own field list, read in its nominal column.
    for (const auto& f : protocol::wire_layout(type, 1, point_bits)) {
      if (f.role == protocol::FieldRole::framing) continue;
      m.fields.push_back({f.name, f.nominal_bits});
      m.total_bits += f.nominal_bits;
    }
    model.total_bits += m.total_bits;
    model.messages.push_back(std::move(m));
  }
  return model;
}

HandshakeMeasurement measure_handshake(const curve::CurveProfile& profile, bool rotate, std::uint64_t seed) {
  adversary::WorldOptions options;
  options.curve = &profile;
  options.seed = seed;
  options.rotate = rotate;
  adversary::World world(options);

  HandshakeMeasurement m;
  m.profile = profile.name();
  m.rotate = rotate;
  m.seed = seed;
  world.net.set_tap([&m](transport::Datagram& d, transport::Direction, unsigned) {
    m.wire_bytes += d.payload.size();
    m.lakee_bytes += transport::decode_coap(d.payload).payload.size();
    return true;
  });

  metrics::reset();
  const auto start = std::chrono::steady_clock::now();
  const auto& run = world.run_client();
  m.wall = std::chrono::steady_clock::now() - start;
  m.ops = metrics::counters();
  m.messages = world.net.datagrams_sent();

  auto* client = std::get_if<protocol::ClientEstablished>(&run.outcome);
  for (const auto& e : world.events) {
    if (e.kind != transport::ResponderEvent::Kind::established) continue;
    m.established = client != nullptr;
    m.keys_match = client && client->result.session_key == e.session->result.session_key &&
                   client->result.rotated_key == e.session->result.rotated_key;
  }
  return m;
}

Tables report_tables(std::vector<HandshakeMeasurement> runs, std::size_t point_bits) {
  if (runs.empty()) throw std::invalid_argument("report_tables needs at least one measured run");
  Tables t;
  const unsigned lakee = static_cast<unsigned>(runs.front().messages);
  // Quoted from the literature; these protocols are not implemented here.
  t.message_counts = {
      {"LAKEE", lakee, true},
      {"ECC-CoAP", 4, false},
      {"LESS", 4, false},
      {"Dey-Hossain", 5, false},
      {"DTLS", 6, false},
  };
  t.sizes = nominal_sizes(point_bits);
  t.runs = std::move(runs);
  return t;
}

namespace {

nlohmann::json sizes_json(const SizeModel& model) {
  nlohmann::json j;
  j["point_bits"] = model.point_bits;
  j["total_bits"] = model.total_bits;
  for (const auto& m : model.messages) {
    nlohmann::json fields = nlohmann::json::array();
    for (const auto& f : m.fields) fields.push_back({{"name", f.name}, {"bits", f.bits}});
    j["messages"].push_back({{"name", m.name}, {"bits", m.total_bits}, {"fields", fields}});
  }
  return j;
}

}  // namespace

std::string render_sizes_text(const SizeModel& model) {
  std::ostringstream out;
  out << "nominal message sizes, point width " << model.point_bits << " bits\n";
  for (const auto& m : model.messages) {
    out << "  " << m.name << " " << std::setw(5) << m.total_bits << " bits =";
    for (std::size_t i = 0; i < m.fields.size(); ++i) {
      out << (i ? " + " : " ") << m.fields[i].bits << " " << m.fields[i].name;
    }
    out << "\n";
  }
  out << "  total " << model.total_bits << " bits\n";
  return out.str();
}

std::string render_sizes_json(const SizeModel& model) { return sizes_json(model).dump(2) + "\n"; }

std::string render_text(const Tables& t, bool with_timing) {
  std::ostringstream out;
  out << "messages per handshake\n";
  for (const auto& row : t.message_counts) {
    out << "  " << std::left << std::setw(12) << row.protocol << std::right << std::setw(2) << row.messages
        << (row.measured ? "  measured" : "  quoted") << "\n";
  }
  out << "\n" << render_sizes_text(t.sizes);
  out << "\noperations per handshake, both parties\n";
  out << "  profile rotate  ECPM subgrp  ECPA  seal  open  h(id)  h(kdf)  msgs  wire_B  lakee_B  keys\n";
  for (const auto& r : t.runs) {
    out << "  " << std::left << std::setw(7) << r.profile << std::right << std::setw(7) << (r.rotate ? "yes" : "no")
        << std::setw(6) << r.ops.ecpm << std::setw(7) << r.ops.subgroup_checks << std::setw(6) << r.ops.ecpa
        << std::setw(6) << r.ops.aead_seal << std::setw(6) << r.ops.aead_open << std::setw(7) << r.ops.hash_direct
        << std::setw(8) << r.ops.hash_kdf << std::setw(6) << r.messages << std::setw(8) << r.wire_bytes
        << std::setw(9) << r.lakee_bytes << "  " << (r.keys_match ? "match" : "MISMATCH") << "\n";
  }
  if (with_timing) {
    out << "\nwall time (this machine, not comparable to published figures)\n";
    for (const auto& r : t.runs) {
      out << "  " << r.profile << (r.rotate ? " rotate " : " ") << std::fixed << std::setprecision(3)
          << r.wall.count() << " ms\n";
    }
  }
  return out.str();
}

std::string render_json(const Tables& t, bool with_timing) {
  nlohmann::json j;
  for (const auto& row : t.message_counts) {
    j["message_counts"].push_back(
        {{"protocol", row.protocol}, {"messages", row.messages}, {"source", row.measured ? "measured" : "quoted"}});
  }
  j["sizes"] = sizes_json(t.sizes);
  for (const auto& r : t.runs) {
    nlohmann::json run = {
        {"profile", r.profile},
        {"rotate", r.rotate},
        {"seed", r.seed},
        {"ecpm", r.ops.ecpm},
        {"subgroup_checks", r.ops.subgroup_checks},
        {"ecpa", r.ops.ecpa},
        {"aead_seal", r.ops.aead_seal},
        {"aead_open", r.ops.aead_open},
        {"aead_ops", r.ops.aead_ops()},
        {"hash_direct", r.ops.hash_direct},
        {"hash_kdf", r.ops.hash_kdf},
        {"hash_ops", r.ops.hash_ops()},
        {"messages", r.messages},
        {"wire_bytes", r.wire_bytes},
        {"lakee_bytes", r.lakee_bytes},
        {"established", r.established},
        {"keys_match", r.keys_match},
    };
    if (with_timing) run["wall_ms"] = r.wall.count();
    j["runs"].push_back(run);
  }
  return j.dump(2) + "\n";
}

}  // namespace lakee::bench
