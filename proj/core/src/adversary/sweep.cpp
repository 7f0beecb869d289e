#include <sstream>

#include "lakee/adversary/attack.hpp"

namespace lakee::adversary {

using protocol::MessageType;
using transport::Datagram;
using transport::Direction;

std::string_view to_string(MutationField field) {
  switch (field) {
    case MutationField::version: return "version";
    case MutationField::type: return "type";
    case MutationField::client_id: return "client_id";
    case MutationField::nonce: return "nonce";
    case MutationField::ciphertext: return "ciphertext";
    case MutationField::tag: return "tag";
  }
  return "?";
}

namespace {

struct Span {
  std::size_t offset;
  std::size_t length;
};

Span field_span(MutationField field, unsigned message, std::size_t size) {
  const std::size_t body = message == 1 ? 2 + 8 : 2;  // first nonce byte
  switch (field) {
    case MutationField::version: return {0, 1};
    case MutationField::type: return {1, 1};
    case MutationField::client_id: return {2, 8};
    case MutationField::nonce: return {body, crypto::kNonceBytes};
    case MutationField::ciphertext: {
      const std::size_t start = body + crypto::kNonceBytes;
      return {start, size - crypto::kTagBytes - start};
    }
    case MutationField::tag: return {size - crypto::kTagBytes, crypto::kTagBytes};
  }
  return {0, 0};
}

std::vector<MutationField> fields_of(unsigned message) {
  std::vector<MutationField> out{MutationField::version, MutationField::type};
  if (message == 1) out.push_back(MutationField::client_id);
  out.insert(out.end(), {MutationField::nonce, MutationField::ciphertext, MutationField::tag});
  return out;
}

}  // namespace

SweepReport mutation_sweep(const SweepOptions& options) {
  if (options.transcripts == 0) throw std::invalid_argument("mutation sweep needs at least one transcript");
  if (options.only_message && (*options.only_message < 1 || *options.only_message > 3)) {
    throw std::invalid_argument("message must be 1, 2 or 3");
  }
  if (options.only_field == MutationField::client_id && options.only_message.value_or(1) != 1) {
    throw std::invalid_argument("only Msg1 has a client_id");
  }
  const auto& curve = options.profile ? *options.profile : curve::toy_profile();
  SeededRandom rng(options.seed, "sweep");

  SweepReport report;
  for (std::uint64_t trial = 0; trial < options.trials; ++trial) {
    const unsigned t = static_cast<unsigned>(trial % options.transcripts);
    unsigned message = options.only_message.value_or(0);
    if (options.only_field == MutationField::client_id) message = 1;
    if (message == 0) message = 1 + static_cast<unsigned>(rng.next_u64() % 3);
    MutationField field;
    if (options.only_field) {
      field = *options.only_field;
    } else {
      auto fields = fields_of(message);
      field = fields[rng.next_u64() % fields.size()];
    }
    std::uint8_t mask = 0;
    if (!options.identity_control) {
      while (mask == 0) mask = static_cast<std::uint8_t>(rng.next_u64());
    }
    const std::uint64_t pick = rng.next_u64();

    WorldOptions wo;
    wo.curve = &curve;
    wo.seed = options.seed + t;
    wo.rotate = t % 2 == 1;
    // One pass over the transcript: a retransmitted Msg1 would be the
    // honest bytes again.
    wo.retransmit.max_retransmits = 0;
    World world(wo);

    // Observed datagrams of an honest run: 1 Msg1 (CON), 2 Msg2 (ACK), 3 Msg3 (NON).
    unsigned seen = 0;
    world.net.set_tap([&](Datagram& d, Direction, unsigned) {
      if (++seen != message) return true;
      auto coap = transport::decode_coap(d.payload);
      auto span = field_span(field, message, coap.payload.size());
      coap.payload[span.offset + pick % span.length] ^= mask;
      d.payload = transport::encode_coap(coap);
      return true;
    });
    const auto& run = world.run_client();

    std::optional<protocol::TerminateReason> reason;
    bool established = false;
    for (const auto& e : world.events) {
      if (e.kind == transport::ResponderEvent::Kind::terminated) reason = e.reason;
      if (e.kind == transport::ResponderEvent::Kind::established) established = true;
    }
    if (message == 2) {
      if (auto* term = std::get_if<protocol::Terminated>(&run.outcome)) reason = term->reason;
    }

    ++report.trials;
    std::string key = "Msg" + std::to_string(message) + " ";
    if (established) {
      ++report.server_established;
      key += "established";
    } else if (reason) {
      key += protocol::to_string(*reason);
    } else {
      ++report.unclassified;
      key += "unclassified";
    }
    ++report.histogram[key];
    ++report.by_field["Msg" + std::to_string(message) + "." + std::string(to_string(field))];
  }

  report.passed = options.identity_control ? report.server_established == report.trials
                                           : report.server_established == 0 && report.unclassified == 0;
  return report;
}

std::string SweepReport::render() const {
  std::ostringstream out;
  out << "mutation sweep: " << trials << " trials, " << server_established << " server sessions, " << unclassified
      << " unclassified\n";
  out << "outcomes:\n";
  for (const auto& [k, n] : histogram) out << "  " << k << " " << n << "\n";
  out << "mutated fields:\n";
  for (const auto& [k, n] : by_field) out << "  " << k << " " << n << "\n";
  out << (passed ? "PASS" : "FAIL") << "\n";
  return out.str();
}

}  // namespace lakee::adversary
