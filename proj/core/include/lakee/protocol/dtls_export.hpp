#pragma once

#include <array>
#include <optional>
#include <string>

#include "lakee/crypto/suite.hpp"
#include "lakee/curve/profile.hpp"
#include "lakee/protocol/session.hpp"
#include "lakee/random.hpp"

namespace lakee::protocol {

inline constexpr const char* kDtlsCipherSuite = "TLS_PSK_WITH_AES_128_CCM_8";

struct DtlsCipherState {
  crypto::KeyBytes key{};
  std::array<std::uint8_t, 8> nonce{};
};

struct PeerCertificate {};

/// Parameters for resuming into a DTLS PSK session without its handshake.
/// read_state.key = kdf(secret.x) (the session key), write_state.key =
/// kdf(secret.y).
struct DtlsSessionExport {
  std::string cipher_suite;
  DtlsCipherState read_state;
  DtlsCipherState write_state;
  std::array<std::uint8_t, 4> client_iv{};
  std::array<std::uint8_t, 4> server_iv{};
  std::uint64_t sequence_number = 0;
  std::optional<PeerCertificate> peer_certificate;  // always empty
};

/// Throws std::invalid_argument if result.session_key was not derived from
/// this secret.
DtlsSessionExport export_dtls(const SessionResult& result, const curve::ECPoint& secret,
                              const curve::CurveProfile& curve, RandomSource& rng);

}  // namespace lakee::protocol
