#include "lakee/protocol/dtls_export.hpp"

#include <stdexcept>

#include "lakee/curve/group.hpp"

namespace lakee::protocol {

DtlsSessionExport export_dtls(const SessionResult& result, const curve::ECPoint& secret,
                              const curve::CurveProfile& curve, RandomSource& rng) {
  if (secret.is_infinity()) throw std::invalid_argument("shared secret is the identity");
  crypto::KeyBytes read_key = crypto::kdf(curve::encode_coordinate(secret.x(), curve));
  if (read_key != result.session_key.bytes()) throw std::invalid_argument("session key does not match secret");

  DtlsSessionExport out;
  out.cipher_suite = kDtlsCipherSuite;
  out.read_state.key = read_key;
  out.write_state.key = crypto::kdf(curve::encode_coordinate(secret.y(), curve));
  rng.fill(out.read_state.nonce);
  rng.fill(out.write_state.nonce);
  rng.fill(out.client_iv);
  rng.fill(out.server_iv);
  return out;
}

}  // namespace lakee::protocol
