#include "lakee/curve/group.hpp"

#include <algorithm>

#include "arith.hpp"
#include "lakee/metrics.hpp"

namespace lakee::curve {

const Integer& ECPoint::x() const {
  if (infinity_) throw std::logic_error("identity has no affine x");
  return x_;
}

const Integer& ECPoint::y() const {
  if (infinity_) throw std::logic_error("identity has no affine y");
  return y_;
}

bool operator==(const ECPoint& lhs, const ECPoint& rhs) {
  if (lhs.infinity_ || rhs.infinity_) return lhs.infinity_ == rhs.infinity_;
  return lhs.x_ == rhs.x_ && lhs.y_ == rhs.y_;
}

std::string to_string(const ECPoint& point) {
  if (point.is_infinity()) return "O";
  return "(" + point.x().get_str() + ", " + point.y().get_str() + ")";
}

std::string_view to_string(PointRejection reason) {
  switch (reason) {
    case PointRejection::infinity_point: return "InfinityPoint";
    case PointRejection::off_curve: return "OffCurve";
    case PointRejection::small_subgroup: return "SmallSubgroup";
  }
  return "unknown";
}

Scalar Scalar::from_integer(Integer k, const CurveProfile& curve) {
  if (k <= 0 || k >= curve.order()) throw CurveError(CurveError::Code::invalid_scalar, "scalar outside [1, n-1]");
  return Scalar(std::move(k));
}

Scalar Scalar::random(RandomSource& rng, const CurveProfile& curve) {
  const Integer& n = curve.order();
  std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  Bytes buf((bits + 7) / 8);
  unsigned excess = static_cast<unsigned>(buf.size() * 8 - bits);
  Integer k;
  for (;;) {
    rng.fill(buf);
    buf[0] &= static_cast<std::uint8_t>(0xff >> excess);
    mpz_import(k.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
    if (k > 0 && k < n) break;
  }
  std::fill(buf.begin(), buf.end(), 0);
  return Scalar(std::move(k));
}

bool is_on_curve(const ECPoint& point, const CurveProfile& curve) {
  return point.is_infinity() || detail::on_curve_equation(point.x(), point.y(), curve);
}

namespace {
void require_on_curve(const ECPoint& point, const CurveProfile& curve) {
  if (!is_on_curve(point, curve)) throw CurveError(CurveError::Code::invalid_point, "point is not on the curve");
}

void require_scalar_range(const Scalar& k, const CurveProfile& curve) {
  if (k.value() <= 0 || k.value() >= curve.order()) {
    throw CurveError(CurveError::Code::invalid_scalar, "scalar outside [1, n-1]");
  }
}
}  // namespace

ECPoint point_add(const ECPoint& lhs, const ECPoint& rhs, const CurveProfile& curve) {
  require_on_curve(lhs, curve);
  require_on_curve(rhs, curve);
  ++metrics::counters().ecpa;
  return detail::add_unchecked(lhs, rhs, curve);
}

ECPoint point_negate(const ECPoint& point, const CurveProfile& curve) {
  if (point.is_infinity()) return point;
  if (curve.form() == CurveForm::weierstrass) {
    Integer y = point.y() == 0 ? Integer(0) : Integer(curve.p() - point.y());
    return ECPoint(point.x(), std::move(y));
  }
  Integer x = point.x() == 0 ? Integer(0) : Integer(curve.p() - point.x());
  return ECPoint(std::move(x), point.y());
}

ECPoint scalar_mult(const Scalar& k, const ECPoint& point, const CurveProfile& curve) {
  require_scalar_range(k, curve);
  require_on_curve(point, curve);
  ++metrics::counters().ecpm;
  if (point == curve.generator()) return detail::multiply_generator(k.value(), curve);
  return detail::multiply_unchecked(k.value(), point, curve);
}

ValidationResult validate_point(const ECPoint& raw, const CurveProfile& curve) {
  if (raw.is_infinity()) return PointRejection::infinity_point;
  if (!detail::on_curve_equation(raw.x(), raw.y(), curve)) return PointRejection::off_curve;
  // Edwards identity arrives as an affine pair.
  if (curve.form() == CurveForm::edwards && raw.x() == 0 && raw.y() == 1) return PointRejection::infinity_point;
  // Membership check n*Q = O. Also run at cofactor 1, where it always holds
  // for an on-curve point, so that both profiles do the same work.
  auto& ops = metrics::counters();
  ++ops.ecpm;
  ++ops.subgroup_checks;
  if (!detail::multiply_unchecked(curve.order(), raw, curve).is_infinity()) return PointRejection::small_subgroup;
  return ValidatedPoint(raw);
}

ECPoint ecdh_shared_secret(const Scalar& my_scalar, const ValidatedPoint& their_point, const CurveProfile& curve) {
  ECPoint secret = scalar_mult(my_scalar, their_point.point(), curve);
  if (secret.is_infinity()) throw CurveError(CurveError::Code::degenerate_secret, "shared secret is the identity");
  return secret;
}

EmbeddingDegreeResult embedding_degree_check(const CurveProfile& curve, unsigned bound) {
  if (bound < 2) throw std::invalid_argument("embedding degree bound must be at least 2");
  const Integer& n = curve.order();
  Integer base = curve.p() % n;
  Integer power = base;
  for (unsigned k = 2; k <= bound; ++k) {
    power = (power * base) % n;
    if (power == 1) return {false, k};
  }
  return {true, std::nullopt};
}

Bytes encode_coordinate(const Integer& value, const CurveProfile& curve) {
  std::size_t width = curve.coordinate_bytes();
  if (value < 0 || mpz_sizeinbase(value.get_mpz_t(), 256) > width) {
    throw std::invalid_argument("coordinate does not fit the profile width");
  }
  Bytes out(width, 0);
  if (value == 0) return out;
  std::size_t count = 0;
  Bytes tmp(width);
  mpz_export(tmp.data(), &count, 1, 1, 1, 0, value.get_mpz_t());
  std::copy_n(tmp.begin(), count, out.begin() + static_cast<std::ptrdiff_t>(width - count));
  return out;
}

Bytes encode_point(const ECPoint& point, const CurveProfile& curve) {
  if (point.is_infinity()) {
    if (curve.form() == CurveForm::weierstrass) return Bytes(curve.point_bytes(), 0xff);
    Bytes out = encode_coordinate(0, curve);
    append(out, encode_coordinate(1, curve));
    return out;
  }
  Bytes out = encode_coordinate(point.x(), curve);
  append(out, encode_coordinate(point.y(), curve));
  return out;
}

ECPoint decode_point(ByteView bytes, const CurveProfile& curve) {
  if (bytes.size() != curve.point_bytes()) throw std::invalid_argument("encoded point has the wrong length");
  if (curve.form() == CurveForm::weierstrass &&
      std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0xff; })) {
    return ECPoint::infinity();
  }
  std::size_t width = curve.coordinate_bytes();
  Integer x, y;
  mpz_import(x.get_mpz_t(), width, 1, 1, 1, 0, bytes.data());
  mpz_import(y.get_mpz_t(), width, 1, 1, 1, 0, bytes.data() + width);
  if (curve.form() == CurveForm::edwards && x == 0 && y == 1) return ECPoint::infinity();
  return ECPoint(std::move(x), std::move(y));
}

}  // namespace lakee::curve
