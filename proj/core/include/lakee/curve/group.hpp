#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <variant>

#include "lakee/bytes.hpp"
#include "lakee/curve/profile.hpp"
#include "lakee/random.hpp"

namespace lakee::curve {

class CurveError : public std::runtime_error {
 public:
  enum class Code { invalid_point, invalid_scalar, degenerate_secret };

  CurveError(Code code, const char* what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Secret multiplier in [1, n-1].
class Scalar {
 public:
  /// Throws CurveError(invalid_scalar) unless 1 <= k < n.
  static Scalar from_integer(Integer k, const CurveProfile& curve);

  /// Uniform draw from [1, n-1] by rejection sampling.
  static Scalar random(RandomSource& rng, const CurveProfile& curve);

  const Integer& value() const { return value_; }

 private:
  explicit Scalar(Integer v) : value_(std::move(v)) {}
  Integer value_;
};

enum class PointRejection { infinity_point, off_curve, small_subgroup };

std::string_view to_string(PointRejection reason);

/// A point that passed validate_point for some profile.
class ValidatedPoint {
 public:
  const ECPoint& point() const { return point_; }

 private:
  friend std::variant<ValidatedPoint, PointRejection> validate_point(const ECPoint&, const CurveProfile&);
  explicit ValidatedPoint(ECPoint p) : point_(std::move(p)) {}
  ECPoint point_;
};

using ValidationResult = std::variant<ValidatedPoint, PointRejection>;

/// True iff the point is the identity or its coordinates are in [0, p) and
/// satisfy the curve equation.
bool is_on_curve(const ECPoint& point, const CurveProfile& curve);

/// Group law. Throws CurveError(invalid_point) on off-curve input.
ECPoint point_add(const ECPoint& lhs, const ECPoint& rhs, const CurveProfile& curve);

ECPoint point_negate(const ECPoint& point, const CurveProfile& curve);

/// k*P via a fixed 4-bit window (precomputed comb when P is the generator).
/// Throws CurveError(invalid_scalar) if k >= n, CurveError(invalid_point) if
/// P is off the curve.
ECPoint scalar_mult(const Scalar& k, const ECPoint& point, const CurveProfile& curve);

/// Accepts iff the point is not the identity, is on the curve and lies in
/// the order-n subgroup. The subgroup test is one scalar multiplication and
/// counts as such; off-curve and identity inputs are rejected before it.
ValidationResult validate_point(const ECPoint& raw, const CurveProfile& curve);

/// my_scalar * their_point. Throws CurveError(degenerate_secret) if the
/// result is the identity.
ECPoint ecdh_shared_secret(const Scalar& my_scalar, const ValidatedPoint& their_point, const CurveProfile& curve);

struct EmbeddingDegreeResult {
  bool pass = false;
  std::optional<unsigned> degree;  // smallest k in [2, bound] with n | p^k - 1
};

/// MOV sanity check. Throws std::invalid_argument when bound < 2.
EmbeddingDegreeResult embedding_degree_check(const CurveProfile& curve, unsigned bound);

/// Fixed-width big-endian x || y. The Weierstrass identity encodes as all
/// 0xff bytes (never a valid coordinate pair); the Edwards identity as (0, 1).
Bytes encode_point(const ECPoint& point, const CurveProfile& curve);
Bytes encode_coordinate(const Integer& value, const CurveProfile& curve);

/// Inverse of encode_point. Throws std::invalid_argument on a wrong length.
/// Performs no curve validation.
ECPoint decode_point(ByteView bytes, const CurveProfile& curve);

}  // namespace lakee::curve
