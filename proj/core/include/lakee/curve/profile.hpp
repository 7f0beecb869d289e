#pragma once

#include <gmpxx.h>

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lakee::curve {

using Integer = mpz_class;

enum class CurveForm { weierstrass, edwards };

/// Affine point or the group identity. For Weierstrass curves the identity
/// is the point at infinity; for Edwards curves it is (0, 1), which is
/// always represented by the identity marker once it leaves the group law.
///
/// Coordinates decoded from the wire are not range-checked here; that is
/// validate_point's job.
class ECPoint {
 public:
  static ECPoint infinity() { return ECPoint(); }

  ECPoint(Integer x, Integer y) : infinity_(false), x_(std::move(x)), y_(std::move(y)) {}

  bool is_infinity() const { return infinity_; }
  const Integer& x() const;
  const Integer& y() const;

  friend bool operator==(const ECPoint& lhs, const ECPoint& rhs);

 private:
  ECPoint() = default;

  bool infinity_ = true;
  Integer x_;
  Integer y_;
};

std::string to_string(const ECPoint& point);

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unvalidated curve description, as read from a config file.
struct ProfileParams {
  std::string name;
  CurveForm form = CurveForm::weierstrass;
  Integer p;
  Integer a;  // Weierstrass a, or the Edwards x^2 coefficient
  Integer b;  // Weierstrass only
  Integer d;  // Edwards only
  Integer gx;
  Integer gy;
  std::optional<Integer> order;     // computed by enumeration when absent
  std::optional<Integer> cofactor;  // computed by enumeration when absent
  int nominal_point_bits = 0;       // 0: use the bit length of p
  bool test_only = false;
};

struct FixedBaseTable;

/// Validated curve parameters.
///
/// Weierstrass: y^2 = x^3 + a*x + b (mod p).
/// Edwards:     a*x^2 + y^2 = 1 + d*x^2*y^2 (mod p), with a square and
///              d non-square so the addition law is complete.
class CurveProfile {
 public:
  /// Checks p prime, the curve non-singular, G on the curve, n prime and
  /// n*G = O. Throws ProfileError.
  static CurveProfile create(ProfileParams params);

  const std::string& name() const { return name_; }
  CurveForm form() const { return form_; }
  const Integer& p() const { return p_; }
  const Integer& a() const { return a_; }
  const Integer& b() const { return b_; }
  const Integer& d() const { return d_; }
  const ECPoint& generator() const { return generator_; }
  const Integer& order() const { return order_; }
  const Integer& cofactor() const { return cofactor_; }
  int nominal_point_bits() const { return nominal_point_bits_; }
  bool test_only() const { return test_only_; }

  /// Fixed width of one encoded coordinate.
  std::size_t coordinate_bytes() const { return coordinate_bytes_; }
  std::size_t point_bytes() const { return 2 * coordinate_bytes_; }

  /// 2*G, the offset signalling a long-term key rotation.
  const ECPoint& generator_doubled() const { return generator_doubled_; }

  const FixedBaseTable* fixed_base() const { return fixed_base_.get(); }

 private:
  CurveProfile() = default;

  std::string name_;
  CurveForm form_ = CurveForm::weierstrass;
  Integer p_, a_, b_, d_;
  ECPoint generator_ = ECPoint::infinity();
  ECPoint generator_doubled_ = ECPoint::infinity();
  Integer order_, cofactor_;
  int nominal_point_bits_ = 0;
  bool test_only_ = false;
  std::size_t coordinate_bytes_ = 0;
  std::shared_ptr<const FixedBaseTable> fixed_base_;
};

/// Weierstrass y^2 = x^3 + 2x + 2 over F_17 with G = (5, 1). Order found by
/// enumeration. Test vehicle only.
const CurveProfile& toy_profile();

/// Ed448-Goldilocks with the RFC 8032 base point. nominal_point_bits = 224.
const CurveProfile& ed448_profile();

/// Looks up "toy" or "ed448". Throws ProfileError for anything else.
const CurveProfile& builtin_profile(std::string_view name);

/// Parses the line-oriented `key value` profile format:
///
///   name toy17
///   form weierstrass        # or edwards
///   p 17
///   a 2
///   b 2                     # d for edwards
///   gx 5
///   gy 1
///   order auto              # or an integer; auto enumerates (small p only)
///   cofactor auto
///   nominal_point_bits 8
///   test_only true
///
/// Integers are decimal, 0x-prefixed hex, or negative decimal (reduced mod p).
ProfileParams parse_profile(std::string_view text);
CurveProfile load_profile(const std::filesystem::path& path);
std::string format_profile(const CurveProfile& profile);

}  // namespace lakee::curve
