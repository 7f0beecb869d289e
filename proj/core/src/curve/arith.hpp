#pragma once

// Internal projective arithmetic shared by group.cpp and profile.cpp.

#include <array>
#include <vector>

#include "lakee/curve/profile.hpp"

namespace lakee::curve {

namespace detail {

/// Edwards: (X : Y : Z) with x = X/Z, y = Y/Z; identity (0 : 1 : 1).
/// Weierstrass: Jacobian (X : Y : Z) with x = X/Z^2, y = Y/Z^3; identity Z = 0.
struct ProjectivePoint {
  Integer X;
  Integer Y;
  Integer Z;
};

/// Scratch-owning helper; one instance per call keeps it reentrant.
class GroupOps {
 public:
  explicit GroupOps(const CurveProfile& curve);

  ProjectivePoint identity() const;
  ProjectivePoint lift(const ECPoint& point) const;
  ECPoint normalize(const ProjectivePoint& point);
  bool is_identity(const ProjectivePoint& point) const;

  /// out may alias lhs or rhs.
  void add(ProjectivePoint& out, const ProjectivePoint& lhs, const ProjectivePoint& rhs);
  void dbl(ProjectivePoint& out, const ProjectivePoint& in);

  /// Variable-base window multiplication, any k >= 0.
  ProjectivePoint multiply(const Integer& k, const ProjectivePoint& base);

 private:
  void mul(Integer& r, const Integer& a, const Integer& b);
  void sqr(Integer& r, const Integer& a);
  void add_mod(Integer& r, const Integer& a, const Integer& b);
  void sub_mod(Integer& r, const Integer& a, const Integer& b);
  void mul_a(Integer& r, const Integer& v);

  void edwards_add(ProjectivePoint& out, const ProjectivePoint& lhs, const ProjectivePoint& rhs);
  void edwards_dbl(ProjectivePoint& out, const ProjectivePoint& in);
  void jacobian_add(ProjectivePoint& out, const ProjectivePoint& lhs, const ProjectivePoint& rhs);
  void jacobian_dbl(ProjectivePoint& out, const ProjectivePoint& in);

  const CurveProfile& curve_;
  bool a_is_one_;
  bool a_is_zero_;
  std::array<Integer, 12> t_;
};

bool on_curve_equation(const Integer& x, const Integer& y, const CurveProfile& curve);

ECPoint add_unchecked(const ECPoint& lhs, const ECPoint& rhs, const CurveProfile& curve);
ECPoint multiply_unchecked(const Integer& k, const ECPoint& point, const CurveProfile& curve);

std::shared_ptr<const FixedBaseTable> build_fixed_base(const CurveProfile& curve);
ECPoint multiply_generator(const Integer& k, const CurveProfile& curve);

}  // namespace detail

/// Comb table: rows[w][j] = j * 16^w * G with Z = 1, j in [0, 15].
struct FixedBaseTable {
  std::vector<std::array<detail::ProjectivePoint, 16>> rows;
};

}  // namespace lakee::curve
