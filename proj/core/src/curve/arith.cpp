#include "arith.hpp"

#include <algorithm>

namespace lakee::curve::detail {

namespace {
mpz_ptr m(Integer& v) { return v.get_mpz_t(); }
mpz_srcptr c(const Integer& v) { return v.get_mpz_t(); }
}  // namespace

GroupOps::GroupOps(const CurveProfile& curve)
    : curve_(curve), a_is_one_(curve.a() == 1), a_is_zero_(curve.a() == 0) {}

void GroupOps::mul(Integer& r, const Integer& a, const Integer& b) {
  mpz_mul(m(r), c(a), c(b));
  mpz_mod(m(r), c(r), c(curve_.p()));
}

void GroupOps::sqr(Integer& r, const Integer& a) {
  mpz_mul(m(r), c(a), c(a));
  mpz_mod(m(r), c(r), c(curve_.p()));
}

void GroupOps::add_mod(Integer& r, const Integer& a, const Integer& b) {
  mpz_add(m(r), c(a), c(b));
  if (mpz_cmp(c(r), c(curve_.p())) >= 0) mpz_sub(m(r), c(r), c(curve_.p()));
}

void GroupOps::sub_mod(Integer& r, const Integer& a, const Integer& b) {
  mpz_sub(m(r), c(a), c(b));
  if (mpz_sgn(c(r)) < 0) mpz_add(m(r), c(r), c(curve_.p()));
}

void GroupOps::mul_a(Integer& r, const Integer& v) {
  if (a_is_one_) {
    r = v;
  } else {
    mul(r, v, curve_.a());
  }
}

ProjectivePoint GroupOps::identity() const {
  if (curve_.form() == CurveForm::edwards) return {0, 1, 1};
  return {1, 1, 0};
}

ProjectivePoint GroupOps::lift(const ECPoint& point) const {
  if (point.is_infinity()) return identity();
  return {point.x(), point.y(), 1};
}

bool GroupOps::is_identity(const ProjectivePoint& point) const {
  if (curve_.form() == CurveForm::weierstrass) return mpz_sgn(c(point.Z)) == 0;
  return mpz_sgn(c(point.X)) == 0 && mpz_cmp(c(point.Y), c(point.Z)) == 0;
}

ECPoint GroupOps::normalize(const ProjectivePoint& point) {
  if (is_identity(point)) return ECPoint::infinity();
  Integer& zi = t_[0];
  mpz_invert(m(zi), c(point.Z), c(curve_.p()));
  Integer x, y;
  if (curve_.form() == CurveForm::edwards) {
    mul(x, point.X, zi);
    mul(y, point.Y, zi);
  } else {
    Integer& zi2 = t_[1];
    sqr(zi2, zi);
    mul(x, point.X, zi2);
    mul(zi2, zi2, zi);
    mul(y, point.Y, zi2);
  }
  return ECPoint(std::move(x), std::move(y));
}

void GroupOps::add(ProjectivePoint& out, const ProjectivePoint& lhs, const ProjectivePoint& rhs) {
  if (curve_.form() == CurveForm::edwards) {
    edwards_add(out, lhs, rhs);
  } else {
    jacobian_add(out, lhs, rhs);
  }
}

void GroupOps::dbl(ProjectivePoint& out, const ProjectivePoint& in) {
  if (curve_.form() == CurveForm::edwards) {
    edwards_dbl(out, in);
  } else {
    jacobian_dbl(out, in);
  }
}

// add-2008-bbjlp; unified and, for a square / d non-square, complete.
void GroupOps::edwards_add(ProjectivePoint& out, const ProjectivePoint& lhs, const ProjectivePoint& rhs) {
  auto& [A, B, C, D, E, F, G, t1, t2, x3, y3, z3] = t_;
  if (mpz_cmp_ui(c(rhs.Z), 1) == 0) {
    A = lhs.Z;
  } else {
    mul(A, lhs.Z, rhs.Z);
  }
  sqr(B, A);
  mul(C, lhs.X, rhs.X);
  mul(D, lhs.Y, rhs.Y);
  mul(E, C, D);
  mul(E, E, curve_.d());
  sub_mod(F, B, E);
  add_mod(G, B, E);
  add_mod(t1, lhs.X, lhs.Y);
  add_mod(t2, rhs.X, rhs.Y);
  mul(t1, t1, t2);
  sub_mod(t1, t1, C);
  sub_mod(t1, t1, D);
  mul(t1, t1, F);
  mul(x3, t1, A);
  mul_a(t2, C);
  sub_mod(t2, D, t2);
  mul(t2, t2, G);
  mul(y3, t2, A);
  mul(z3, F, G);
  std::swap(out.X, x3);
  std::swap(out.Y, y3);
  std::swap(out.Z, z3);
}

// dbl-2008-bbjlp
void GroupOps::edwards_dbl(ProjectivePoint& out, const ProjectivePoint& in) {
  auto& [B, C, D, E, F, H, J, t1, unused, x3, y3, z3] = t_;
  add_mod(t1, in.X, in.Y);
  sqr(B, t1);
  sqr(C, in.X);
  sqr(D, in.Y);
  mul_a(E, C);
  add_mod(F, E, D);
  sqr(H, in.Z);
  add_mod(t1, H, H);
  sub_mod(J, F, t1);
  sub_mod(t1, B, C);
  sub_mod(t1, t1, D);
  mul(x3, t1, J);
  sub_mod(t1, E, D);
  mul(y3, F, t1);
  mul(z3, F, J);
  std::swap(out.X, x3);
  std::swap(out.Y, y3);
  std::swap(out.Z, z3);
}

void GroupOps::jacobian_add(ProjectivePoint& out, const ProjectivePoint& lhs, const ProjectivePoint& rhs) {
  if (is_identity(rhs)) {
    if (&out != &lhs) out = lhs;
    return;
  }
  if (is_identity(lhs)) {
    out = rhs;
    return;
  }
  auto& [Z1Z1, Z2Z2, U1, U2, S1, S2, H, R, V, x3, y3, z3] = t_;
  sqr(Z1Z1, lhs.Z);
  sqr(Z2Z2, rhs.Z);
  mul(U1, lhs.X, Z2Z2);
  mul(U2, rhs.X, Z1Z1);
  mul(S1, lhs.Y, rhs.Z);
  mul(S1, S1, Z2Z2);
  mul(S2, rhs.Y, lhs.Z);
  mul(S2, S2, Z1Z1);
  if (U1 == U2) {
    if (S1 == S2) {
      ProjectivePoint copy = lhs;
      jacobian_dbl(out, copy);
    } else {
      out = identity();
    }
    return;
  }
  sub_mod(H, U2, U1);
  sub_mod(R, S2, S1);
  sqr(Z1Z1, H);          // HH
  mul(Z2Z2, H, Z1Z1);    // HHH
  mul(V, U1, Z1Z1);
  sqr(x3, R);
  sub_mod(x3, x3, Z2Z2);
  sub_mod(x3, x3, V);
  sub_mod(x3, x3, V);
  sub_mod(y3, V, x3);
  mul(y3, y3, R);
  mul(S1, S1, Z2Z2);
  sub_mod(y3, y3, S1);
  mul(z3, lhs.Z, rhs.Z);
  mul(z3, z3, H);
  std::swap(out.X, x3);
  std::swap(out.Y, y3);
  std::swap(out.Z, z3);
}

// dbl-2007-bl
void GroupOps::jacobian_dbl(ProjectivePoint& out, const ProjectivePoint& in) {
  auto& [XX, YY, YYYY, ZZ, S, M, T, t1, unused, x3, y3, z3] = t_;
  sqr(XX, in.X);
  sqr(YY, in.Y);
  sqr(YYYY, YY);
  sqr(ZZ, in.Z);
  add_mod(t1, in.X, YY);
  sqr(S, t1);
  sub_mod(S, S, XX);
  sub_mod(S, S, YYYY);
  add_mod(S, S, S);
  add_mod(M, XX, XX);
  add_mod(M, M, XX);
  if (!a_is_zero_) {
    sqr(t1, ZZ);
    mul(t1, t1, curve_.a());
    add_mod(M, M, t1);
  }
  sqr(T, M);
  sub_mod(T, T, S);
  sub_mod(T, T, S);
  x3 = T;
  sub_mod(t1, S, T);
  mul(y3, M, t1);
  add_mod(t1, YYYY, YYYY);
  add_mod(t1, t1, t1);
  add_mod(t1, t1, t1);
  sub_mod(y3, y3, t1);
  add_mod(t1, in.Y, in.Z);
  sqr(z3, t1);
  sub_mod(z3, z3, YY);
  sub_mod(z3, z3, ZZ);
  std::swap(out.X, x3);
  std::swap(out.Y, y3);
  std::swap(out.Z, z3);
}

ProjectivePoint GroupOps::multiply(const Integer& k, const ProjectivePoint& base) {
  std::array<ProjectivePoint, 16> table;
  table[0] = identity();
  table[1] = base;
  for (std::size_t i = 2; i < table.size(); ++i) add(table[i], table[i - 1], base);

  std::size_t bits = std::max(mpz_sizeinbase(c(k), 2), mpz_sizeinbase(c(curve_.order()), 2));
  std::size_t windows = (bits + 3) / 4;
  ProjectivePoint acc = identity();
  for (std::size_t w = windows; w-- > 0;) {
    for (int i = 0; i < 4; ++i) dbl(acc, acc);
    unsigned digit = 0;
    for (int i = 3; i >= 0; --i) digit = (digit << 1) | static_cast<unsigned>(mpz_tstbit(c(k), 4 * w + i));
    add(acc, acc, table[digit]);
  }
  return acc;
}

bool on_curve_equation(const Integer& x, const Integer& y, const CurveProfile& curve) {
  const Integer& p = curve.p();
  if (x < 0 || y < 0 || x >= p || y >= p) return false;
  Integer lhs, rhs;
  if (curve.form() == CurveForm::weierstrass) {
    lhs = y * y;
    rhs = x * x * x + curve.a() * x + curve.b();
  } else {
    Integer x2 = x * x;
    Integer y2 = y * y;
    lhs = curve.a() * x2 + y2;
    rhs = 1 + curve.d() * x2 * y2;
  }
  Integer diff = lhs - rhs;
  mpz_mod(m(diff), c(diff), c(p));
  return diff == 0;
}

ECPoint add_unchecked(const ECPoint& lhs, const ECPoint& rhs, const CurveProfile& curve) {
  GroupOps ops(curve);
  ProjectivePoint r = ops.lift(lhs);
  ops.add(r, r, ops.lift(rhs));
  return ops.normalize(r);
}

ECPoint multiply_unchecked(const Integer& k, const ECPoint& point, const CurveProfile& curve) {
  GroupOps ops(curve);
  return ops.normalize(ops.multiply(k, ops.lift(point)));
}

std::shared_ptr<const FixedBaseTable> build_fixed_base(const CurveProfile& curve) {
  GroupOps ops(curve);
  auto table = std::make_shared<FixedBaseTable>();
  std::size_t windows = (mpz_sizeinbase(c(curve.order()), 2) + 3) / 4;
  table->rows.resize(windows);
  ProjectivePoint base = ops.lift(curve.generator());
  for (auto& row : table->rows) {
    row[0] = ops.identity();
    ProjectivePoint acc = base;
    for (std::size_t j = 1; j < row.size(); ++j) {
      ECPoint affine = ops.normalize(acc);
      row[j] = ops.lift(affine);
      ops.add(acc, acc, base);
    }
    // acc = 16 * base here
    base = acc;
  }
  return table;
}

ECPoint multiply_generator(const Integer& k, const CurveProfile& curve) {
  const FixedBaseTable* table = curve.fixed_base();
  std::size_t windows = table ? table->rows.size() : 0;
  if (table == nullptr || mpz_sizeinbase(c(k), 2) > 4 * windows) {
    return multiply_unchecked(k, curve.generator(), curve);
  }
  GroupOps ops(curve);
  ProjectivePoint acc = ops.identity();
  for (std::size_t w = 0; w < windows; ++w) {
    unsigned digit = 0;
    for (int i = 3; i >= 0; --i) digit = (digit << 1) | static_cast<unsigned>(mpz_tstbit(c(k), 4 * w + i));
    ops.add(acc, acc, table->rows[w][digit]);
  }
  return ops.normalize(acc);
}

}  // namespace lakee::curve::detail
