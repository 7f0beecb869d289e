#include "lakee/curve/profile.hpp"

#include <fstream>
#include <sstream>

#include "arith.hpp"

namespace lakee::curve {

namespace {

constexpr int kPrimalityReps = 32;
constexpr std::size_t kMaxEnumerationBits = 16;

bool probably_prime(const Integer& v) { return mpz_probab_prime_p(v.get_mpz_t(), kPrimalityReps) > 0; }

Integer reduce(const Integer& v, const Integer& p) {
  Integer r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
  return r;
}

int legendre(const Integer& v, const Integer& p) { return mpz_legendre(v.get_mpz_t(), p.get_mpz_t()); }

// Number of affine solutions plus, for Weierstrass, the point at infinity.
Integer count_points(const CurveProfile& curve) {
  const Integer& p = curve.p();
  unsigned long limit = p.get_ui();
  Integer total = curve.form() == CurveForm::weierstrass ? 1 : 0;
  for (unsigned long xi = 0; xi < limit; ++xi) {
    Integer x = xi;
    Integer rhs;
    if (curve.form() == CurveForm::weierstrass) {
      rhs = reduce(x * x * x + curve.a() * x + curve.b(), p);
    } else {
      Integer num = reduce(1 - curve.a() * x * x, p);
      Integer den = reduce(1 - curve.d() * x * x, p);
      Integer inv;
      mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
      rhs = reduce(num * inv, p);
    }
    total += 1 + legendre(rhs, p);
  }
  return total;
}

Integer order_by_repeated_addition(const CurveProfile& curve, const Integer& group_size) {
  ECPoint acc = curve.generator();
  Integer k = 1;
  while (!acc.is_infinity()) {
    acc = detail::add_unchecked(acc, curve.generator(), curve);
    ++k;
    if (k > group_size) throw ProfileError("generator order exceeds the group size");
  }
  return k;
}

}  // namespace

CurveProfile CurveProfile::create(ProfileParams params) {
  CurveProfile profile;
  profile.name_ = std::move(params.name);
  profile.form_ = params.form;
  const Integer& p = params.p;
  if (p <= 3 || !probably_prime(p)) throw ProfileError("field modulus must be a prime greater than 3");
  profile.p_ = p;
  profile.a_ = reduce(params.a, p);
  profile.b_ = reduce(params.b, p);
  profile.d_ = reduce(params.d, p);

  if (profile.form_ == CurveForm::weierstrass) {
    Integer disc = reduce(4 * profile.a_ * profile.a_ * profile.a_ + 27 * profile.b_ * profile.b_, p);
    if (disc == 0) throw ProfileError("singular Weierstrass curve");
  } else {
    if (profile.a_ == 0 || profile.d_ == 0 || profile.a_ == profile.d_) throw ProfileError("degenerate Edwards curve");
    if (legendre(profile.a_, p) != 1 || legendre(profile.d_, p) != -1) {
      throw ProfileError("Edwards profile needs a square and d non-square (complete addition law)");
    }
  }

  profile.coordinate_bytes_ = (mpz_sizeinbase(p.get_mpz_t(), 2) + 7) / 8;
  profile.nominal_point_bits_ =
      params.nominal_point_bits > 0 ? params.nominal_point_bits : static_cast<int>(mpz_sizeinbase(p.get_mpz_t(), 2));
  profile.test_only_ = params.test_only;

  if (!detail::on_curve_equation(params.gx, params.gy, profile)) throw ProfileError("generator is not on the curve");
  profile.generator_ = ECPoint(params.gx, params.gy);
  if (profile.form_ == CurveForm::edwards && params.gx == 0 && params.gy == 1) {
    throw ProfileError("generator is the identity");
  }

  bool small_field = mpz_sizeinbase(p.get_mpz_t(), 2) <= kMaxEnumerationBits;
  std::optional<Integer> group_size;
  if (!params.order || !params.cofactor) {
    if (!small_field) throw ProfileError("order and cofactor must be given for large fields");
    group_size = count_points(profile);
  }

  if (params.order) {
    profile.order_ = *params.order;
    // order_ must be set before multiplying: the window length depends on it.
    if (!detail::multiply_unchecked(profile.order_, profile.generator_, profile).is_infinity()) {
      throw ProfileError("n * G is not the identity");
    }
  } else {
    profile.order_ = order_by_repeated_addition(profile, *group_size);
  }
  if (profile.order_ < 2 || !probably_prime(profile.order_)) throw ProfileError("generator order must be prime");

  if (params.cofactor) {
    profile.cofactor_ = *params.cofactor;
    if (group_size && profile.cofactor_ * profile.order_ != *group_size) {
      throw ProfileError("cofactor * order does not match the point count");
    }
  } else {
    if (*group_size % profile.order_ != 0) throw ProfileError("generator order does not divide the group size");
    profile.cofactor_ = *group_size / profile.order_;
  }
  if (profile.cofactor_ < 1) throw ProfileError("cofactor must be positive");

  // Hasse bound on h*n.
  Integer trace = p + 1 - profile.cofactor_ * profile.order_;
  if (trace * trace > 4 * p) throw ProfileError("h * n violates the Hasse bound");

  profile.generator_doubled_ = detail::add_unchecked(profile.generator_, profile.generator_, profile);
  profile.fixed_base_ = detail::build_fixed_base(profile);
  return profile;
}

const CurveProfile& toy_profile() {
  static const CurveProfile profile = [] {
    ProfileParams params;
    params.name = "toy";
    params.form = CurveForm::weierstrass;
    params.p = 17;
    params.a = 2;
    params.b = 2;
    params.gx = 5;
    params.gy = 1;
    params.test_only = true;
    return CurveProfile::create(std::move(params));
  }();
  return profile;
}

const CurveProfile& ed448_profile() {
  static const CurveProfile profile = [] {
    ProfileParams params;
    params.name = "ed448";
    params.form = CurveForm::edwards;
    Integer one = 1;
    params.p = (one << 448) - (one << 224) - 1;
    params.a = 1;
    params.d = -39081;
    params.gx = Integer(
        "224580040295924300187604334099896036246789641632564134246125461686950415467406032909029192869357953282578032075"
        "146446173674602635247710");
    params.gy = Integer(
        "298819210078481492676017930443930673437544040154080242095928241372331506189835876003536878655418784733982303233"
        "503462500531545062832660");
    params.order = Integer(
        "181709681073901722637330951972001133588410340171829515070372549795146003961539585716195755291692375963310293709"
        "091662304773755859649779");
    params.cofactor = Integer(4);
    params.nominal_point_bits = 224;
    return CurveProfile::create(std::move(params));
  }();
  return profile;
}

const CurveProfile& builtin_profile(std::string_view name) {
  if (name == "toy") return toy_profile();
  if (name == "ed448") return ed448_profile();
  throw ProfileError("unknown built-in profile: " + std::string(name));
}

namespace {

Integer parse_integer(const std::string& key, const std::string& value) {
  Integer out;
  if (out.set_str(value, 0) != 0) throw ProfileError("bad integer for '" + key + "': " + value);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ProfileError("bad boolean for '" + key + "': " + value);
}

}  // namespace

ProfileParams parse_profile(std::string_view text) {
  ProfileParams params;
  bool have_p = false, have_form = false, have_gx = false, have_gy = false, have_a = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string key, value, extra;
    if (!(fields >> key)) continue;
    if (!(fields >> value) || (fields >> extra)) {
      throw ProfileError("line " + std::to_string(lineno) + ": expected 'key value'");
    }
    if (key == "name") {
      params.name = value;
    } else if (key == "form") {
      if (value == "weierstrass") {
        params.form = CurveForm::weierstrass;
      } else if (value == "edwards") {
        params.form = CurveForm::edwards;
      } else {
        throw ProfileError("unknown curve form: " + value);
      }
      have_form = true;
    } else if (key == "p") {
      params.p = parse_integer(key, value);
      have_p = true;
    } else if (key == "a") {
      params.a = parse_integer(key, value);
      have_a = true;
    } else if (key == "b") {
      params.b = parse_integer(key, value);
    } else if (key == "d") {
      params.d = parse_integer(key, value);
    } else if (key == "gx") {
      params.gx = parse_integer(key, value);
      have_gx = true;
    } else if (key == "gy") {
      params.gy = parse_integer(key, value);
      have_gy = true;
    } else if (key == "order" || key == "n") {
      if (value != "auto") params.order = parse_integer(key, value);
    } else if (key == "cofactor") {
      if (value != "auto") params.cofactor = parse_integer(key, value);
    } else if (key == "nominal_point_bits") {
      params.nominal_point_bits = static_cast<int>(parse_integer(key, value).get_si());
    } else if (key == "test_only") {
      params.test_only = parse_bool(key, value);
    } else {
      throw ProfileError("unknown profile key: " + key);
    }
  }
  if (!have_form || !have_p || !have_gx || !have_gy) throw ProfileError("profile needs form, p, gx and gy");
  if (params.form == CurveForm::edwards && !have_a) params.a = 1;
  if (params.name.empty()) params.name = "custom";
  return params;
}

CurveProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ProfileError("cannot open profile file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return CurveProfile::create(parse_profile(buf.str()));
}

std::string format_profile(const CurveProfile& profile) {
  std::ostringstream out;
  out << "name " << profile.name() << "\n";
  if (profile.form() == CurveForm::weierstrass) {
    out << "form weierstrass\n";
    out << "p " << profile.p().get_str() << "\n";
    out << "a " << profile.a().get_str() << "\n";
    out << "b " << profile.b().get_str() << "\n";
  } else {
    out << "form edwards\n";
    out << "p " << profile.p().get_str() << "\n";
    out << "a " << profile.a().get_str() << "\n";
    out << "d " << profile.d().get_str() << "\n";
  }
  out << "gx " << profile.generator().x().get_str() << "\n";
  out << "gy " << profile.generator().y().get_str() << "\n";
  out << "order " << profile.order().get_str() << "\n";
  out << "cofactor " << profile.cofactor().get_str() << "\n";
  out << "nominal_point_bits " << profile.nominal_point_bits() << "\n";
  out << "test_only " << (profile.test_only() ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace lakee::curve
