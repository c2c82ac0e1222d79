#include "germforge/scalar.hpp"

#include <cctype>

namespace germforge {

namespace {

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint64_t reduce(const mpz_class& z, std::uint32_t p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), p);
  return r.get_ui();
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

}  // namespace

Field Field::prime(std::uint32_t p) {
  if (p >= (1u << 31) || !is_prime(p))
    throw DomainError("field characteristic " + std::to_string(p) +
                      " is not a supported prime");
  return Field(p);
}

std::string Field::to_string() const {
  return is_rational() ? "Q" : "Fp " + std::to_string(p_);
}

Scalar::Scalar(Field field, long value) : field_(field) {
  if (field_.is_rational()) {
    q_ = value;
  } else {
    residue_ = reduce(mpz_class(value), field_.characteristic());
  }
}

Scalar::Scalar(Field field, const mpq_class& value) : field_(field) {
  if (field_.is_rational()) {
    q_ = value;
    q_.canonicalize();
    return;
  }
  const auto p = field_.characteristic();
  const std::uint64_t num = reduce(value.get_num(), p);
  const std::uint64_t den = reduce(value.get_den(), p);
  if (den == 0)
    throw DomainError("denominator divisible by the characteristic");
  residue_ = num * pow_mod(den, p - 2, p) % p;
}

Scalar Scalar::parse(Field field, const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw DomainError("empty scalar literal");
  mpq_class q;
  if (q.set_str(t, 10) != 0)
    throw DomainError("malformed scalar literal '" + text + "'");
  if (q.get_den() == 0) throw DomainError("zero denominator in '" + text + "'");
  q.canonicalize();
  return Scalar(field, q);
}

bool Scalar::is_zero() const {
  return field_.is_rational() ? sgn(q_) == 0 : residue_ == 0;
}

bool Scalar::is_one() const {
  return field_.is_rational() ? q_ == 1 : residue_ == 1;
}

mpq_class Scalar::rational() const {
  if (field_.is_rational()) return q_;
  return mpq_class(mpz_class(static_cast<unsigned long>(residue_)));
}

void Scalar::check(const Scalar& o) const {
  if (!(field_ == o.field_))
    throw StructuralError("scalars over different fields");
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DomainError("division by zero");
  Scalar r(field_);
  if (field_.is_rational()) {
    r.q_ = 1 / q_;
  } else {
    const auto p = field_.characteristic();
    r.residue_ = pow_mod(residue_, p - 2, p);
  }
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r(field_);
  if (field_.is_rational()) {
    r.q_ = -q_;
  } else {
    r.residue_ = residue_ == 0 ? 0 : field_.characteristic() - residue_;
  }
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  check(o);
  if (field_.is_rational()) {
    q_ += o.q_;
  } else {
    residue_ = (residue_ + o.residue_) % field_.characteristic();
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  check(o);
  if (field_.is_rational()) {
    q_ -= o.q_;
  } else {
    const auto p = field_.characteristic();
    residue_ = (residue_ + p - o.residue_) % p;
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  check(o);
  if (field_.is_rational()) {
    q_ *= o.q_;
  } else {
    residue_ = residue_ * o.residue_ % field_.characteristic();
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  check(o);
  return *this *= o.inverse();
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (!(a.field_ == b.field_)) return false;
  return a.field_.is_rational() ? a.q_ == b.q_ : a.residue_ == b.residue_;
}

std::string Scalar::to_string() const {
  if (field_.is_rational()) return q_.get_str();
  return std::to_string(residue_);
}

std::size_t Scalar::hash() const {
  if (!field_.is_rational()) return std::hash<std::uint64_t>{}(residue_);
  return std::hash<std::string>{}(q_.get_str());
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) {
  return os << s.to_string();
}

std::size_t Scalar::bits() const {
  if (!field_.is_rational()) return 0;
  return mpz_sizeinbase(q_.get_num_mpz_t(), 2) + mpz_sizeinbase(q_.get_den_mpz_t(), 2);
}

}  // namespace germforge
