#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

#include "germforge/errors.hpp"

namespace germforge {

/// Coefficient field: the rationals, or the prime field F_p.
class Field {
 public:
  constexpr Field() = default;

  static constexpr Field rationals() { return Field{}; }
  /// Throws DomainError unless p is a prime below 2^31.
  static Field prime(std::uint32_t p);

  constexpr bool is_rational() const { return p_ == 0; }
  constexpr std::uint32_t characteristic() const { return p_; }
  /// Number of elements, or 0 for the rationals.
  constexpr std::uint64_t size() const { return p_; }

  std::string to_string() const;

  friend constexpr bool operator==(Field a, Field b) { return a.p_ == b.p_; }

 private:
  constexpr explicit Field(std::uint32_t p) : p_(p) {}
  std::uint32_t p_ = 0;
};

/// Exact field element. Rationals are kept in lowest terms with a positive
/// denominator; F_p elements are residues in [0, p).
class Scalar {
 public:
  Scalar() = default;
  explicit Scalar(Field field) : field_(field) {}
  Scalar(Field field, long value);
  Scalar(Field field, const mpq_class& value);

  static Scalar zero(Field field) { return Scalar(field); }
  static Scalar one(Field field) { return Scalar(field, 1); }
  /// Parses "a", "-a" or "a/b".
  static Scalar parse(Field field, const std::string& text);

  Field field() const { return field_; }
  bool is_zero() const;
  bool is_one() const;

  /// Residue for F_p elements.
  std::uint64_t residue() const { return residue_; }
  /// The rational value; for F_p the canonical integer representative.
  mpq_class rational() const;

  Scalar inverse() const;
  /// Bit length of numerator plus denominator; 0 over F_p.
  std::size_t bits() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// "p/q" for rationals, plain integers otherwise.
  std::string to_string() const;

  std::size_t hash() const;

 private:
  void check(const Scalar& o) const;

  Field field_;
  std::uint64_t residue_ = 0;
  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace germforge
