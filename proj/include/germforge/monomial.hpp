#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "germforge/variables.hpp"

namespace germforge {

/// Exponent vector over the variables of one VariableSet, with its total
/// degree cached. Unused trailing slots are zero.
class Monomial {
 public:
  Monomial() = default;

  static Monomial variable(std::size_t i);
  static Monomial from_exponents(const std::vector<int>& exps);

  int degree() const { return degree_; }
  int exponent(std::size_t i) const { return exps_[i]; }
  void set_exponent(std::size_t i, int e);
  bool is_one() const { return degree_ == 0; }

  Monomial operator*(const Monomial& o) const;
  /// True iff this monomial divides o.
  bool divides(const Monomial& o) const;
  /// o / this; requires divides(o).
  Monomial quotient_of(const Monomial& o) const;

  /// Degree restricted to the given variable indices.
  int degree_in(const std::vector<std::size_t>& vars) const;

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.exps_ == b.exps_;
  }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

  std::size_t hash() const;

 private:
  std::array<std::uint8_t, kMaxVariables> exps_{};
  int degree_ = 0;
};

/// Local degree order: lower total degree first; within a degree the
/// lexicographically larger exponent vector first (x1 > x2 > ...). The first
/// monomial of a row in this order is its pivot.
struct LocalOrder {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Dense indexing of all monomials of degree <= max_degree in n variables,
/// listed in LocalOrder.
class MonomialIndex {
 public:
  MonomialIndex(std::size_t nvars, int max_degree);

  std::size_t size() const { return monomials_.size(); }
  const Monomial& at(std::size_t i) const { return monomials_[i]; }
  std::size_t index(const Monomial& m) const { return index_.at(m); }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  /// Number of monomials of degree <= k (a prefix of the list).
  std::size_t count_up_to(int k) const;
  int max_degree() const { return max_degree_; }

 private:
  std::size_t nvars_;
  int max_degree_;
  std::vector<Monomial> monomials_;
  std::unordered_map<Monomial, std::size_t, MonomialHash> index_;
};

/// All monomials of degree exactly d in n variables, in LocalOrder.
std::vector<Monomial> monomials_of_degree(std::size_t nvars, int d);

}  // namespace germforge
