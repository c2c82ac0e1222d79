#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "germforge/monomial.hpp"
#include "germforge/scalar.hpp"
#include "germforge/variables.hpp"

namespace germforge {

/// A power series modulo m^{D+1}, where m is generated by all variables of
/// the ring (parameter blocks included). Terms are kept sparse; no stored
/// coefficient is zero and every stored monomial has degree <= D.
class Jet {
 public:
  using Terms = std::map<Monomial, Scalar, LocalOrder>;

  Jet() = default;
  Jet(VarSetPtr vars, Field field, int trunc);

  static Jet constant(VarSetPtr vars, Field field, int trunc, const Scalar& c);
  static Jet variable(VarSetPtr vars, Field field, int trunc, std::size_t i);
  static Jet variable(VarSetPtr vars, Field field, int trunc, const std::string& name);
  static Jet monomial(VarSetPtr vars, Field field, int trunc, const Monomial& m,
                      const Scalar& c);

  const VarSetPtr& vars() const { return vars_; }
  Field field() const { return field_; }
  int trunc() const { return trunc_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Scalar coefficient(const Monomial& m) const;
  Scalar constant_term() const { return coefficient(Monomial{}); }
  /// Adds c·m; terms of degree > D are dropped.
  void add_term(const Monomial& m, const Scalar& c);
  void set_term(const Monomial& m, const Scalar& c);

  /// Lowest degree of a stored term; nullopt for the zero jet.
  std::optional<int> order() const;
  /// Terms of degree <= k (truncation degree unchanged).
  Jet truncated(int k) const;
  /// Terms of degree exactly k.
  Jet homogeneous(int k) const;
  /// Same terms reinterpreted at another truncation degree.
  Jet with_trunc(int trunc) const;
  /// Rewrites the jet over another variable set, matching variables by name.
  /// Variables absent from the target set must not occur.
  Jet embed(const VarSetPtr& target) const;

  Jet derivative(std::size_t var) const;

  /// f(g_1, ..., g_n) truncated at the images' degree. images[i] replaces
  /// variable i; all images share one variable set, field and truncation,
  /// and must lie in the maximal ideal.
  Jet substitute(const std::vector<Jet>& images) const;
  /// Substitution of the listed variables only; the others stay put.
  Jet substitute(const std::map<std::size_t, Jet>& assignment) const;
  /// Sets the listed variables to zero.
  Jet zero_variables(const std::vector<std::size_t>& vars) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Scalar& c);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Scalar& c) { return a *= c; }
  friend Jet operator*(const Scalar& c, Jet a) { return a *= c; }
  friend Jet operator*(const Jet& a, const Jet& b);

  Jet pow(int e) const;

  friend bool operator==(const Jet& a, const Jet& b);
  friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

  /// Infix rendering in ascending degree, e.g. "x + 1/2 x^2 - 1/8 x^3".
  std::string to_string() const;

 private:
  void check_compatible(const Jet& o) const;

  VarSetPtr vars_;
  Field field_;
  int trunc_ = 0;
  Terms terms_;
};

/// Jets built over the same variables/field/truncation as `like`.
Jet zero_like(const Jet& like);
Jet one_like(const Jet& like);

std::string monomial_to_string(const VariableSet& vars, const Monomial& m);

}  // namespace germforge

namespace germforge {

/// Parses an infix polynomial such as "x + 1/2 x^2 - y*(x+1)^3". Adjacent
/// factors multiply; division is only by nonzero constants. Errors carry the
/// position relative to (line, column) of the first character.
Jet parse_jet(const std::string& text, VarSetPtr vars, Field field, int trunc,
              int line = 1, int column = 1);

}  // namespace germforge
