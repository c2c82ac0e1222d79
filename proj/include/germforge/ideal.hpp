#pragma once

#include <memory>
#include <vector>

#include "germforge/jet.hpp"
#include "germforge/linalg.hpp"

namespace germforge {

/// An ideal J + m^{D+1} of the jet ring, held as the row echelon form of all
/// products monomial·generator of degree <= D.
class IdealJet {
 public:
  IdealJet(VarSetPtr vars, Field field, int trunc, std::vector<Jet> generators = {});

  const VarSetPtr& vars() const { return vars_; }
  Field field() const { return field_; }
  int trunc() const { return trunc_; }
  const std::vector<Jet>& generators() const { return gens_; }
  bool is_zero() const { return ech_->rank() == 0; }

  Jet normal_form(const Jet& p) const;
  /// Normal form modulo J + m^{k+1}.
  Jet normal_form_at(const Jet& p, int k) const;
  /// Normal form of a jet truncated below D, computed at its own truncation.
  Jet normal_form_low(const Jet& p) const;
  bool member(const Jet& p) const;
  bool is_pivot(const Monomial& m) const { return ech_->is_pivot(m); }

  /// Non-pivot monomials of degree <= k, in monomial order.
  std::vector<Monomial> quotient_monomial_basis(int k) const;
  /// Rank of the echelon basis restricted to pivots of degree <= k.
  std::size_t rank_at(int k) const;
  /// Rows of the echelon basis with pivot degree <= k, truncated at k.
  std::vector<Jet> reduced_basis(int k) const;

  /// Cofactors z with p ≡ Σ z_j q_j mod m^{D+1}; nullopt if p is not a member.
  std::optional<std::vector<Jet>> lift(const Jet& p) const;

  /// J + (extra generators).
  IdealJet plus(const std::vector<Jet>& extra) const;
  /// The same generators moved into a larger ring (matched by name).
  IdealJet embed(const VarSetPtr& target) const;
  IdealJet with_trunc(int trunc) const;

 private:
  void check(const Jet& p) const;

  VarSetPtr vars_;
  Field field_;
  int trunc_;
  std::vector<Jet> gens_;
  std::shared_ptr<const SparseEchelon<Monomial, LocalOrder>> ech_;
};

/// Generators of m^k in the given variables (all monomials of degree k).
std::vector<Jet> power_of_maximal_ideal(const VarSetPtr& vars, Field field, int trunc,
                                        const std::vector<std::size_t>& var_indices, int k);
/// Generators of the k-th power of the ideal generated by gens.
std::vector<Jet> power_of_ideal(const std::vector<Jet>& gens, int k);

}  // namespace germforge
