#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "germforge/ideal.hpp"

namespace germforge {

/// R = k[[x]]/J at jet scale: variables (possibly with a parameter block),
/// ideal generators inside m, truncation D >= 1.
class LocalRing {
 public:
  LocalRing(std::string name, VarSetPtr vars, Field field, int trunc,
            std::vector<Jet> generators);

  const std::string& name() const { return name_; }
  const VarSetPtr& vars() const { return vars_; }
  Field field() const { return field_; }
  int trunc() const { return trunc_; }
  const IdealJet& ideal() const { return ideal_; }
  bool is_smooth() const { return ideal_.is_zero(); }
  std::size_t size() const { return vars_->size(); }

  std::vector<std::size_t> free_vars() const { return vars_->free_indices(); }
  std::vector<std::size_t> param_vars() const { return vars_->parameter_indices(); }
  bool has_params() const { return !param_vars().empty(); }

  Jet zero() const { return Jet(vars_, field_, trunc_); }
  Jet one() const { return Jet::constant(vars_, field_, trunc_, Scalar::one(field_)); }
  Jet var(std::size_t i) const { return Jet::variable(vars_, field_, trunc_, i); }
  Jet parse(const std::string& text, int line = 1, int column = 1) const {
    return parse_jet(text, vars_, field_, trunc_, line, column);
  }
  Jet normal_form(const Jet& p) const { return ideal_.normal_form(p); }
  bool member(const Jet& p) const { return ideal_.member(p); }

  /// Same ring with a different ideal.
  std::shared_ptr<const LocalRing> with_ideal(const std::vector<Jet>& generators,
                                              const std::string& name = "") const;
  /// Same generators at another truncation degree.
  std::shared_ptr<const LocalRing> with_trunc(int trunc) const;

 private:
  std::string name_;
  VarSetPtr vars_;
  Field field_;
  int trunc_;
  IdealJet ideal_;
};

using RingPtr = std::shared_ptr<const LocalRing>;

RingPtr make_ring(std::string name, VarSetPtr vars, Field field, int trunc,
                  std::vector<Jet> generators = {});
/// Convenience: free variables named by `vars`, optional parameter block `params`,
/// ideal generators given as text.
RingPtr make_ring(std::string name, const std::vector<std::string>& vars, Field field,
                  int trunc, const std::vector<std::string>& ideal = {},
                  const std::vector<std::string>& params = {});

void check_compatible_rings(const LocalRing& a, const LocalRing& b);
/// Parameter variables of a and b agree by name and order.
bool share_params(const LocalRing& a, const LocalRing& b);

/// Local homomorphism R_Y -> R_X given by the image of every variable of the
/// target (parameters included) as a jet over the source variables.
struct GermMap {
  RingPtr source;
  RingPtr target;
  std::vector<Jet> components;

  std::size_t arity() const { return components.size(); }
  /// Components belonging to free target variables.
  std::vector<Jet> free_components() const;
};

/// Builds a map from images of the free target variables only, or of all
/// target variables. Parameter images default to the same-named source
/// parameter.
GermMap make_map(RingPtr source, RingPtr target, std::vector<Jet> components);
GermMap parse_map(RingPtr source, RingPtr target, const std::vector<std::string>& components);
GermMap identity_map(RingPtr ring);

struct ValidityReport {
  bool valid = true;
  std::string reason;
  /// Index of the violated target generator, when that is the reason.
  std::optional<std::size_t> generator;
};

ValidityReport validate_map(const GermMap& f);
/// g∘f for f: X -> Y and g: Y -> Z.
GermMap compose_maps(const GermMap& g, const GermMap& f);
/// Every component difference lies in J_X + m^d.
bool maps_equal_mod(const GermMap& f, const GermMap& g, int d);
/// Componentwise normal forms modulo J_X.
std::vector<Jet> normal_forms(const GermMap& f);

/// Ring with the parameter block removed and the parameters set to zero in
/// the ideal.
RingPtr central_ring(const RingPtr& ring);
GermMap central_fibre(const GermMap& f);

/// X × Y: variables of X followed by the free variables of Y (renamed on
/// clashes); parameters of Y are identified with those of X.
struct ProductRing {
  RingPtr ring;
  std::vector<std::size_t> x_index;  // source variable -> product index
  std::vector<std::size_t> y_index;  // target variable -> product index
  std::vector<std::size_t> y_free;   // product indices of free target variables
};

ProductRing make_product_ring(const RingPtr& x, const RingPtr& y);

/// Embeds a jet over Y into the product ring.
Jet y_to_product(const ProductRing& p, const Jet& j);
/// Embeds a jet over X into the product ring.
Jet x_to_product(const ProductRing& p, const Jet& j);

/// Linear part of substitution images on the listed variables: entry (i, j)
/// is the coefficient of variable vars[j] in images[vars[i]].
std::vector<std::vector<Scalar>> linear_part(const std::vector<Jet>& images,
                                             const std::vector<std::size_t>& vars);

}  // namespace germforge
