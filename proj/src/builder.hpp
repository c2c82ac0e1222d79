#pragma once

#include <optional>
#include <string>
#include <vector>

#include "germforge/constraints.hpp"
#include "germforge/engine.hpp"
#include "germforge/germs.hpp"

namespace germforge::detail {

/// Unknown map Φ_v: X̃_v -> X_v of a morphism system. Free variables of X_v
/// get unknown images over X̃_v; parameters go to the base map (or stay).
struct VertexUnknown {
  std::string id;
  RingPtr src;  // X̃_v
  RingPtr tgt;  // X_v
  bool identity = false;
  bool invertible = false;
  bool target_side = false;
  std::vector<std::size_t> unknown_ids;  // per free variable of tgt
};

class ProblemBuilder {
 public:
  ProblemBuilder(Field field, int trunc, int max_degree);

  Problem& problem() { return p_; }
  const Problem& problem() const { return p_; }
  int max_degree() const { return max_degree_; }

  std::size_t add_unknown(const std::string& name, VarSetPtr vars, std::vector<Monomial> support,
                          Jet seed, int nest_level = 1, const std::string& block = "");
  void add_equation(const std::string& label, Expr e, VarSetPtr ambient,
                    std::shared_ptr<const IdealJet> modulus, int max_degree);

  /// Adds Φ_v. A seed gives the images of every variable of tgt over src.
  std::size_t add_vertex(const std::string& id, RingPtr src, RingPtr tgt, bool identity,
                         bool invertible, bool target_side,
                         const std::optional<std::vector<Jet>>& seed = std::nullopt);
  VertexUnknown& vertex(std::size_t v) { return vertices_[v]; }
  const VertexUnknown& vertex(std::size_t v) const { return vertices_[v]; }
  std::size_t vertex_count() const { return vertices_.size(); }

  /// Unknown base map t -> Φ_k(t̃) shared by all vertices.
  void add_base(RingPtr like, bool identity, const std::optional<std::vector<Jet>>& seed);
  bool has_base() const { return !base_ids_.empty(); }
  const std::vector<std::size_t>& base_ids() const { return base_ids_; }
  const RingPtr& base_ring() const { return base_ring_; }

  /// Expressions for the images of the variables of tgt(v), given
  /// expressions for the variables of src(v) (in src order).
  std::vector<Expr> images(std::size_t v, const std::vector<Expr>& src_args) const;

  /// Ideal-preservation equations q(Φ_v) ∈ J̃_v.
  void add_ideal_preservation(std::size_t v);
  void add_constraint(std::size_t v, const Constraint& c);
  /// Φ_w(f̃(x̃)) - f(Φ_v(x̃)) ∈ J̃_v for an edge v -> w.
  void add_edge(std::size_t v, std::size_t w, const GermMap& f_tilde, const GermMap& f,
                int max_degree, const std::string& label);

  /// Images of Φ_v as jets over src(v), one per tgt(v) variable.
  std::vector<Jet> vertex_images(const std::vector<Jet>& values, std::size_t v) const;
  /// Base map images (over the parameters of src), one per parameter.
  std::vector<Jet> base_images(const std::vector<Jet>& values, const RingPtr& src) const;

  std::shared_ptr<const IdealJet> ideal_of(const RingPtr& r,
                                           const std::vector<Jet>& extra = {}) const;

 private:
  Field field_;
  int trunc_;
  int max_degree_;
  Problem p_;
  std::vector<VertexUnknown> vertices_;
  std::vector<std::size_t> base_ids_;
  RingPtr base_ring_;  // parameters only
};

/// Monomials of degree 1..max in the variables of r, excluding those built
/// from parameters alone.
std::vector<Monomial> map_support(const LocalRing& r, int max_degree);
/// Position of each parameter name of a within b.
std::vector<std::size_t> param_positions(const LocalRing& a, const LocalRing& b);

}  // namespace germforge::detail
