#pragma once

#include <optional>
#include <string>
#include <vector>

#include "germforge/constraints.hpp"
#include "germforge/engine.hpp"
#include "germforge/groups.hpp"

namespace germforge {

enum class Verdict { Success, Obstructed, SeedRequired };
std::string to_string(Verdict v);

/// Find g with apply(g, f) ≡ f̃ mod J_X + m^degree.
struct SolveRequest {
  GroupTag group = GroupTag::R;
  GermMap f;
  GermMap f_tilde;
  int degree = 2;
  std::vector<Constraint> constraints;
  std::optional<GroupElement> seed;
  EngineOptions engine;
};

struct SolveReport {
  Verdict verdict = Verdict::Success;
  GroupTag group = GroupTag::R;
  int degree = 0;
  /// Group element with apply(witness, f) = f̃.
  std::optional<GroupElement> witness;
  /// The same data as maps making the square commute:
  /// Φ_Y(f̃) = C(x, f(Φ_X)) with the unused pieces trivial.
  std::vector<Jet> phi_x;
  std::vector<Jet> phi_y;
  std::vector<Jet> contact;
  /// Obstruction data.
  int order = 0;
  std::vector<ResidualPart> residual;
  /// The obstruction refutes only the explored choice of leading terms.
  bool branch_qualified = false;
  std::string message;
  std::vector<StageLog> log;
};

SolveReport solve_equivalence(const SolveRequest& req);

/// Lowest m-adic order of the normal forms of the free components, or
/// D + 1 for the zero map.
int map_order(const GermMap& f);

/// Implicit-function system: unknown blocks and polynomial equations, each
/// holding modulo an ideal of its ambient ring.
struct IFEquation {
  std::string label;
  Expr expr;
  VarSetPtr ambient;
  std::vector<Jet> modulus;
  std::string modulus_name;
  int max_degree = 0;
};

struct IFSystem {
  GroupTag group = GroupTag::R;
  Field field;
  int trunc = 1;
  std::vector<UnknownSpec> unknowns;
  std::vector<IFEquation> equations;
  /// Variable supports of the nest levels, innermost first.
  std::vector<std::vector<std::string>> nest;
  /// Unknowns whose equations are linear (the cofactors).
  std::vector<std::size_t> auxiliary;

  std::string to_text() const;
  /// Nonzero equation residuals for the given unknown values.
  std::vector<ResidualPart> evaluate(const std::vector<Jet>& values) const;
};

IFSystem encode_ifs(GroupTag group, const GermMap& f, const GermMap& f_tilde);
/// Unknown values for encode_ifs(group, f, f̃) built from a solver witness,
/// with the cofactors computed by Taylor expansion.
std::vector<Jet> ifs_values(const IFSystem& sys, const SolveReport& report, const GermMap& f,
                            const GermMap& f_tilde);

struct TangentReport {
  GroupTag group = GroupTag::R;
  int k = 0;
  /// Echelon basis of the tangent image inside the map space, as component
  /// tuples (normal forms modulo J_X).
  std::vector<std::vector<Jet>> basis;
  std::size_t dimension = 0;
  /// Dimension of the image of T in the k-jet space.
  std::size_t slice_dimension = 0;
  /// m^{k+1}·R^m ⊆ T + m^{D+1}.
  bool determined = false;
  std::size_t missing = 0;
};

TangentReport tangent_space(GroupTag group, const GermMap& f, int k);

struct ProbeEntry {
  int degree = 0;
  SolveReport report;
};

struct ProbeReport {
  std::vector<ProbeEntry> entries;
  /// Largest scheduled degree reached with success (0 if none).
  int max_achieved = 0;
  /// Degree and order of the first obstruction, if any.
  std::optional<std::pair<int, int>> first_obstruction;
};

ProbeReport probe_orbit_closure(GroupTag group, const GermMap& f, const GermMap& f_tilde,
                                const std::vector<int>& schedule,
                                const std::vector<Constraint>& constraints = {});

}  // namespace germforge
