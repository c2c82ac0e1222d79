#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "germforge/quiver.hpp"

namespace germforge {

struct QuiverDecl {
  std::vector<std::pair<std::string, std::string>> vertices;  // id, ring name
  struct Edge {
    std::string from;
    std::string to;
    std::string map;
  };
  std::vector<Edge> edges;
  std::vector<Constraint> constraints;  // target = vertex id
};

struct ElementDecl {
  std::string source;
  std::string target;
  GroupElement element;
};

/// Per-vertex images Φ_v of the free target variables from quiver `source` to
/// quiver `target`. Non-pure solutions live over the combined ring of the
/// source quiver.
struct SolutionDecl {
  std::string source;
  std::string target;
  bool pure = true;
  std::map<std::string, std::vector<Jet>> phi;
  std::vector<Jet> base;
};

struct Workspace {
  std::optional<Field> field;
  std::map<std::string, RingPtr> rings;
  std::map<std::string, GermMap> maps;
  std::map<std::string, QuiverDecl> quivers;
  std::map<std::string, ElementDecl> elements;
  std::map<std::string, SolutionDecl> solutions;
  /// (keyword, name) in declaration order.
  std::vector<std::pair<std::string, std::string>> order;

  const RingPtr& ring(const std::string& name) const;
  const GermMap& map(const std::string& name) const;
  const QuiverDecl& quiver(const std::string& name) const;
  const ElementDecl& element(const std::string& name) const;
  const SolutionDecl& solution(const std::string& name) const;

  QuiverSpec quiver_spec(const std::string& name) const;
  /// Source and target quivers must have the same vertex ids and edges.
  /// Constraints are taken from both declarations.
  QuiverProblem quiver_problem(const std::string& source, const std::string& target) const;
  /// Full images of a pure solution (parameters sent to the base images).
  std::map<std::string, std::vector<Jet>> solution_phi(const std::string& name) const;
  NonPureSolution nonpure(const std::string& name) const;
};

Workspace parse_workspace(const std::string& text);
std::string print_workspace(const Workspace& ws);

/// `<variant> [args]` as in a quiver constraint line, e.g. "identity",
/// "ideal_offset [ x^2 ]", "filtered_level 1 [ x ]".
Constraint parse_constraint(const std::string& target, const std::string& text);
std::string print_constraint(const Constraint& c);

std::string print_ring(const std::string& name, const RingPtr& r);
std::string print_map(const std::string& name, const std::string& source,
                      const std::string& target, const GermMap& f);
std::string print_element(const std::string& name, const ElementDecl& e);
std::string print_solution(const std::string& name, const SolutionDecl& s);

/// Automorphism / map images from the free components, parameters fixed.
std::vector<Jet> with_fixed_params(const RingPtr& source, const RingPtr& target,
                                   std::vector<Jet> free_images);

}  // namespace germforge
