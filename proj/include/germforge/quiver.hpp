#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "germforge/solver.hpp"

namespace germforge {

/// Edge v -> w carrying a map X_v -> X_w.
struct QuiverEdge {
  std::string from;
  std::string to;
  GermMap map;
};

/// A quiver of map germs on a directed graph. Vertex ids are kept sorted.
struct QuiverSpec {
  std::map<std::string, RingPtr> vertices;
  std::vector<QuiverEdge> edges;
};

struct QuiverValidity {
  bool valid = true;
  /// "loop", "cycle", "disconnected", "multiple-outgoing", "no-root",
  /// "too-small", "unknown-vertex", "edge-map" or empty.
  std::string reason;
  std::string detail;
  std::string root;
};

QuiverValidity validate_quiver(const QuiverSpec& q);

struct VertexGrades {
  std::string root;
  std::map<std::string, int> grade;
  /// Vertex sets of Γ_{<=0} ⊂ Γ_{<=1} ⊂ ...
  std::vector<std::vector<std::string>> nest;
};

/// Throws StructuralError for invalid quivers.
VertexGrades grade_vertices(const QuiverSpec& q);

/// Vertices whose path to the root passes through v (v excluded), in
/// breadth-first order by grade, ties by id.
std::vector<std::string> descendants(const QuiverSpec& q, const std::string& v);

/// Unknown maps Φ_v: X̃_v -> X_v with Φ_w ∘ f̃_wv = f_wv ∘ Φ_v on every edge.
struct QuiverProblem {
  QuiverSpec source;  // X̃_v, f̃
  QuiverSpec target;  // X_v, f
  std::map<std::string, std::vector<Constraint>> constraints;
  /// Initial images of Φ_v (one per variable of X_v, over X̃_v).
  std::map<std::string, std::vector<Jet>> seed;
};

struct QuiverReport {
  Verdict verdict = Verdict::Success;
  int degree = 0;
  std::map<std::string, std::vector<Jet>> phi;
  /// Base substitution t -> Φ_k(t̃), one image per parameter.
  std::vector<Jet> base;
  int order = 0;
  std::vector<ResidualPart> residual;
  std::string message;
  std::vector<StageLog> log;
};

QuiverReport solve_quiver(const QuiverProblem& p, int degree, const EngineOptions& opts = {});

/// Joint solve with an unknown base substitution of the shared parameter
/// block; freeze_base keeps Φ_k = id.
QuiverReport solve_with_base_change(const QuiverProblem& p, int degree, bool freeze_base = false,
                                    const std::optional<std::vector<Jet>>& base_seed = std::nullopt,
                                    const EngineOptions& opts = {});

/// All rectangles commute modulo J̃_v + m^degree.
/// Parameter images of Φ_v carry the base substitution.
bool check_rectangles(const QuiverProblem& p, const std::map<std::string, std::vector<Jet>>& phi,
                      int degree);

/// Ring carrying the variables of every vertex of a quiver: free variable x
/// of vertex v is named x_v; the parameter block is shared.
struct CombinedRing {
  RingPtr ring;
  std::map<std::string, std::vector<std::size_t>> index;  // vertex var -> combined index
};

CombinedRing combined_ring(const QuiverSpec& source);

/// Non-pure solution: Ψ_v over the combined ring, one jet per variable of X_v.
struct NonPureSolution {
  CombinedRing ring;
  std::map<std::string, std::vector<Jet>> psi;
};

/// Edges whose condition Ψ_w - f_wv(Ψ_v) ∈ (x̃_w - f̃_wv(x̃_v)) + ΣJ̃ + m^{D+1}
/// fails.
std::vector<std::string> failing_edges(const QuiverProblem& p, const NonPureSolution& s);

struct PurifyStep {
  std::string description;
  bool edges_hold = true;
};

struct PurifyResult {
  std::map<std::string, std::vector<Jet>> phi;  // pure, over X̃_v
  std::vector<PurifyStep> steps;
};

/// The specialization algorithm turning a non-pure solution into a pure one.
/// Throws DomainError if the input violates an edge condition or the nest.
PurifyResult purify(const QuiverProblem& p, const NonPureSolution& s);

/// f_t ≡ g_t·(f_o + Σ c_k(t) v_k) mod m^degree for g_t in R or LR.
struct NormalFormReport {
  Verdict verdict = Verdict::Success;
  std::vector<Jet> coefficients;  // c_k over the parameters
  std::vector<Jet> phi_x;
  std::vector<Jet> phi_y;
  int order = 0;
  std::vector<ResidualPart> residual;
  std::string message;
};

NormalFormReport unfolding_normal_form(GroupTag group, const GermMap& f_t,
                                       const std::vector<std::vector<Jet>>& basis, int degree,
                                       const EngineOptions& opts = {});

}  // namespace germforge
