#pragma once

#include <string>
#include <vector>

#include "germforge/expr.hpp"

namespace germforge {

struct CoefRef {
  std::size_t unknown = 0;
  Monomial mono;
};

/// Unknown jets, equations in them, and invertibility requirements on
/// coefficient matrices (linear parts of automorphisms).
struct Problem {
  Field field;
  int trunc = 1;
  std::vector<UnknownSpec> unknowns;
  std::vector<Jet> seed;
  std::vector<EquationSpec> equations;
  std::vector<std::vector<std::vector<CoefRef>>> invertible;
};

struct EngineOptions {
  int max_newton = 8;
  /// Largest p^k enumerated when a stage fails over F_p.
  std::uint64_t enumeration_limit = 4096;
  /// Newton stops once a rational coefficient exceeds this many bits.
  std::size_t max_bits = 256;
};

struct StageLog {
  int order = 0;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  std::size_t rank = 0;
  std::string method;
};

enum class EngineOutcome { Success, Obstructed };

struct ResidualPart {
  std::string label;
  Jet residual;
};

struct EngineResult {
  EngineOutcome outcome = EngineOutcome::Success;
  std::vector<Jet> values;
  /// Failing order and the degree-order part of each nonzero residual.
  int order = 0;
  std::vector<ResidualPart> residual;
  /// The failing stage involved coefficients that must stay invertible.
  bool leading_stage = false;
  std::vector<StageLog> log;
};

EngineResult run_engine(const Problem& p, const EngineOptions& opts = {});

/// Normal forms of all equations at their own degree for the given values;
/// only nonzero residuals are listed.
std::vector<ResidualPart> residuals(const Problem& p, const std::vector<Jet>& values);

bool invertibility_holds(const Problem& p, const std::vector<Jet>& values);

}  // namespace germforge
