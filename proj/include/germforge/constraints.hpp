#pragma once

#include <string>
#include <vector>

#include "germforge/jet.hpp"

namespace germforge {

/// Extra conditions on an unknown map Φ: X̃ -> X (images of the X variables
/// as jets over X̃).
struct Constraint {
  enum class Kind {
    Identity,       // Φ = id
    IdealOffset,    // Φ(x) - x ∈ 𝔞 (ideal over X̃)
    MapsSubgerm,    // Φ^♯(I_Z) ⊆ I_Z̃ (ideal over X, ideal over X̃)
    VanishInto,     // Φ^♯(m) ⊆ 𝔞̃ (ideal over X̃)
    Invertible,     // invertible linear part
    FilteredLevel,  // q(Φ) - q ∈ I^{j+1} for the generators q of I
    FrozenBlock,    // parameters fixed; always in force
  };

  Kind kind = Kind::Invertible;
  /// Which unknown the constraint applies to: "X"/"Y" in a solve, a vertex
  /// id in a quiver.
  std::string target;
  /// Generators as text, parsed against the relevant ring when compiled.
  std::vector<std::string> ideal;
  std::vector<std::string> ideal_tilde;
  int level = 0;
};

std::string to_string(Constraint::Kind kind);
Constraint::Kind parse_constraint_kind(const std::string& text);

}  // namespace germforge
