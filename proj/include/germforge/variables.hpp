#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace germforge {

/// Upper bound on the number of variables of one ring; exponents of a
/// monomial are stored inline.
inline constexpr std::size_t kMaxVariables = 16;

struct VariableBlock {
  std::string name;
  std::vector<std::string> variables;
  /// Parameter blocks (the t-block of an unfolding) are fixed by every
  /// automorphism.
  bool parameter = false;
};

/// Ordered variables partitioned into blocks. Variable indices run through
/// the blocks in block order, then in declaration order; this is also the
/// lexicographic tie-break of the monomial order.
class VariableSet {
 public:
  explicit VariableSet(std::vector<VariableBlock> blocks);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index_of(const std::string& name) const;
  std::size_t block_of(std::size_t i) const { return block_of_.at(i); }
  bool is_parameter(std::size_t i) const { return blocks_[block_of_.at(i)].parameter; }
  const std::vector<VariableBlock>& blocks() const { return blocks_; }

  /// Indices of all non-parameter variables, in order.
  std::vector<std::size_t> free_indices() const;
  std::vector<std::size_t> parameter_indices() const;

  friend bool operator==(const VariableSet& a, const VariableSet& b);

 private:
  std::vector<VariableBlock> blocks_;
  std::vector<std::string> names_;
  std::vector<std::size_t> block_of_;
};

using VarSetPtr = std::shared_ptr<const VariableSet>;

VarSetPtr make_variables(std::vector<VariableBlock> blocks);
/// Single block named "x" holding the given variables.
VarSetPtr make_variables(const std::vector<std::string>& names);

/// Same pointer or structurally equal.
bool same_variables(const VarSetPtr& a, const VarSetPtr& b);

}  // namespace germforge
