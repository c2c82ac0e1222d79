#include "germforge/variables.hpp"

#include <set>

#include "germforge/errors.hpp"

namespace germforge {

VariableSet::VariableSet(std::vector<VariableBlock> blocks) : blocks_(std::move(blocks)) {
  std::set<std::string> seen;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (const auto& v : blocks_[b].variables) {
      if (v.empty()) throw StructuralError("empty variable name");
      if (!seen.insert(v).second)
        throw StructuralError("duplicate variable name '" + v + "'");
      names_.push_back(v);
      block_of_.push_back(b);
    }
  }
  if (names_.size() > kMaxVariables)
    throw UnsupportedError("at most " + std::to_string(kMaxVariables) +
                           " variables per ring are supported");
}

std::optional<std::size_t> VariableSet::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::vector<std::size_t> VariableSet::free_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (!is_parameter(i)) out.push_back(i);
  return out;
}

std::vector<std::size_t> VariableSet::parameter_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (is_parameter(i)) out.push_back(i);
  return out;
}

bool operator==(const VariableSet& a, const VariableSet& b) {
  if (a.names_ != b.names_ || a.blocks_.size() != b.blocks_.size()) return false;
  for (std::size_t i = 0; i < a.blocks_.size(); ++i) {
    if (a.blocks_[i].name != b.blocks_[i].name ||
        a.blocks_[i].parameter != b.blocks_[i].parameter ||
        a.blocks_[i].variables != b.blocks_[i].variables)
      return false;
  }
  return true;
}

VarSetPtr make_variables(std::vector<VariableBlock> blocks) {
  return std::make_shared<const VariableSet>(std::move(blocks));
}

VarSetPtr make_variables(const std::vector<std::string>& names) {
  return make_variables({VariableBlock{"x", names, false}});
}

bool same_variables(const VarSetPtr& a, const VarSetPtr& b) {
  return a == b || (a && b && *a == *b);
}

}  // namespace germforge
