#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "germforge/ideal.hpp"

namespace germforge {

enum class ExprKind { Const, Var, Add, Sub, Mul, Call, Apply };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

/// Polynomial expression over an ambient ring. Call(u, args) evaluates the
/// unknown jet u at args; Apply(P, args) does the same for a known jet P.
struct ExprNode {
  ExprKind kind = ExprKind::Const;
  Jet constant;
  std::size_t index = 0;
  std::vector<Expr> args;
};

Expr e_const(const Jet& j);
Expr e_var(std::size_t i);
Expr e_call(std::size_t unknown, std::vector<Expr> args);
Expr e_apply(const Jet& p, std::vector<Expr> args);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);

/// Variables of a ring as Var expressions.
std::vector<Expr> e_vars(std::size_t n);

/// An unknown jet: its own variables and the monomials it may use.
struct UnknownSpec {
  std::string name;
  VarSetPtr vars;
  std::vector<Monomial> support;
  /// Position in the nest chain of supports (1 = innermost).
  int nest_level = 1;
  /// Unknowns sharing a block are printed together.
  std::string block;
  /// Lower values are preferred as pivots when a linear system leaves a choice.
  int priority = 0;
};

/// expr ≡ 0 modulo the ideal + m^{max_degree+1} of the ambient ring.
struct EquationSpec {
  std::string label;
  Expr expr;
  VarSetPtr ambient;
  std::shared_ptr<const IdealJet> modulus;  // may be null: zero ideal
  int max_degree = 0;
};

/// Evaluates expressions at one truncation degree with fixed unknown values.
class Evaluator {
 public:
  Evaluator(const std::vector<Jet>& values, VarSetPtr ambient, Field field, int trunc);

  const Jet& eval(const Expr& e);

  /// One use of an unknown inside an expression together with the jet that
  /// multiplies its variation: d(expr) = Σ adjoint·δu(args).
  struct Occurrence {
    std::size_t unknown;
    Jet adjoint;
    std::vector<Jet> args;
  };
  /// Reverse-mode sweep of e; requires eval(e) first (done internally).
  std::vector<Occurrence> linearize(const Expr& e);

  int trunc() const { return trunc_; }

 private:
  const Jet& value_of_unknown(std::size_t u);
  bool depends(const ExprNode* n);

  const std::vector<Jet>& values_;
  VarSetPtr ambient_;
  Field field_;
  int trunc_;
  std::unordered_map<const ExprNode*, Jet> memo_;
  std::unordered_map<const ExprNode*, bool> deps_;
  std::unordered_map<std::size_t, Jet> truncated_values_;
};

/// Infix rendering with unknown names substituted for Call nodes.
std::string expr_to_string(const Expr& e, const VariableSet& ambient,
                           const std::vector<UnknownSpec>& unknowns);

}  // namespace germforge
