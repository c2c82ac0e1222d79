#include "germforge/expr.hpp"

#include <functional>
#include <unordered_set>

namespace germforge {

namespace {

Expr make(ExprKind kind, std::vector<Expr> args, std::size_t index = 0, Jet constant = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->args = std::move(args);
  n->index = index;
  n->constant = std::move(constant);
  return n;
}

}  // namespace

Expr e_const(const Jet& j) { return make(ExprKind::Const, {}, 0, j); }
Expr e_var(std::size_t i) { return make(ExprKind::Var, {}, i); }
Expr e_call(std::size_t unknown, std::vector<Expr> args) {
  return make(ExprKind::Call, std::move(args), unknown);
}
Expr e_apply(const Jet& p, std::vector<Expr> args) {
  if (args.size() != p.vars()->size()) throw StructuralError("apply needs one argument per variable");
  return make(ExprKind::Apply, std::move(args), 0, p);
}
Expr operator+(const Expr& a, const Expr& b) { return make(ExprKind::Add, {a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return make(ExprKind::Sub, {a, b}); }
Expr operator*(const Expr& a, const Expr& b) { return make(ExprKind::Mul, {a, b}); }

std::vector<Expr> e_vars(std::size_t n) {
  std::vector<Expr> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(e_var(i));
  return out;
}

Evaluator::Evaluator(const std::vector<Jet>& values, VarSetPtr ambient, Field field, int trunc)
    : values_(values), ambient_(std::move(ambient)), field_(field), trunc_(trunc) {}

const Jet& Evaluator::value_of_unknown(std::size_t u) {
  auto it = truncated_values_.find(u);
  if (it != truncated_values_.end()) return it->second;
  return truncated_values_.emplace(u, values_.at(u).with_trunc(trunc_)).first->second;
}

const Jet& Evaluator::eval(const Expr& e) {
  auto it = memo_.find(e.get());
  if (it != memo_.end()) return it->second;
  Jet v;
  switch (e->kind) {
    case ExprKind::Const:
      v = e->constant.with_trunc(trunc_);
      if (!same_variables(v.vars(), ambient_)) v = v.embed(ambient_);
      break;
    case ExprKind::Var:
      v = Jet::variable(ambient_, field_, trunc_, e->index);
      break;
    case ExprKind::Add:
      v = eval(e->args[0]) + eval(e->args[1]);
      break;
    case ExprKind::Sub:
      v = eval(e->args[0]) - eval(e->args[1]);
      break;
    case ExprKind::Mul:
      v = eval(e->args[0]) * eval(e->args[1]);
      break;
    case ExprKind::Call:
    case ExprKind::Apply: {
      std::vector<Jet> im;
      for (const auto& a : e->args) im.push_back(eval(a));
      const Jet& f = e->kind == ExprKind::Call ? value_of_unknown(e->index) : e->constant;
      if (im.empty()) {
        v = Jet::constant(ambient_, field_, trunc_, f.constant_term());
      } else {
        v = f.substitute(im);
      }
      break;
    }
  }
  return memo_.emplace(e.get(), std::move(v)).first->second;
}

bool Evaluator::depends(const ExprNode* n) {
  auto it = deps_.find(n);
  if (it != deps_.end()) return it->second;
  bool d = n->kind == ExprKind::Call;
  for (const auto& a : n->args)
    if (depends(a.get())) d = true;
  deps_[n] = d;
  return d;
}

std::vector<Evaluator::Occurrence> Evaluator::linearize(const Expr& root) {
  eval(root);
  std::vector<Occurrence> out;
  if (!depends(root.get())) return out;
  // Post-order over nodes depending on unknowns.
  std::vector<const ExprNode*> order;
  std::unordered_set<const ExprNode*> seen;
  std::unordered_map<const ExprNode*, Expr> handles;
  std::function<void(const Expr&)> visit = [&](const Expr& e) {
    if (!depends(e.get()) || seen.count(e.get())) return;
    seen.insert(e.get());
    handles[e.get()] = e;
    for (const auto& a : e->args) visit(a);
    order.push_back(e.get());
  };
  visit(root);
  std::unordered_map<const ExprNode*, Jet> adj;
  adj.emplace(root.get(), Jet::constant(ambient_, field_, trunc_, Scalar::one(field_)));
  auto add_adj = [&](const Expr& target, const Jet& a) {
    if (!depends(target.get()) || a.is_zero()) return;
    auto [it, inserted] = adj.try_emplace(target.get(), a);
    if (!inserted) it->second += a;
  };
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const ExprNode* n = *it;
    auto ai = adj.find(n);
    if (ai == adj.end() || ai->second.is_zero()) continue;
    const Jet A = ai->second;
    switch (n->kind) {
      case ExprKind::Add:
        add_adj(n->args[0], A);
        add_adj(n->args[1], A);
        break;
      case ExprKind::Sub:
        add_adj(n->args[0], A);
        add_adj(n->args[1], -A);
        break;
      case ExprKind::Mul:
        add_adj(n->args[0], A * eval(n->args[1]));
        add_adj(n->args[1], A * eval(n->args[0]));
        break;
      case ExprKind::Call:
      case ExprKind::Apply: {
        std::vector<Jet> im;
        for (const auto& a : n->args) im.push_back(eval(a));
        const Jet& f = n->kind == ExprKind::Call ? value_of_unknown(n->index) : n->constant;
        for (std::size_t i = 0; i < n->args.size(); ++i) {
          if (!depends(n->args[i].get())) continue;
          add_adj(n->args[i], A * f.derivative(i).substitute(im));
        }
        if (n->kind == ExprKind::Call) out.push_back(Occurrence{n->index, A, std::move(im)});
        break;
      }
      default:
        break;
    }
  }
  return out;
}

std::string expr_to_string(const Expr& e, const VariableSet& ambient,
                           const std::vector<UnknownSpec>& unknowns) {
  auto args_str = [&](const ExprNode& n) {
    std::string s;
    for (std::size_t i = 0; i < n.args.size(); ++i) {
      if (i) s += ", ";
      s += expr_to_string(n.args[i], ambient, unknowns);
    }
    return s;
  };
  switch (e->kind) {
    case ExprKind::Const:
      return "(" + e->constant.to_string() + ")";
    case ExprKind::Var:
      return ambient.name(e->index);
    case ExprKind::Add:
      return expr_to_string(e->args[0], ambient, unknowns) + " + " +
             expr_to_string(e->args[1], ambient, unknowns);
    case ExprKind::Sub:
      return expr_to_string(e->args[0], ambient, unknowns) + " - (" +
             expr_to_string(e->args[1], ambient, unknowns) + ")";
    case ExprKind::Mul:
      return "(" + expr_to_string(e->args[0], ambient, unknowns) + ")*(" +
             expr_to_string(e->args[1], ambient, unknowns) + ")";
    case ExprKind::Call:
      return unknowns.at(e->index).name + "(" + args_str(*e) + ")";
    case ExprKind::Apply: {
      std::string s = "(" + e->constant.to_string() + ")[";
      const auto& vs = *e->constant.vars();
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        if (i) s += ", ";
        s += vs.name(i) + " := " + expr_to_string(e->args[i], ambient, unknowns);
      }
      return s + "]";
    }
  }
  return "?";
}

}  // namespace germforge
