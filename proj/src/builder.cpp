#include "builder.hpp"

#include "germforge/errors.hpp"

namespace germforge::detail {

std::vector<Monomial> map_support(const LocalRing& r, int max_degree) {
  auto free = r.free_vars();
  std::vector<Monomial> out;
  for (int d = 1; d <= max_degree; ++d)
    for (const auto& m : monomials_of_degree(r.size(), d))
      if (m.degree_in(free) > 0) out.push_back(m);
  return out;
}

std::vector<std::size_t> param_positions(const LocalRing& a, const LocalRing& b) {
  std::vector<std::size_t> out;
  auto pa = a.param_vars(), pb = b.param_vars();
  if (pa.size() != pb.size()) throw StructuralError("parameter blocks differ");
  for (std::size_t k = 0; k < pa.size(); ++k) out.push_back(pb[k]);
  return out;
}

ProblemBuilder::ProblemBuilder(Field field, int trunc, int max_degree)
    : field_(field), trunc_(trunc), max_degree_(max_degree) {
  p_.field = field;
  p_.trunc = trunc;
}

std::size_t ProblemBuilder::add_unknown(const std::string& name, VarSetPtr vars,
                                        std::vector<Monomial> support, Jet seed, int nest_level,
                                        const std::string& block) {
  p_.unknowns.push_back(UnknownSpec{name, std::move(vars), std::move(support), nest_level,
                                    block.empty() ? name : block});
  p_.seed.push_back(std::move(seed));
  return p_.unknowns.size() - 1;
}

void ProblemBuilder::add_equation(const std::string& label, Expr e, VarSetPtr ambient,
                                  std::shared_ptr<const IdealJet> modulus, int max_degree) {
  if (modulus && modulus->is_zero()) modulus.reset();
  p_.equations.push_back(EquationSpec{label, std::move(e), std::move(ambient), std::move(modulus),
                                      std::min(max_degree, trunc_)});
}

std::shared_ptr<const IdealJet> ProblemBuilder::ideal_of(const RingPtr& r,
                                                         const std::vector<Jet>& extra) const {
  std::vector<Jet> gens = r->ideal().generators();
  gens.insert(gens.end(), extra.begin(), extra.end());
  return std::make_shared<const IdealJet>(r->vars(), field_, trunc_, std::move(gens));
}

std::size_t ProblemBuilder::add_vertex(const std::string& id, RingPtr src, RingPtr tgt,
                                       bool identity, bool invertible, bool target_side,
                                       const std::optional<std::vector<Jet>>& seed) {
  check_compatible_rings(*src, *tgt);
  VertexUnknown vu{id, src, tgt, identity, invertible, target_side, {}};
  auto sfree = src->free_vars(), tfree = tgt->free_vars();
  if (identity && sfree.size() != tfree.size())
    throw DomainError("identity constraint between rings of different dimension at " + id);
  if (!identity) {
    auto support = map_support(*src, max_degree_);
    for (std::size_t k = 0; k < tfree.size(); ++k) {
      Jet s = src->zero();
      if (seed) {
        s = (*seed)[tfree[k]];
        if (!same_variables(s.vars(), src->vars())) s = s.embed(src->vars());
        s = s.with_trunc(trunc_);
      } else if (k < sfree.size()) {
        s = src->var(sfree[k]);
      }
      std::string name = "Phi_" + id + "_" + tgt->vars()->name(tfree[k]);
      vu.unknown_ids.push_back(add_unknown(name, src->vars(), support, s, 1, "Phi_" + id));
    }
    if (invertible) {
      if (sfree.size() != tfree.size())
        throw DomainError("invertible map between rings of different dimension at " + id);
      std::vector<std::vector<CoefRef>> m;
      for (std::size_t k = 0; k < tfree.size(); ++k) {
        std::vector<CoefRef> row;
        for (auto l : sfree) row.push_back(CoefRef{vu.unknown_ids[k], Monomial::variable(l)});
        m.push_back(std::move(row));
      }
      p_.invertible.push_back(std::move(m));
    }
  }
  vertices_.push_back(std::move(vu));
  return vertices_.size() - 1;
}

void ProblemBuilder::add_base(RingPtr like, bool identity,
                              const std::optional<std::vector<Jet>>& seed) {
  std::vector<VariableBlock> blocks;
  for (const auto& b : like->vars()->blocks())
    if (b.parameter) blocks.push_back(b);
  if (blocks.empty()) return;
  auto vs = make_variables(blocks);
  base_ring_ = make_ring("base", vs, field_, trunc_);
  if (identity) return;
  std::vector<Monomial> support;
  for (int d = 1; d <= max_degree_; ++d)
    for (const auto& m : monomials_of_degree(vs->size(), d)) support.push_back(m);
  for (std::size_t k = 0; k < vs->size(); ++k) {
    Jet s = seed ? (*seed)[k].embed(vs).with_trunc(trunc_) : base_ring_->var(k);
    base_ids_.push_back(add_unknown("Phi_base_" + vs->name(k), vs, support, s, 0, "Phi_base"));
  }
}

std::vector<Expr> ProblemBuilder::images(std::size_t v, const std::vector<Expr>& src_args) const {
  const VertexUnknown& vu = vertices_[v];
  std::vector<Expr> out(vu.tgt->size());
  auto sfree = vu.src->free_vars(), tfree = vu.tgt->free_vars();
  for (std::size_t k = 0; k < tfree.size(); ++k)
    out[tfree[k]] = vu.identity ? src_args[sfree[k]] : e_call(vu.unknown_ids[k], src_args);
  auto tpar = vu.tgt->param_vars();
  auto spar = vu.src->param_vars();
  if (tpar.size() != spar.size()) throw StructuralError("parameter blocks differ at " + vu.id);
  std::vector<Expr> base_args;
  for (auto s : spar) base_args.push_back(src_args[s]);
  for (std::size_t k = 0; k < tpar.size(); ++k)
    out[tpar[k]] = base_ids_.empty() ? src_args[spar[k]] : e_call(base_ids_[k], base_args);
  return out;
}

void ProblemBuilder::add_ideal_preservation(std::size_t v) {
  const VertexUnknown& vu = vertices_[v];
  if (vu.identity && !has_base()) return;
  auto im = images(v, e_vars(vu.src->size()));
  auto mod = ideal_of(vu.src);
  const auto& gens = vu.tgt->ideal().generators();
  for (std::size_t g = 0; g < gens.size(); ++g)
    add_equation("ideal " + vu.id + " " + gens[g].to_string(), e_apply(gens[g], im),
                 vu.src->vars(), mod, trunc_);
}

namespace {

std::vector<Jet> parse_all(const RingPtr& r, const std::vector<std::string>& gens) {
  std::vector<Jet> out;
  for (const auto& g : gens) out.push_back(r->parse(g));
  return out;
}

bool is_maximal_ideal(const RingPtr& r, const std::vector<Jet>& gens) {
  IdealJet I(r->vars(), r->field(), r->trunc(), gens);
  for (const auto& g : gens)
    if (!g.constant_term().is_zero()) return false;
  for (auto i : r->free_vars())
    if (!I.member(r->var(i))) return false;
  return true;
}

}  // namespace

void ProblemBuilder::add_constraint(std::size_t v, const Constraint& c) {
  const VertexUnknown& vu = vertices_[v];
  using K = Constraint::Kind;
  if (vu.identity || c.kind == K::Identity || c.kind == K::Invertible || c.kind == K::FrozenBlock)
    return;
  auto sargs = e_vars(vu.src->size());
  auto im = images(v, sargs);
  auto sfree = vu.src->free_vars(), tfree = vu.tgt->free_vars();
  const std::string tag = to_string(c.kind) + " " + vu.id;
  switch (c.kind) {
    case K::IdealOffset: {
      if (sfree.size() != tfree.size())
        throw DomainError("ideal_offset needs matching dimensions at " + vu.id);
      auto mod = ideal_of(vu.src, parse_all(vu.src, c.ideal));
      for (std::size_t k = 0; k < tfree.size(); ++k)
        add_equation(tag, im[tfree[k]] - e_var(sfree[k]), vu.src->vars(), mod, trunc_);
      break;
    }
    case K::MapsSubgerm: {
      auto mod = ideal_of(vu.src, parse_all(vu.src, c.ideal_tilde));
      for (const auto& q : parse_all(vu.tgt, c.ideal))
        add_equation(tag, e_apply(q, im), vu.src->vars(), mod, trunc_);
      break;
    }
    case K::VanishInto: {
      auto mod = ideal_of(vu.src, parse_all(vu.src, c.ideal));
      for (std::size_t k = 0; k < tfree.size(); ++k)
        add_equation(tag, im[tfree[k]], vu.src->vars(), mod, trunc_);
      break;
    }
    case K::FilteredLevel: {
      if (c.level < 0) throw DomainError("negative filtration level");
      auto I_tgt = parse_all(vu.tgt, c.ideal);
      auto I_src = parse_all(vu.src, c.ideal);
      if (vu.target_side && (!vu.tgt->is_smooth() || !is_maximal_ideal(vu.tgt, I_tgt)))
        throw UnsupportedError(
            "filtered level on the target side needs a smooth target and I = m");
      auto mod = ideal_of(vu.src, power_of_ideal(I_src, c.level + 1));
      for (std::size_t g = 0; g < I_tgt.size(); ++g)
        add_equation(tag, e_apply(I_tgt[g], im) - e_const(I_src[g]), vu.src->vars(), mod, trunc_);
      break;
    }
    default:
      break;
  }
}

void ProblemBuilder::add_edge(std::size_t v, std::size_t w, const GermMap& f_tilde,
                              const GermMap& f, int max_degree, const std::string& label) {
  const VertexUnknown& vv = vertices_[v];
  const VertexUnknown& ww = vertices_[w];
  std::vector<Expr> ft;
  for (const auto& c : f_tilde.components) ft.push_back(e_const(c));
  auto lhs = images(w, ft);
  auto rhs_args = images(v, e_vars(vv.src->size()));
  auto mod = ideal_of(vv.src);
  for (auto j : ww.tgt->free_vars()) {
    Expr e = lhs[j] - e_apply(f.components[j], rhs_args);
    add_equation(label + " " + ww.tgt->vars()->name(j), e, vv.src->vars(), mod, max_degree);
  }
}

std::vector<Jet> ProblemBuilder::vertex_images(const std::vector<Jet>& values,
                                               std::size_t v) const {
  const VertexUnknown& vu = vertices_[v];
  std::vector<Jet> out(vu.tgt->size(), vu.src->zero());
  auto sfree = vu.src->free_vars(), tfree = vu.tgt->free_vars();
  for (std::size_t k = 0; k < tfree.size(); ++k)
    out[tfree[k]] = vu.identity ? vu.src->var(sfree[k]) : values[vu.unknown_ids[k]];
  auto tpar = vu.tgt->param_vars(), spar = vu.src->param_vars();
  auto base = base_images(values, vu.src);
  for (std::size_t k = 0; k < tpar.size(); ++k) out[tpar[k]] = base[k];
  return out;
}

std::vector<Jet> ProblemBuilder::base_images(const std::vector<Jet>& values,
                                             const RingPtr& src) const {
  std::vector<Jet> out;
  auto spar = src->param_vars();
  for (std::size_t k = 0; k < spar.size(); ++k) {
    if (base_ids_.empty()) {
      out.push_back(src->var(spar[k]));
    } else {
      std::vector<Jet> args;
      for (auto s : spar) args.push_back(src->var(s));
      out.push_back(values[base_ids_[k]].substitute(args));
    }
  }
  return out;
}

}  // namespace germforge::detail
