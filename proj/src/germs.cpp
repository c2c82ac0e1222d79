#include "germforge/germs.hpp"

#include <set>

namespace germforge {

LocalRing::LocalRing(std::string name, VarSetPtr vars, Field field, int trunc,
                     std::vector<Jet> generators)
    : name_(std::move(name)), vars_(vars), field_(field), trunc_(trunc),
      ideal_(vars, field, trunc, [&] {
        for (auto& g : generators) {
          g = g.embed(vars).with_trunc(trunc);
          if (!g.constant_term().is_zero())
            throw DomainError("ideal generator outside the maximal ideal");
        }
        return generators;
      }()) {
  if (trunc < 1) throw DomainError("truncation degree must be at least 1");
}

RingPtr LocalRing::with_ideal(const std::vector<Jet>& generators, const std::string& name) const {
  return make_ring(name.empty() ? name_ : name, vars_, field_, trunc_, generators);
}

RingPtr LocalRing::with_trunc(int trunc) const {
  return make_ring(name_, vars_, field_, trunc, ideal_.generators());
}

RingPtr make_ring(std::string name, VarSetPtr vars, Field field, int trunc,
                  std::vector<Jet> generators) {
  return std::make_shared<const LocalRing>(std::move(name), std::move(vars), field, trunc,
                                           std::move(generators));
}

RingPtr make_ring(std::string name, const std::vector<std::string>& vars, Field field,
                  int trunc, const std::vector<std::string>& ideal,
                  const std::vector<std::string>& params) {
  std::vector<VariableBlock> blocks{VariableBlock{"x", vars, false}};
  if (!params.empty()) blocks.push_back(VariableBlock{"t", params, true});
  auto vs = make_variables(blocks);
  std::vector<Jet> gens;
  for (const auto& s : ideal) gens.push_back(parse_jet(s, vs, field, trunc));
  return make_ring(std::move(name), vs, field, trunc, std::move(gens));
}

void check_compatible_rings(const LocalRing& a, const LocalRing& b) {
  if (a.field() != b.field()) throw StructuralError("rings over different fields");
  if (a.trunc() != b.trunc()) throw StructuralError("rings with different truncation degrees");
  if (!share_params(a, b)) throw StructuralError("rings with different parameter blocks");
}

bool share_params(const LocalRing& a, const LocalRing& b) {
  auto pa = a.param_vars(), pb = b.param_vars();
  if (pa.size() != pb.size()) return false;
  for (std::size_t i = 0; i < pa.size(); ++i)
    if (a.vars()->name(pa[i]) != b.vars()->name(pb[i])) return false;
  return true;
}

std::vector<Jet> GermMap::free_components() const {
  std::vector<Jet> out;
  for (auto i : target->free_vars()) out.push_back(components[i]);
  return out;
}

GermMap make_map(RingPtr source, RingPtr target, std::vector<Jet> components) {
  check_compatible_rings(*source, *target);
  for (auto& c : components) {
    if (!same_variables(c.vars(), source->vars())) c = c.embed(source->vars());
    c = c.with_trunc(source->trunc());
  }
  auto free = target->free_vars();
  if (components.size() == free.size() && free.size() != target->size()) {
    std::vector<Jet> full(target->size(), source->zero());
    for (std::size_t k = 0; k < free.size(); ++k) full[free[k]] = components[k];
    for (auto i : target->param_vars()) {
      auto j = source->vars()->index_of(target->vars()->name(i));
      full[i] = source->var(*j);
    }
    components = std::move(full);
  }
  if (components.size() != target->size())
    throw StructuralError("map needs one component per target variable");
  return GermMap{std::move(source), std::move(target), std::move(components)};
}

GermMap parse_map(RingPtr source, RingPtr target, const std::vector<std::string>& components) {
  std::vector<Jet> comps;
  for (const auto& s : components) comps.push_back(source->parse(s));
  return make_map(std::move(source), std::move(target), std::move(comps));
}

GermMap identity_map(RingPtr ring) {
  std::vector<Jet> comps;
  for (std::size_t i = 0; i < ring->size(); ++i) comps.push_back(ring->var(i));
  return GermMap{ring, ring, std::move(comps)};
}

ValidityReport validate_map(const GermMap& f) {
  check_compatible_rings(*f.source, *f.target);
  if (f.components.size() != f.target->size())
    return {false, "wrong number of components", std::nullopt};
  for (std::size_t i = 0; i < f.components.size(); ++i) {
    if (!f.components[i].constant_term().is_zero())
      return {false, "component for '" + f.target->vars()->name(i) +
                         "' has a nonzero constant term",
              std::nullopt};
  }
  for (auto i : f.target->param_vars()) {
    auto j = f.source->vars()->index_of(f.target->vars()->name(i));
    if (!j || f.components[i] != f.source->var(*j))
      return {false, "parameter '" + f.target->vars()->name(i) + "' is not fixed",
              std::nullopt};
  }
  const auto& gens = f.target->ideal().generators();
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (!f.source->member(gens[g].substitute(f.components)))
      return {false, "generator " + gens[g].to_string() + " does not map into the source ideal",
              g};
  }
  return {};
}

GermMap compose_maps(const GermMap& g, const GermMap& f) {
  if (!same_variables(g.source->vars(), f.target->vars()) ||
      g.source->ideal().generators().size() != f.target->ideal().generators().size())
    throw StructuralError("composed maps do not share the middle ring");
  std::vector<Jet> comps;
  for (const auto& c : g.components) comps.push_back(c.substitute(f.components));
  return GermMap{f.source, g.target, std::move(comps)};
}

bool maps_equal_mod(const GermMap& f, const GermMap& g, int d) {
  if (f.components.size() != g.components.size())
    throw StructuralError("maps with different targets");
  if (d > f.source->trunc() + 1) throw DomainError("comparison degree above D+1");
  for (std::size_t i = 0; i < f.components.size(); ++i)
    if (!f.source->ideal().normal_form_at(f.components[i] - g.components[i], d - 1).is_zero())
      return false;
  return true;
}

std::vector<Jet> normal_forms(const GermMap& f) {
  std::vector<Jet> out;
  for (const auto& c : f.components) out.push_back(f.source->normal_form(c));
  return out;
}

RingPtr central_ring(const RingPtr& ring) {
  if (!ring->has_params()) return ring;
  std::vector<VariableBlock> blocks;
  for (const auto& b : ring->vars()->blocks())
    if (!b.parameter) blocks.push_back(b);
  auto vs = make_variables(blocks);
  std::vector<Jet> gens;
  for (const auto& q : ring->ideal().generators())
    gens.push_back(q.zero_variables(ring->param_vars()).embed(vs));
  return make_ring(ring->name(), vs, ring->field(), ring->trunc(), std::move(gens));
}

GermMap central_fibre(const GermMap& f) {
  if (!share_params(*f.source, *f.target))
    throw StructuralError("source and target must share the parameter block");
  RingPtr x = central_ring(f.source), y = central_ring(f.target);
  std::vector<Jet> comps;
  for (auto i : f.target->free_vars())
    comps.push_back(f.components[i].zero_variables(f.source->param_vars()).embed(x->vars()));
  return GermMap{x, y, std::move(comps)};
}

ProductRing make_product_ring(const RingPtr& x, const RingPtr& y) {
  check_compatible_rings(*x, *y);
  std::set<std::string> used(x->vars()->names().begin(), x->vars()->names().end());
  std::vector<VariableBlock> blocks = x->vars()->blocks();
  std::vector<std::string> ynames;
  std::map<std::string, std::string> rename;
  for (auto j : y->free_vars()) {
    std::string n = y->vars()->name(j);
    std::string m = n;
    while (used.count(m)) m += "_y";
    used.insert(m);
    rename[n] = m;
    ynames.push_back(m);
  }
  blocks.push_back(VariableBlock{"y", ynames, false});
  if (ynames.empty()) blocks.pop_back();
  auto vs = make_variables(blocks);

  ProductRing p;
  for (std::size_t i = 0; i < x->size(); ++i) p.x_index.push_back(i);
  p.y_index.resize(y->size());
  for (std::size_t j = 0; j < y->size(); ++j) {
    const std::string& n = y->vars()->name(j);
    p.y_index[j] = y->vars()->is_parameter(j) ? *vs->index_of(n) : *vs->index_of(rename[n]);
  }
  for (auto j : y->free_vars()) p.y_free.push_back(p.y_index[j]);

  std::vector<Jet> gens;
  for (const auto& q : x->ideal().generators()) gens.push_back(q.embed(vs));
  ProductRing tmp = p;
  tmp.ring = make_ring("", vs, x->field(), x->trunc());
  for (const auto& q : y->ideal().generators()) gens.push_back(y_to_product(tmp, q));
  p.ring = make_ring(x->name() + "*" + y->name(), vs, x->field(), x->trunc(), std::move(gens));
  return p;
}

Jet y_to_product(const ProductRing& p, const Jet& j) {
  Jet r = p.ring->zero();
  for (const auto& [m, c] : j.terms()) {
    Monomial n;
    for (std::size_t i = 0; i < p.y_index.size(); ++i)
      if (m.exponent(i)) n.set_exponent(p.y_index[i], m.exponent(i));
    r.add_term(n, c);
  }
  return r;
}

Jet x_to_product(const ProductRing& p, const Jet& j) {
  Jet r = p.ring->zero();
  for (const auto& [m, c] : j.terms()) {
    Monomial n;
    for (std::size_t i = 0; i < p.x_index.size(); ++i)
      if (m.exponent(i)) n.set_exponent(p.x_index[i], m.exponent(i));
    r.add_term(n, c);
  }
  return r;
}

std::vector<std::vector<Scalar>> linear_part(const std::vector<Jet>& images,
                                             const std::vector<std::size_t>& vars) {
  std::vector<std::vector<Scalar>> m;
  for (auto i : vars) {
    std::vector<Scalar> row;
    for (auto j : vars) row.push_back(images[i].coefficient(Monomial::variable(j)));
    m.push_back(std::move(row));
  }
  return m;
}

}  // namespace germforge
