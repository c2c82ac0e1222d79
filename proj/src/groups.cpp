#include "germforge/groups.hpp"

#include <algorithm>
#include <cctype>

namespace germforge {

std::string to_string(GroupTag tag) {
  switch (tag) {
    case GroupTag::R: return "R";
    case GroupTag::L: return "L";
    case GroupTag::LR: return "LR";
    case GroupTag::C: return "C";
    case GroupTag::K: return "K";
  }
  return "?";
}

GroupTag parse_group_tag(const std::string& text) {
  std::string t;
  for (char c : text) t += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (t == "R") return GroupTag::R;
  if (t == "L") return GroupTag::L;
  if (t == "LR" || t == "RL" || t == "A") return GroupTag::LR;
  if (t == "C") return GroupTag::C;
  if (t == "K") return GroupTag::K;
  throw DomainError("unknown group '" + text + "'");
}

bool uses_source_automorphism(GroupTag t) {
  return t == GroupTag::R || t == GroupTag::LR || t == GroupTag::K;
}
bool uses_target_automorphism(GroupTag t) { return t == GroupTag::L || t == GroupTag::LR; }
bool uses_contact(GroupTag t) { return t == GroupTag::C || t == GroupTag::K; }

Automorphism identity_automorphism(const RingPtr& ring) {
  return Automorphism{ring, identity_map(ring).components};
}

ValidityReport validate_automorphism(const Automorphism& a) {
  const LocalRing& r = *a.ring;
  if (a.images.size() != r.size()) return {false, "wrong number of images", std::nullopt};
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!a.images[i].constant_term().is_zero())
      return {false, "image of '" + r.vars()->name(i) + "' has a nonzero constant term",
              std::nullopt};
    if (r.vars()->is_parameter(i) && a.images[i] != r.var(i))
      return {false, "parameter '" + r.vars()->name(i) + "' is not fixed", std::nullopt};
  }
  if (!invert_matrix(linear_part(a.images, r.free_vars()), r.field()))
    return {false, "linear part is not invertible", std::nullopt};
  const auto& gens = r.ideal().generators();
  for (std::size_t g = 0; g < gens.size(); ++g)
    if (!r.member(gens[g].substitute(a.images)))
      return {false, "ideal generator " + gens[g].to_string() + " is not preserved", g};
  return {};
}

Automorphism compose_automorphisms(const Automorphism& a, const Automorphism& b) {
  std::vector<Jet> out;
  for (const auto& im : a.images) out.push_back(im.substitute(b.images));
  return Automorphism{a.ring, std::move(out)};
}

std::vector<Jet> invert_substitution(const std::vector<Jet>& images) {
  if (images.empty()) return {};
  const std::size_t n = images.size();
  const Jet& proto = images.front();
  Field field = proto.field();
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  auto linv = invert_matrix(linear_part(images, all), field);
  if (!linv) throw DomainError("substitution with a singular linear part");
  auto apply_linv = [&](const std::vector<Jet>& v) {
    std::vector<Jet> out(n, zero_like(proto));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!(*linv)[i][j].is_zero()) out[i] += v[j] * (*linv)[i][j];
    return out;
  };
  std::vector<Jet> x;
  for (std::size_t i = 0; i < n; ++i)
    x.push_back(Jet::variable(proto.vars(), field, proto.trunc(), i));
  std::vector<Jet> g = apply_linv(x);
  for (int step = 1; step < proto.trunc(); ++step) {
    std::vector<Jet> err;
    for (std::size_t i = 0; i < n; ++i) err.push_back(images[i].substitute(g) - x[i]);
    if (std::all_of(err.begin(), err.end(), [](const Jet& e) { return e.is_zero(); })) break;
    auto corr = apply_linv(err);
    for (std::size_t i = 0; i < n; ++i) g[i] -= corr[i];
  }
  for (std::size_t i = 0; i < n; ++i)
    if (images[i].substitute(g) != x[i]) throw ConsistencyError("jet inversion did not converge");
  return g;
}

Automorphism invert_automorphism(const Automorphism& a) {
  return Automorphism{a.ring, invert_substitution(a.images)};
}

ContactElem identity_contact(const RingPtr& source, const RingPtr& target) {
  ContactElem c{make_product_ring(source, target), source, target, {}};
  for (auto idx : c.product.y_free) c.C.push_back(c.product.ring->var(idx));
  return c;
}

ContactElem contact_from_matrix(const RingPtr& source, const RingPtr& target,
                                const std::vector<std::vector<Jet>>& U) {
  ContactElem c{make_product_ring(source, target), source, target, {}};
  const auto& yf = c.product.y_free;
  if (U.size() != yf.size()) throw StructuralError("matrix size does not match the target");
  for (std::size_t j = 0; j < yf.size(); ++j) {
    Jet cj = c.product.ring->zero();
    for (std::size_t i = 0; i < yf.size(); ++i)
      cj += x_to_product(c.product, U[j][i]) * c.product.ring->var(yf[i]);
    c.C.push_back(std::move(cj));
  }
  return c;
}

namespace {

Jet product_to_target(const ContactElem& c, const Jet& j) {
  Jet r = c.target->zero();
  for (const auto& [m, coef] : j.terms()) {
    Monomial n;
    for (std::size_t k = 0; k < c.target->size(); ++k) {
      int e = m.exponent(c.product.y_index[k]);
      if (e) n.set_exponent(k, e);
    }
    r.add_term(n, coef);
  }
  return r;
}

// Product-ring substitution images x -> x, y_free -> ys.
std::vector<Jet> product_images(const ContactElem& c, const std::vector<Jet>& ys) {
  const LocalRing& p = *c.product.ring;
  std::vector<Jet> im;
  for (std::size_t i = 0; i < p.size(); ++i) im.push_back(p.var(i));
  for (std::size_t k = 0; k < ys.size(); ++k) im[c.product.y_free[k]] = ys[k];
  return im;
}

// Product-ring substitution images x -> phi(x), y -> y.
std::vector<Jet> product_images_x(const ContactElem& c, const Automorphism& phi) {
  const LocalRing& p = *c.product.ring;
  std::vector<Jet> im;
  for (std::size_t i = 0; i < p.size(); ++i) im.push_back(p.var(i));
  for (std::size_t i = 0; i < c.source->size(); ++i)
    im[c.product.x_index[i]] = x_to_product(c.product, phi.images[i]);
  return im;
}

}  // namespace

ValidityReport validate_contact(const ContactElem& c) {
  const auto& yf = c.product.y_free;
  if (c.C.size() != yf.size()) return {false, "wrong number of contact components", std::nullopt};
  for (std::size_t j = 0; j < c.C.size(); ++j) {
    if (!c.C[j].zero_variables(yf).is_zero())
      return {false, "C(x,0) is not zero", std::nullopt};
  }
  std::vector<std::size_t> xfree;
  for (auto i : c.source->free_vars()) xfree.push_back(c.product.x_index[i]);
  Automorphism base = identity_automorphism(c.target);
  auto free = c.target->free_vars();
  for (std::size_t k = 0; k < free.size(); ++k)
    base.images[free[k]] = product_to_target(c, c.C[k].zero_variables(xfree));
  auto r = validate_automorphism(base);
  if (!r.valid) return {false, "C(0,y) is not an automorphism: " + r.reason, std::nullopt};
  auto im = product_images(c, c.C);
  const auto& gens = c.target->ideal().generators();
  for (std::size_t g = 0; g < gens.size(); ++g)
    if (!c.product.ring->member(y_to_product(c.product, gens[g]).substitute(im)))
      return {false, "q(C) not in J_X + J_Y for generator " + gens[g].to_string(), g};
  return {};
}

std::vector<Jet> contact_images(const ContactElem& c, const std::vector<Jet>& values) {
  std::vector<Jet> im(c.product.ring->size(), c.source->zero());
  for (std::size_t i = 0; i < c.source->size(); ++i) im[c.product.x_index[i]] = c.source->var(i);
  for (std::size_t k = 0; k < values.size(); ++k) im[c.product.y_free[k]] = values[k];
  return im;
}

GroupElement identity_element(GroupTag tag, const RingPtr& source, const RingPtr& target) {
  GroupElement g{tag, source, target, std::nullopt, std::nullopt, std::nullopt};
  if (uses_source_automorphism(tag)) g.phi = identity_automorphism(source);
  if (uses_target_automorphism(tag)) g.psi = identity_automorphism(target);
  if (uses_contact(tag)) g.contact = identity_contact(source, target);
  return g;
}

ValidityReport validate_group_element(const GroupElement& g) {
  if (uses_source_automorphism(g.tag)) {
    if (!g.phi) return {false, "missing source automorphism", std::nullopt};
    auto r = validate_automorphism(*g.phi);
    if (!r.valid) return {false, "source automorphism: " + r.reason, r.generator};
  }
  if (uses_target_automorphism(g.tag)) {
    if (!g.psi) return {false, "missing target automorphism", std::nullopt};
    auto r = validate_automorphism(*g.psi);
    if (!r.valid) return {false, "target automorphism: " + r.reason, r.generator};
  }
  if (uses_contact(g.tag)) {
    if (!g.contact) return {false, "missing contact element", std::nullopt};
    auto r = validate_contact(*g.contact);
    if (!r.valid) return {false, "contact element: " + r.reason, r.generator};
  }
  return {};
}

GermMap apply(const GroupElement& g, const GermMap& f) {
  GermMap out = f;
  if (g.phi) {
    auto inv = invert_substitution(g.phi->images);
    for (auto& c : out.components) c = c.substitute(inv);
  }
  if (g.psi) {
    std::vector<Jet> comps;
    for (const auto& im : g.psi->images) comps.push_back(im.substitute(out.components));
    out.components = std::move(comps);
  }
  if (g.contact) {
    auto im = contact_images(*g.contact, out.free_components());
    auto free = out.target->free_vars();
    for (std::size_t k = 0; k < free.size(); ++k)
      out.components[free[k]] = g.contact->C[k].substitute(im);
    if (!validate_map(out).valid && validate_map(f).valid)
      throw ConsistencyError("contact action produced an invalid map");
  }
  return out;
}

GroupElement compose_group(const GroupElement& g, const GroupElement& h) {
  if (g.tag != h.tag) throw StructuralError("composing elements of different groups");
  GroupElement r = g;
  if (g.phi) r.phi = compose_automorphisms(*g.phi, *h.phi);
  if (g.psi) r.psi = compose_automorphisms(*g.psi, *h.psi);
  if (g.contact) {
    const ContactElem& cg = *g.contact;
    std::vector<Jet> inner = h.contact->C;
    if (g.phi) {
      auto im = product_images_x(cg, invert_automorphism(*g.phi));
      for (auto& c : inner) c = c.substitute(im);
    }
    auto im = product_images(cg, inner);
    for (std::size_t k = 0; k < cg.C.size(); ++k) r.contact->C[k] = cg.C[k].substitute(im);
  }
  return r;
}

GroupElement inverse_group(const GroupElement& g) {
  GroupElement r = g;
  if (g.phi) r.phi = invert_automorphism(*g.phi);
  if (g.psi) r.psi = invert_automorphism(*g.psi);
  if (g.contact) {
    const ContactElem& c = *g.contact;
    auto full = invert_substitution(product_images(c, c.C));
    std::vector<Jet> d;
    for (auto idx : c.product.y_free) d.push_back(full[idx]);
    if (g.phi) {
      auto im = product_images_x(c, *g.phi);
      for (auto& dj : d) dj = dj.substitute(im);
    }
    r.contact->C = std::move(d);
  }
  return r;
}

LinearContact linearize_contact(const ContactElem& c, const Automorphism& phi, const GermMap& f) {
  const auto& yf = c.product.y_free;
  const std::size_t m = yf.size();
  std::vector<std::vector<Jet>> A(m, std::vector<Jet>(m, c.product.ring->zero()));
  for (std::size_t j = 0; j < m; ++j) {
    for (const auto& [mono, coef] : c.C[j].terms()) {
      std::size_t i = 0;
      while (i < m && mono.exponent(yf[i]) == 0) ++i;
      if (i == m) throw DomainError("contact component has a term free of y");
      Monomial q = mono;
      q.set_exponent(yf[i], mono.exponent(yf[i]) - 1);
      A[j][i].add_term(q, coef);
    }
  }
  auto inv = invert_substitution(phi.images);
  std::vector<Jet> g;
  for (const auto& comp : f.free_components()) g.push_back(comp.substitute(inv));
  auto im = contact_images(c, g);
  LinearContact lc{{}, phi, std::nullopt};
  lc.U.assign(m, std::vector<Jet>(m, c.source->zero()));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) lc.U[j][i] = A[j][i].substitute(im);
  if (!c.target->is_smooth()) lc.certificate = c;
  return lc;
}

std::vector<Jet> apply_linear_contact(const LinearContact& lc, const GermMap& f) {
  auto inv = invert_substitution(lc.phi.images);
  std::vector<Jet> g;
  for (const auto& comp : f.free_components()) g.push_back(comp.substitute(inv));
  std::vector<Jet> out;
  for (std::size_t j = 0; j < lc.U.size(); ++j) {
    Jet s = f.source->zero();
    for (std::size_t i = 0; i < g.size(); ++i) s += lc.U[j][i] * g[i];
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

IdealJet filtration_ideal(const RingPtr& x, const std::vector<Jet>& I, int k) {
  auto gens = power_of_ideal(I, k);
  for (const auto& q : x->ideal().generators()) gens.push_back(q);
  return IdealJet(x->vars(), x->field(), x->trunc(), std::move(gens));
}

bool source_part_member(const Automorphism& phi, const RingPtr& x, const FilteredSubgroupSpec& s) {
  IdealJet target = filtration_ideal(x, s.ideal, s.level + 1);
  for (const auto& q : s.ideal)
    if (!target.member(q.substitute(phi.images) - q)) return false;
  return true;
}

// Checks g·v - v ∈ I^{d+j} for v running over basis vectors of I^d·R^m.
template <class Act>
bool target_part_member(const GroupElement& g, const FilteredSubgroupSpec& s, Act act) {
  const RingPtr& x = g.source;
  const int D = x->trunc();
  auto free = g.target->free_vars();
  for (int d = 1; d + s.level <= D; ++d) {
    IdealJet Id = filtration_ideal(x, s.ideal, d);
    IdealJet Idj = filtration_ideal(x, s.ideal, d + s.level);
    for (const auto& b : Id.reduced_basis(D)) {
      if (!b.constant_term().is_zero()) continue;
      for (std::size_t k = 0; k < free.size(); ++k) {
        std::vector<Jet> v(free.size(), x->zero());
        v[k] = b;
        auto gv = act(v);
        for (std::size_t i = 0; i < free.size(); ++i)
          if (!Idj.member(gv[i] - v[i])) return false;
      }
    }
  }
  return true;
}

}  // namespace

bool filtered_member(const GroupElement& g, const FilteredSubgroupSpec& spec) {
  if (spec.tag != g.tag) throw StructuralError("filtration spec for a different group");
  if (spec.level < 0) throw DomainError("negative filtration level");
  for (const auto& q : spec.ideal)
    if (!q.constant_term().is_zero()) throw DomainError("filtration ideal not inside m");
  if ((uses_target_automorphism(g.tag) || uses_contact(g.tag)) && !g.target->is_smooth())
    throw UnsupportedError("filtered membership for a singular target is not effective");
  if (g.phi && !source_part_member(*g.phi, g.source, spec)) return false;
  if (g.psi) {
    auto params = g.target->param_vars();
    auto free = g.target->free_vars();
    bool ok = target_part_member(g, spec, [&](const std::vector<Jet>& v) {
      std::vector<Jet> full(g.target->size(), g.source->zero());
      for (std::size_t k = 0; k < free.size(); ++k) full[free[k]] = v[k];
      for (auto p : params)
        full[p] = g.source->var(*g.source->vars()->index_of(g.target->vars()->name(p)));
      std::vector<Jet> out;
      for (auto i : free) out.push_back(g.psi->images[i].substitute(full));
      return out;
    });
    if (!ok) return false;
  }
  if (g.contact) {
    bool ok = target_part_member(g, spec, [&](const std::vector<Jet>& v) {
      auto im = contact_images(*g.contact, v);
      std::vector<Jet> out;
      for (const auto& c : g.contact->C) out.push_back(c.substitute(im));
      return out;
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace germforge
