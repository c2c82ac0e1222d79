#include <algorithm>

#include "germforge/quiver.hpp"

namespace germforge {

namespace {

/// Rewrites a jet over one vertex ring into the combined ring.
Jet to_combined(const CombinedRing& c, const std::string& v, const Jet& j) {
  const auto& idx = c.index.at(v);
  Jet out = c.ring->zero();
  const std::size_t n = c.ring->size();
  for (const auto& [m, coef] : j.terms()) {
    std::vector<int> e(n, 0);
    for (std::size_t i = 0; i < idx.size(); ++i) e[idx[i]] += m.exponent(i);
    out.add_term(Monomial::from_exponents(e), coef);
  }
  return out;
}

std::vector<Jet> to_combined(const CombinedRing& c, const std::string& v,
                             const std::vector<Jet>& js) {
  std::vector<Jet> out;
  for (const auto& j : js) out.push_back(to_combined(c, v, j));
  return out;
}

/// Combined indices of the free variables of vertex v.
std::vector<std::size_t> free_indices(const CombinedRing& c, const QuiverSpec& q,
                                      const std::string& v) {
  std::vector<std::size_t> out;
  for (auto i : q.vertices.at(v)->free_vars()) out.push_back(c.index.at(v)[i]);
  return out;
}

const QuiverEdge& edge_of(const QuiverSpec& q, const std::string& from) {
  for (const auto& e : q.edges)
    if (e.from == from) return e;
  throw StructuralError("no outgoing edge at " + from);
}

/// f̃_{w⋯u}: images of the variables of X̃_w over X̃_u.
std::vector<Jet> path_map(const QuiverSpec& q, const std::string& u, const std::string& w) {
  const RingPtr& ru = q.vertices.at(u);
  std::vector<Jet> cur;
  for (std::size_t i = 0; i < ru->size(); ++i) cur.push_back(ru->var(i));
  std::string at = u;
  while (at != w) {
    const QuiverEdge& e = edge_of(q, at);
    std::vector<Jet> next;
    for (const auto& comp : e.map.components) next.push_back(comp.substitute(cur));
    cur = std::move(next);
    at = e.to;
  }
  return cur;
}

bool uses_only(const Jet& j, const std::vector<bool>& allowed) {
  for (const auto& [m, c] : j.terms())
    for (std::size_t i = 0; i < allowed.size(); ++i)
      if (m.exponent(i) && !allowed[i]) return false;
  return true;
}

}  // namespace

CombinedRing combined_ring(const QuiverSpec& source) {
  auto v = validate_quiver(source);
  if (!v.valid) throw StructuralError("invalid quiver (" + v.reason + "): " + v.detail);
  const RingPtr& root = source.vertices.at(v.root);
  std::vector<VariableBlock> blocks;
  for (const auto& [id, r] : source.vertices) {
    VariableBlock b{id, {}, false};
    for (auto i : r->free_vars()) b.variables.push_back(r->vars()->name(i) + "_" + id);
    if (!b.variables.empty()) blocks.push_back(b);
  }
  for (const auto& b : root->vars()->blocks())
    if (b.parameter) blocks.push_back(b);
  auto vs = make_variables(blocks);
  CombinedRing c;
  for (const auto& [id, r] : source.vertices) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < r->size(); ++i) {
      const std::string& n = r->vars()->name(i);
      auto at = vs->index_of(r->vars()->is_parameter(i) ? n : n + "_" + id);
      if (!at) throw StructuralError("vertex " + id + " does not share the parameter block");
      idx.push_back(*at);
    }
    c.index[id] = std::move(idx);
  }
  c.ring = make_ring("combined", vs, root->field(), root->trunc());
  std::vector<Jet> gens;
  for (const auto& [id, r] : source.vertices)
    for (const auto& q : r->ideal().generators()) gens.push_back(to_combined(c, id, q));
  c.ring = make_ring("combined", vs, root->field(), root->trunc(), std::move(gens));
  return c;
}

std::vector<std::string> failing_edges(const QuiverProblem& p, const NonPureSolution& s) {
  const CombinedRing& c = s.ring;
  std::vector<std::string> bad;
  for (const auto& et : p.source.edges) {
    const QuiverEdge* e = nullptr;
    for (const auto& cand : p.target.edges)
      if (cand.from == et.from && cand.to == et.to) e = &cand;
    if (!e) throw StructuralError("edge " + et.from + " -> " + et.to + " missing in target");
    std::vector<Jet> gens = c.ring->ideal().generators();
    const RingPtr& rw = p.source.vertices.at(et.to);
    auto wi = c.index.at(et.to);
    for (auto k : rw->free_vars())
      gens.push_back(c.ring->var(wi[k]) - to_combined(c, et.from, et.map.components[k]));
    IdealJet I(c.ring->vars(), c.ring->field(), c.ring->trunc(), gens);
    const auto& pw = s.psi.at(et.to);
    const auto& pv = s.psi.at(et.from);
    for (auto j : p.target.vertices.at(et.to)->free_vars())
      if (!I.member(pw[j] - e->map.components[j].substitute(pv))) {
        bad.push_back(et.from + "->" + et.to);
        break;
      }
  }
  return bad;
}

PurifyResult purify(const QuiverProblem& p, const NonPureSolution& s) {
  auto grades = grade_vertices(p.source);
  const CombinedRing& c = s.ring;
  const std::size_t n = c.ring->size();
  const auto& g = grades.grade;

  for (const auto& [id, r] : p.target.vertices) {
    auto it = s.psi.find(id);
    if (it == s.psi.end() || it->second.size() != r->size())
      throw DomainError("non-pure solution needs one jet per variable of " + id);
  }
  // Nest: Ψ_v may use the variables of vertices of grade <= grade(v).
  for (const auto& [id, psi] : s.psi) {
    std::vector<bool> allowed(n, false);
    for (auto i : c.ring->param_vars()) allowed[i] = true;
    for (const auto& [u, gu] : g)
      if (gu <= g.at(id))
        for (auto i : free_indices(c, p.source, u)) allowed[i] = true;
    for (const auto& j : psi)
      if (!uses_only(j, allowed)) throw DomainError("Ψ_" + id + " is not nested");
  }
  if (auto bad = failing_edges(p, s); !bad.empty())
    throw DomainError("not a non-pure solution: edge " + bad.front() + " fails");

  PurifyResult res;
  NonPureSolution cur = s;
  auto record = [&](const std::string& what) {
    res.steps.push_back({what, failing_edges(p, cur).empty()});
  };
  int top = 0;
  for (const auto& [id, gv] : g) top = std::max(top, gv);

  for (int j = 0; j < top; ++j) {
    for (const auto& [w, gw] : g) {
      if (gw != j) continue;
      auto desc = descendants(p.source, w);
      if (desc.empty()) continue;
      auto wi = free_indices(c, p.source, w);
      auto wfree = p.source.vertices.at(w)->free_vars();
      for (const auto& u : desc) {
        auto comp = to_combined(c, u, path_map(p.source, u, w));
        std::map<std::size_t, Jet> sub;
        for (std::size_t k = 0; k < wfree.size(); ++k) sub.emplace(wi[k], comp[wfree[k]]);
        for (auto& jet : cur.psi[u]) jet = jet.substitute(sub);
      }
      record("substitute x_" + w + " into the descendants of " + w);
    }
    for (const auto& [v, gv] : g) {
      if (gv != j + 1) continue;
      auto vi = free_indices(c, p.source, v);
      std::vector<std::size_t> others;
      for (auto i : c.ring->free_vars())
        if (std::find(vi.begin(), vi.end(), i) == vi.end()) others.push_back(i);
      for (auto& jet : cur.psi[v]) jet = jet.zero_variables(others);
      std::vector<std::size_t> low;
      for (const auto& [u, gu] : g)
        if (gu <= j + 1 && u != v)
          for (auto i : free_indices(c, p.source, u)) low.push_back(i);
      for (const auto& u : descendants(p.source, v))
        for (auto& jet : cur.psi[u]) jet = jet.zero_variables(low);
      record("zero the foreign variables of " + v + " and its descendants");
    }
  }

  for (const auto& [id, psi] : cur.psi) {
    const RingPtr& r = p.source.vertices.at(id);
    std::vector<bool> allowed(n, false);
    std::vector<Jet> back(n, r->zero());
    const auto& idx = c.index.at(id);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      allowed[idx[i]] = true;
      back[idx[i]] = r->var(i);
    }
    std::vector<Jet> out;
    for (const auto& jet : psi) {
      if (!uses_only(jet, allowed)) throw ConsistencyError("purification left foreign variables");
      out.push_back(jet.substitute(back));
    }
    res.phi[id] = std::move(out);
  }
  if (!check_rectangles(p, res.phi, c.ring->trunc() + 1))
    throw ConsistencyError("purified maps do not satisfy the morphism system");
  return res;
}

}  // namespace germforge
