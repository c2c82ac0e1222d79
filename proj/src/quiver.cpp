#include "germforge/quiver.hpp"

#include <algorithm>
#include <set>

#include "builder.hpp"

namespace germforge {

namespace {

QuiverValidity reject(const std::string& reason, const std::string& detail) {
  QuiverValidity v;
  v.valid = false;
  v.reason = reason;
  v.detail = detail;
  return v;
}

const QuiverEdge* out_edge(const QuiverSpec& q, const std::string& v) {
  for (const auto& e : q.edges)
    if (e.from == v) return &e;
  return nullptr;
}

bool has_kind(const std::vector<Constraint>& cs, Constraint::Kind k) {
  return std::any_of(cs.begin(), cs.end(), [&](const Constraint& c) { return c.kind == k; });
}

}  // namespace

QuiverValidity validate_quiver(const QuiverSpec& q) {
  for (const auto& e : q.edges)
    if (e.from == e.to) return reject("loop", "self-loop at " + e.from);
  for (const auto& e : q.edges)
    for (const auto& id : {e.from, e.to})
      if (!q.vertices.count(id)) return reject("unknown-vertex", "edge mentions " + id);
  if (q.vertices.size() < 2) return reject("too-small", "a quiver needs at least two vertices");
  std::map<std::string, int> outdeg;
  for (const auto& e : q.edges)
    if (++outdeg[e.from] > 1) return reject("multiple-outgoing", e.from + " has two outgoing edges");
  for (const auto& [id, r] : q.vertices) {
    std::set<std::string> seen{id};
    std::string cur = id;
    while (const QuiverEdge* e = out_edge(q, cur)) {
      cur = e->to;
      if (!seen.insert(cur).second) return reject("cycle", "cycle through " + cur);
    }
  }
  std::vector<std::string> roots;
  for (const auto& [id, r] : q.vertices)
    if (!outdeg.count(id)) roots.push_back(id);
  if (roots.empty()) return reject("no-root", "every vertex has an outgoing edge");
  if (roots.size() > 1) return reject("disconnected", "several roots: " + roots[0] + ", " + roots[1]);
  for (const auto& e : q.edges) {
    const RingPtr& a = q.vertices.at(e.from);
    const RingPtr& b = q.vertices.at(e.to);
    if (!same_variables(e.map.source->vars(), a->vars()) ||
        !same_variables(e.map.target->vars(), b->vars()))
      return reject("edge-map", "map on " + e.from + " -> " + e.to + " has the wrong rings");
    auto v = validate_map(e.map);
    if (!v.valid) return reject("edge-map", e.from + " -> " + e.to + ": " + v.reason);
  }
  QuiverValidity ok;
  ok.root = roots[0];
  return ok;
}

VertexGrades grade_vertices(const QuiverSpec& q) {
  auto v = validate_quiver(q);
  if (!v.valid) throw StructuralError("invalid quiver (" + v.reason + "): " + v.detail);
  VertexGrades g;
  g.root = v.root;
  int top = 0;
  for (const auto& [id, r] : q.vertices) {
    int n = 0;
    std::string cur = id;
    while (const QuiverEdge* e = out_edge(q, cur)) {
      cur = e->to;
      ++n;
    }
    g.grade[id] = n;
    top = std::max(top, n);
  }
  for (int j = 0; j <= top; ++j) {
    std::vector<std::string> level;
    for (const auto& [id, n] : g.grade)
      if (n <= j) level.push_back(id);
    g.nest.push_back(level);
  }
  return g;
}

std::vector<std::string> descendants(const QuiverSpec& q, const std::string& v) {
  std::vector<std::string> out, frontier{v};
  while (!frontier.empty()) {
    std::vector<std::string> next;
    for (const auto& e : q.edges)
      if (std::find(frontier.begin(), frontier.end(), e.to) != frontier.end()) next.push_back(e.from);
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

bool check_rectangles(const QuiverProblem& p, const std::map<std::string, std::vector<Jet>>& phi,
                      int degree) {
  for (std::size_t k = 0; k < p.source.edges.size(); ++k) {
    const QuiverEdge& et = p.source.edges[k];
    const QuiverEdge* e = nullptr;
    for (const auto& cand : p.target.edges)
      if (cand.from == et.from && cand.to == et.to) e = &cand;
    if (!e) return false;
    const RingPtr& src = p.source.vertices.at(et.from);
    const auto& pw = phi.at(et.to);
    const auto& pv = phi.at(et.from);
    for (auto j : p.target.vertices.at(et.to)->free_vars()) {
      Jet lhs = pw[j].substitute(et.map.components);
      Jet rhs = e->map.components[j].substitute(pv);
      if (!src->normal_form(lhs - rhs).truncated(degree - 1).is_zero()) return false;
    }
  }
  return true;
}

namespace {

void check_problem(const QuiverProblem& p) {
  for (const QuiverSpec* q : {&p.source, &p.target}) {
    auto v = validate_quiver(*q);
    if (!v.valid) throw StructuralError("invalid quiver (" + v.reason + "): " + v.detail);
  }
  if (p.source.vertices.size() != p.target.vertices.size() ||
      p.source.edges.size() != p.target.edges.size())
    throw StructuralError("source and target quivers differ");
  for (const auto& [id, r] : p.source.vertices) {
    auto it = p.target.vertices.find(id);
    if (it == p.target.vertices.end()) throw StructuralError("vertex " + id + " missing in target");
    check_compatible_rings(*r, *it->second);
    if (r->trunc() != it->second->trunc())
      throw StructuralError("truncation differs at vertex " + id);
  }
  for (const auto& e : p.source.edges) {
    bool found = false;
    for (const auto& t : p.target.edges) found = found || (t.from == e.from && t.to == e.to);
    if (!found) throw StructuralError("edge " + e.from + " -> " + e.to + " missing in target");
  }
  for (const auto& [id, cs] : p.constraints) {
    if (!p.source.vertices.count(id)) throw DomainError("constraint on unknown vertex " + id);
    for (const auto& c : cs)
      if (c.target != id && !c.target.empty())
        throw DomainError("constraint target " + c.target + " listed under " + id);
  }
}

QuiverReport solve_core(const QuiverProblem& p, int degree, bool with_base, bool freeze_base,
                        const std::optional<std::vector<Jet>>& base_seed,
                        const EngineOptions& opts) {
  check_problem(p);
  auto grades = grade_vertices(p.source);
  const RingPtr& root = p.source.vertices.at(grades.root);
  const Field field = root->field();
  const int D = root->trunc();
  if (degree < 2 || degree > D + 1) throw DomainError("target degree must lie in [2, D+1]");

  bool full = with_base;
  for (const QuiverSpec* q : {&p.source, &p.target})
    for (const auto& [id, r] : q->vertices) full = full || !r->is_smooth();
  for (const auto& [id, cs] : p.constraints) full = full || !cs.empty();
  detail::ProblemBuilder pb(field, D, full ? D : degree - 1);

  if (with_base) {
    pb.add_base(root, freeze_base, base_seed);
    for (auto id : pb.base_ids()) pb.problem().unknowns[id].priority = -1;
  }
  std::map<std::string, std::size_t> vid;
  for (const auto& [id, src] : p.source.vertices) {
    static const std::vector<Constraint> none;
    auto it = p.constraints.find(id);
    const auto& cs = it == p.constraints.end() ? none : it->second;
    std::optional<std::vector<Jet>> seed;
    if (auto s = p.seed.find(id); s != p.seed.end()) seed = s->second;
    vid[id] = pb.add_vertex(id, src, p.target.vertices.at(id),
                            has_kind(cs, Constraint::Kind::Identity),
                            has_kind(cs, Constraint::Kind::Invertible), false, seed);
  }
  for (const auto& [id, v] : vid) {
    pb.add_ideal_preservation(v);
    if (auto it = p.constraints.find(id); it != p.constraints.end())
      for (const auto& c : it->second) pb.add_constraint(v, c);
  }
  for (const auto& et : p.source.edges)
    for (const auto& e : p.target.edges)
      if (e.from == et.from && e.to == et.to)
        pb.add_edge(vid[e.from], vid[e.to], et.map, e.map, degree - 1,
                    "edge " + e.from + "->" + e.to);

  EngineResult er = run_engine(pb.problem(), opts);
  QuiverReport rep;
  rep.degree = degree;
  rep.log = er.log;
  if (er.outcome == EngineOutcome::Obstructed) {
    rep.order = er.order;
    rep.residual = er.residual;
    bool seedish = er.leading_stage && (field.is_rational() || field.size() > 64);
    rep.verdict = seedish ? Verdict::SeedRequired : Verdict::Obstructed;
    rep.message = seedish ? "leading-order equations not solved from the seed" : "obstructed";
    // Orders are invariant along edges whose ends are both invertible.
    auto fixed = [&](const std::string& id) {
      auto it = p.constraints.find(id);
      return it != p.constraints.end() && (has_kind(it->second, Constraint::Kind::Invertible) ||
                                           has_kind(it->second, Constraint::Kind::Identity));
    };
    if (er.leading_stage)
      for (const auto& et : p.source.edges)
        for (const auto& e : p.target.edges)
          if (e.from == et.from && e.to == et.to && fixed(e.from) && fixed(e.to)) {
            int o = map_order(e.map), ot = map_order(et.map);
            if (o != ot) {
              rep.verdict = Verdict::Obstructed;
              rep.order = std::min(o, ot);
              rep.message = "orders differ along edge " + e.from + "->" + e.to;
              return rep;
            }
          }
    return rep;
  }
  for (const auto& [id, v] : vid) rep.phi[id] = pb.vertex_images(er.values, v);
  if (pb.has_base()) rep.base = pb.base_images(er.values, root);
  for (const auto& [id, src] : p.source.vertices)
    for (const auto& g : p.target.vertices.at(id)->ideal().generators())
      if (!src->member(g.substitute(rep.phi[id])))
        throw ConsistencyError("solution map at " + id + " does not preserve the ideal");
  if (!check_rectangles(p, rep.phi, degree))
    throw ConsistencyError("quiver solution does not verify");
  return rep;
}

}  // namespace

QuiverReport solve_quiver(const QuiverProblem& p, int degree, const EngineOptions& opts) {
  return solve_core(p, degree, false, true, std::nullopt, opts);
}

QuiverReport solve_with_base_change(const QuiverProblem& p, int degree, bool freeze_base,
                                    const std::optional<std::vector<Jet>>& base_seed,
                                    const EngineOptions& opts) {
  std::optional<std::vector<std::string>> params;
  for (const QuiverSpec* q : {&p.source, &p.target})
    for (const auto& [id, r] : q->vertices) {
      std::vector<std::string> names;
      for (auto i : r->param_vars()) names.push_back(r->vars()->name(i));
      if (!params) params = names;
      if (names != *params) throw StructuralError("vertices must share the parameter block");
    }
  return solve_core(p, degree, true, freeze_base, base_seed, opts);
}

}  // namespace germforge
