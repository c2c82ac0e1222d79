#include "germforge/solver.hpp"

#include <algorithm>

#include "builder.hpp"

namespace germforge {

using detail::ProblemBuilder;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Success: return "success";
    case Verdict::Obstructed: return "obstructed";
    case Verdict::SeedRequired: return "seed-required";
  }
  return "?";
}

std::string to_string(Constraint::Kind kind) {
  using K = Constraint::Kind;
  switch (kind) {
    case K::Identity: return "identity";
    case K::IdealOffset: return "ideal_offset";
    case K::MapsSubgerm: return "maps_subgerm";
    case K::VanishInto: return "vanish_into";
    case K::Invertible: return "invertible";
    case K::FilteredLevel: return "filtered_level";
    case K::FrozenBlock: return "frozen_block";
  }
  return "?";
}

Constraint::Kind parse_constraint_kind(const std::string& text) {
  using K = Constraint::Kind;
  for (K k : {K::Identity, K::IdealOffset, K::MapsSubgerm, K::VanishInto, K::Invertible,
              K::FilteredLevel, K::FrozenBlock})
    if (to_string(k) == text) return k;
  throw DomainError("unknown constraint '" + text + "'");
}

int map_order(const GermMap& f) {
  int best = f.source->trunc() + 1;
  for (auto j : f.target->free_vars()) {
    auto o = f.source->normal_form(f.components[j]).order();
    if (o) best = std::min(best, *o);
  }
  return best;
}

namespace {

bool same_ring(const LocalRing& a, const LocalRing& b) {
  return same_variables(a.vars(), b.vars()) && a.field() == b.field() && a.trunc() == b.trunc();
}

bool has_constraint(const std::vector<Constraint>& cs, const std::string& target,
                    Constraint::Kind kind) {
  return std::any_of(cs.begin(), cs.end(), [&](const Constraint& c) {
    return c.target == target && c.kind == kind;
  });
}

struct ContactUnknowns {
  bool linear = false;
  ProductRing product;
  // linear: U[j][k] unknown ids over X; general: C[j] unknown ids over X × Y.
  std::vector<std::vector<std::size_t>> U;
  std::vector<std::size_t> C;
};

}  // namespace

SolveReport solve_equivalence(const SolveRequest& req) {
  const GermMap& f = req.f;
  const GermMap& ft = req.f_tilde;
  if (!same_ring(*f.source, *ft.source) || !same_ring(*f.target, *ft.target))
    throw StructuralError("both maps must share source and target rings");
  check_compatible_rings(*f.source, *f.target);
  const int D = f.source->trunc();
  const int d = req.degree;
  if (d < 2 || d > D + 1) throw DomainError("target degree must lie in [2, D+1]");
  for (const auto& c : req.constraints)
    if (c.target != "X" && c.target != "Y")
      throw DomainError("solve constraints apply to X or Y, not '" + c.target + "'");

  const RingPtr& X = f.source;
  const RingPtr& Y = f.target;
  const GroupTag tag = req.group;
  const bool contact = uses_contact(tag);
  const bool x_identity = !uses_source_automorphism(tag) ||
                          has_constraint(req.constraints, "X", Constraint::Kind::Identity);
  const bool y_identity = contact || !uses_target_automorphism(tag) ||
                          has_constraint(req.constraints, "Y", Constraint::Kind::Identity);
  for (const auto& c : req.constraints)
    if (c.target == "Y" && contact && c.kind != Constraint::Kind::Identity &&
        c.kind != Constraint::Kind::FrozenBlock && c.kind != Constraint::Kind::Invertible &&
        c.kind != Constraint::Kind::FilteredLevel)
      throw UnsupportedError("contact groups take target constraints only as filtered levels");

  bool full = !X->is_smooth() || !Y->is_smooth() || !req.constraints.empty();
  ProblemBuilder pb(X->field(), D, full ? D : d - 1);

  std::optional<std::vector<Jet>> seed_x, seed_y;
  if (req.seed) {
    if (req.seed->tag != tag) throw DomainError("seed belongs to another group");
    if (req.seed->phi) seed_x = invert_automorphism(*req.seed->phi).images;
    if (req.seed->psi) seed_y = invert_automorphism(*req.seed->psi).images;
  }
  std::size_t vx = pb.add_vertex("X", X, X, x_identity, true, false, seed_x);
  std::size_t vy = pb.add_vertex("Y", Y, Y, y_identity, true, true, seed_y);
  pb.add_ideal_preservation(vx);
  pb.add_ideal_preservation(vy);
  for (const auto& c : req.constraints) {
    if (c.target == "X") pb.add_constraint(vx, c);
    if (c.target == "Y" && !contact) pb.add_constraint(vy, c);
  }

  ContactUnknowns cu;
  if (!contact) {
    pb.add_edge(vx, vy, ft, f, d - 1, "main");
  } else {
    auto tfree = Y->free_vars();
    const std::size_t m = tfree.size();
    auto xim = pb.images(vx, e_vars(X->size()));
    std::vector<Expr> fx;
    for (auto j : tfree) fx.push_back(e_apply(f.components[j], xim));
    auto mod = pb.ideal_of(X);
    cu.linear = Y->is_smooth();
    std::optional<LinearContact> seed_lc;
    if (req.seed && req.seed->contact) {
      Automorphism phi = req.seed->phi ? *req.seed->phi : identity_automorphism(X);
      if (cu.linear) seed_lc = linearize_contact(*req.seed->contact, phi, f);
    }
    if (cu.linear) {
      std::vector<Monomial> support;
      for (int deg = 0; deg <= pb.max_degree(); ++deg)
        for (const auto& mono : monomials_of_degree(X->size(), deg)) support.push_back(mono);
      cu.U.assign(m, std::vector<std::size_t>(m));
      std::vector<std::vector<CoefRef>> inv(m);
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) {
          Jet s = seed_lc ? seed_lc->U[j][k] : (j == k ? X->one() : X->zero());
          cu.U[j][k] = pb.add_unknown("U_" + std::to_string(j + 1) + std::to_string(k + 1),
                                      X->vars(), support, s, 1, "U");
          pb.problem().unknowns[cu.U[j][k]].priority = -1;
          inv[j].push_back(CoefRef{cu.U[j][k], Monomial{}});
        }
      pb.problem().invertible.push_back(inv);
      for (std::size_t j = 0; j < m; ++j) {
        Expr rhs;
        for (std::size_t k = 0; k < m; ++k) {
          Expr t = e_call(cu.U[j][k], e_vars(X->size())) * fx[k];
          rhs = rhs ? rhs + t : t;
        }
        pb.add_equation("main " + Y->vars()->name(tfree[j]), e_const(ft.components[tfree[j]]) - rhs,
                        X->vars(), mod, d - 1);
      }
    } else {
      cu.product = make_product_ring(X, Y);
      const RingPtr& P = cu.product.ring;
      std::vector<Monomial> support;
      for (int deg = 1; deg <= pb.max_degree(); ++deg)
        for (const auto& mono : monomials_of_degree(P->size(), deg))
          if (mono.degree_in(cu.product.y_free) > 0) support.push_back(mono);
      std::vector<std::vector<CoefRef>> inv(m);
      for (std::size_t j = 0; j < m; ++j) {
        Jet s = req.seed && req.seed->contact ? req.seed->contact->C[j]
                                              : P->var(cu.product.y_free[j]);
        cu.C.push_back(pb.add_unknown("C_" + Y->vars()->name(tfree[j]), P->vars(), support, s,
                                      2, "C"));
        pb.problem().unknowns[cu.C.back()].priority = -1;
      }
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k)
          inv[j].push_back(CoefRef{cu.C[j], Monomial::variable(cu.product.y_free[k])});
      pb.problem().invertible.push_back(inv);
      std::vector<Expr> args(P->size());
      for (std::size_t i = 0; i < X->size(); ++i) args[cu.product.x_index[i]] = e_var(i);
      for (std::size_t k = 0; k < m; ++k) args[cu.product.y_free[k]] = fx[k];
      for (std::size_t j = 0; j < m; ++j)
        pb.add_equation("main " + Y->vars()->name(tfree[j]),
                        e_const(ft.components[tfree[j]]) - e_call(cu.C[j], args), X->vars(), mod,
                        d - 1);
      std::vector<Expr> cargs = e_vars(P->size());
      std::vector<Expr> qargs(Y->size());
      for (std::size_t k = 0; k < m; ++k) qargs[tfree[k]] = e_call(cu.C[k], cargs);
      for (auto pidx : Y->param_vars()) qargs[pidx] = e_var(cu.product.y_index[pidx]);
      auto pmod = std::make_shared<const IdealJet>(P->ideal());
      for (const auto& q : Y->ideal().generators())
        pb.add_equation("contact " + q.to_string(), e_apply(q, qargs), P->vars(), pmod, D);
    }
    for (const auto& c : req.constraints)
      if (c.target == "Y" && c.kind == Constraint::Kind::FilteredLevel) {
        auto I = c.ideal;
        std::vector<Jet> gens;
        for (const auto& s : I) gens.push_back(Y->parse(s));
        if (!Y->is_smooth()) throw UnsupportedError("filtered level for a singular target");
        IdealJet Iy(Y->vars(), Y->field(), D, gens);
        for (auto i : Y->free_vars())
          if (!Iy.member(Y->var(i)))
            throw UnsupportedError("filtered level on the target side needs I = m");
        // C(x, y) - y ∈ m^{j+1}: U - 1 ∈ m^j.
        if (cu.linear) {
          std::vector<Jet> mj = power_of_maximal_ideal(X->vars(), X->field(), D,
                                                       [&] {
                                                         std::vector<std::size_t> all;
                                                         for (std::size_t i = 0; i < X->size(); ++i)
                                                           all.push_back(i);
                                                         return all;
                                                       }(),
                                                       c.level);
          auto lmod = std::make_shared<const IdealJet>(X->vars(), X->field(), D, mj);
          for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k) {
              Expr e = e_call(cu.U[j][k], e_vars(X->size()));
              if (j == k) e = e - e_const(X->one());
              pb.add_equation("filtered_level Y", e, X->vars(), lmod, D);
            }
        }
      }
  }

  const Problem& prob = pb.problem();
  EngineResult er = run_engine(prob, req.engine);

  SolveReport rep;
  rep.group = tag;
  rep.degree = d;
  rep.log = er.log;
  if (er.outcome == EngineOutcome::Obstructed) {
    rep.order = er.order;
    rep.residual = er.residual;
    int of = map_order(f), oft = map_order(ft);
    if (er.leading_stage) {
      if (of != oft) {
        rep.verdict = Verdict::Obstructed;
        rep.order = std::min(of, oft);
        rep.message = "orders of the two maps differ";
      } else if (prob.field.is_rational() || prob.field.size() > 64) {
        rep.verdict = Verdict::SeedRequired;
        rep.message = "leading-order equations not solved from the seed";
      } else {
        rep.verdict = Verdict::Obstructed;
        rep.message = "no invertible leading terms over the finite field";
      }
    } else {
      rep.verdict = Verdict::Obstructed;
      rep.branch_qualified = er.order > std::min(of, oft);
      rep.message = rep.branch_qualified ? "obstructed on the explored seed branch"
                                         : "obstructed";
    }
    return rep;
  }

  rep.verdict = Verdict::Success;
  rep.phi_x = pb.vertex_images(er.values, vx);
  rep.phi_y = pb.vertex_images(er.values, vy);
  GroupElement g = identity_element(tag, X, Y);
  if (g.phi) g.phi->images = invert_substitution(rep.phi_x);
  if (g.psi) g.psi->images = invert_substitution(rep.phi_y);
  if (g.contact) {
    if (cu.linear) {
      std::vector<std::vector<Jet>> U(cu.U.size());
      for (std::size_t j = 0; j < cu.U.size(); ++j)
        for (auto id : cu.U[j]) U[j].push_back(er.values[id]);
      g.contact = contact_from_matrix(X, Y, U);
    } else {
      for (std::size_t j = 0; j < cu.C.size(); ++j) g.contact->C[j] = er.values[cu.C[j]];
    }
    rep.contact = g.contact->C;
  }
  auto valid = validate_group_element(g);
  if (!valid.valid) throw ConsistencyError("solver witness is not a group element: " + valid.reason);
  if (!maps_equal_mod(apply(g, f), ft, d))
    throw ConsistencyError("solver witness does not reproduce the target map");
  rep.witness = std::move(g);
  return rep;
}

ProbeReport probe_orbit_closure(GroupTag group, const GermMap& f, const GermMap& f_tilde,
                                const std::vector<int>& schedule,
                                const std::vector<Constraint>& constraints) {
  ProbeReport out;
  for (int d : schedule) {
    SolveRequest req{group, f, f_tilde, d, constraints, std::nullopt, {}};
    SolveReport r = solve_equivalence(req);
    if (r.verdict == Verdict::Success) {
      out.max_achieved = std::max(out.max_achieved, d);
    } else if (!out.first_obstruction) {
      out.first_obstruction = std::make_pair(d, r.order);
    }
    out.entries.push_back({d, std::move(r)});
  }
  return out;
}

}  // namespace germforge
