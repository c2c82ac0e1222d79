#include <algorithm>
#include <map>
#include <sstream>

#include "builder.hpp"
#include "germforge/solver.hpp"

namespace germforge {

namespace {

std::vector<Monomial> monomials_between(std::size_t n, int lo, int hi) {
  std::vector<Monomial> out;
  for (int d = lo; d <= hi; ++d)
    for (const auto& m : monomials_of_degree(n, d)) out.push_back(m);
  return out;
}

std::string brace(const std::vector<std::string>& names) {
  std::string s = "{";
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? ", " : "") + names[i];
  return s + "}";
}

class Encoder {
 public:
  Encoder(GroupTag tag, const GermMap& f, const GermMap& ft) : f_(f), ft_(ft) {
    sys.group = tag;
    sys.field = f.source->field();
    sys.trunc = f.source->trunc();
  }

  IFSystem sys;

  std::size_t unknown(const std::string& name, VarSetPtr vars, std::vector<Monomial> support,
                      int level, const std::string& block, bool aux = false) {
    sys.unknowns.push_back(UnknownSpec{name, std::move(vars), std::move(support), level, block});
    if (aux) sys.auxiliary.push_back(sys.unknowns.size() - 1);
    return sys.unknowns.size() - 1;
  }

  void equation(const std::string& label, Expr e, VarSetPtr ambient, std::vector<Jet> modulus,
                const std::string& modulus_name) {
    sys.equations.push_back(
        IFEquation{label, std::move(e), std::move(ambient), std::move(modulus), modulus_name,
                   sys.trunc});
  }

  /// Unknown images of the free variables of r, named <prefix>_<var>.
  std::vector<std::size_t> automorphism(const RingPtr& r, const std::string& prefix, int level) {
    std::vector<std::size_t> ids;
    for (auto i : r->free_vars())
      ids.push_back(unknown(prefix + "_" + r->vars()->name(i), r->vars(),
                            detail::map_support(*r, sys.trunc), level, prefix));
    return ids;
  }

  /// Images of all variables of r under Φ, given expressions for r's variables.
  static std::vector<Expr> images(const LocalRing& r, const std::vector<std::size_t>& ids,
                                  const std::vector<Expr>& args) {
    std::vector<Expr> out(args);
    auto free = r.free_vars();
    for (std::size_t k = 0; k < free.size(); ++k) out[free[k]] = e_call(ids[k], args);
    return out;
  }

  /// q_i(Φ) = Σ_j z_ij q_j over r.
  void preservation(const RingPtr& r, const std::vector<std::size_t>& ids,
                    const std::string& prefix) {
    const auto& gens = r->ideal().generators();
    auto args = e_vars(r->size());
    auto im = images(*r, ids, args);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      Expr e = e_apply(gens[i], im);
      for (std::size_t j = 0; j < gens.size(); ++j) {
        auto z = unknown("z_" + prefix + "_" + std::to_string(i + 1) + std::to_string(j + 1),
                         r->vars(), monomials_between(r->size(), 0, sys.trunc - 1), 1,
                         "z_" + prefix, true);
        e = e - e_call(z, args) * e_apply(gens[j], args);
      }
      equation("preserve " + gens[i].to_string(), e, r->vars(), {}, "0");
    }
    preserve_.push_back({r, ids, prefix});
  }

  struct Preserved {
    RingPtr ring;
    std::vector<std::size_t> ids;
    std::string prefix;
  };
  std::vector<Preserved> preserve_;

 private:
  const GermMap& f_;
  const GermMap& ft_;
};

}  // namespace

IFSystem encode_ifs(GroupTag group, const GermMap& f, const GermMap& ft) {
  auto vf = validate_map(f), vft = validate_map(ft);
  if (!vf.valid) throw DomainError("f is not a valid map: " + vf.reason);
  if (!vft.valid) throw DomainError("f~ is not a valid map: " + vft.reason);
  const RingPtr& X = f.source;
  const RingPtr& Y = f.target;
  if (!same_variables(X->vars(), ft.source->vars()) || !same_variables(Y->vars(), ft.target->vars()))
    throw StructuralError("both maps must share source and target rings");

  Encoder enc(group, f, ft);
  IFSystem& sys = enc.sys;
  const auto tfree = Y->free_vars();

  if (group == GroupTag::R) {
    auto phi = enc.automorphism(X, "Phi_X", 1);
    auto im = Encoder::images(*X, phi, e_vars(X->size()));
    for (auto j : tfree)
      enc.equation("main " + Y->vars()->name(j),
                   e_const(ft.components[j]) - e_apply(f.components[j], im), X->vars(),
                   X->ideal().generators(), "J_X");
    if (!X->is_smooth()) enc.preservation(X, phi, "X");
    sys.nest = {X->vars()->names()};
    return sys;
  }

  ProductRing P = make_product_ring(X, Y);
  const VarSetPtr& PV = P.ring->vars();
  std::vector<Expr> xargs, yargs(Y->size());
  for (std::size_t i = 0; i < X->size(); ++i) xargs.push_back(e_var(P.x_index[i]));
  for (std::size_t j = 0; j < Y->size(); ++j) yargs[j] = e_var(P.y_index[j]);
  auto pvars = e_vars(P.ring->size());
  std::vector<Jet> pmod = P.ring->ideal().generators();
  std::vector<std::string> ynames;
  for (auto j : tfree) ynames.push_back(PV->name(P.y_index[j]));

  // Cofactor block a_jk over X × Y.
  auto cofactors = [&]() {
    std::vector<std::vector<std::size_t>> a(tfree.size());
    for (std::size_t j = 0; j < tfree.size(); ++j)
      for (std::size_t k = 0; k < tfree.size(); ++k)
        a[j].push_back(enc.unknown("a_" + std::to_string(j + 1) + std::to_string(k + 1), PV,
                                   monomials_between(P.ring->size(), 0, sys.trunc - 1), 2, "a",
                                   true));
    return a;
  };

  if (group == GroupTag::L || group == GroupTag::LR) {
    auto psi = enc.automorphism(Y, "Phi_Y", 1);
    std::vector<std::size_t> phi;
    std::vector<Expr> fx = xargs;
    if (group == GroupTag::LR) {
      phi = enc.automorphism(X, "Phi_X", 2);
      fx = Encoder::images(*X, phi, xargs);
    }
    auto a = cofactors();
    auto psi_im = Encoder::images(*Y, psi, yargs);
    for (std::size_t j = 0; j < tfree.size(); ++j) {
      Expr e = psi_im[tfree[j]] - e_apply(f.components[tfree[j]], fx);
      for (std::size_t k = 0; k < tfree.size(); ++k)
        e = e - (yargs[tfree[k]] - e_apply(ft.components[tfree[k]], xargs)) *
                    e_call(a[j][k], pvars);
      enc.equation("main " + Y->vars()->name(tfree[j]), e, PV, pmod, "J_X + J_Y");
    }
    if (!Y->is_smooth()) enc.preservation(Y, psi, "Y");
    if (!phi.empty() && !X->is_smooth()) enc.preservation(X, phi, "X");
    sys.nest = {ynames, PV->names()};
    return sys;
  }

  // C and K: f̃(Φ(x)) - C(x, y) = (y - f(x))·a(x, y), q(C) ∈ J_X + J_Y.
  std::vector<std::size_t> phi;
  std::vector<Expr> ftx = xargs;
  if (group == GroupTag::K) {
    phi = enc.automorphism(X, "Phi_X", 2);
    ftx = Encoder::images(*X, phi, xargs);
  }
  std::vector<Monomial> csupport;
  for (const auto& m : monomials_between(P.ring->size(), 1, sys.trunc))
    if (m.degree_in(P.y_free) > 0) csupport.push_back(m);
  std::vector<std::size_t> C;
  for (auto j : tfree) C.push_back(enc.unknown("C_" + Y->vars()->name(j), PV, csupport, 2, "C"));
  auto a = cofactors();
  for (std::size_t j = 0; j < tfree.size(); ++j) {
    Expr e = e_apply(ft.components[tfree[j]], ftx) - e_call(C[j], pvars);
    for (std::size_t k = 0; k < tfree.size(); ++k)
      e = e - (yargs[tfree[k]] - e_apply(f.components[tfree[k]], xargs)) * e_call(a[j][k], pvars);
    enc.equation("main " + Y->vars()->name(tfree[j]), e, PV, pmod, "J_X + J_Y");
  }
  if (!Y->is_smooth()) {
    std::vector<Expr> qargs = yargs;
    for (std::size_t k = 0; k < tfree.size(); ++k) qargs[tfree[k]] = e_call(C[k], pvars);
    for (const auto& q : Y->ideal().generators())
      enc.equation("contact " + q.to_string(), e_apply(q, qargs), PV, pmod, "J_X + J_Y");
  }
  if (!phi.empty() && !X->is_smooth()) enc.preservation(X, phi, "X");
  sys.nest = {ynames, PV->names()};
  return sys;
}

std::string IFSystem::to_text() const {
  std::ostringstream os;
  os << "group " << to_string(group) << "\n";
  os << "field " << field.to_string() << "\n";
  os << "trunc " << trunc << "\n";
  os << "nest";
  for (std::size_t i = 0; i < nest.size(); ++i) os << (i ? " < " : " ") << brace(nest[i]);
  os << "\n";
  for (std::size_t u = 0; u < unknowns.size(); ++u) {
    const auto& s = unknowns[u];
    bool aux = std::find(auxiliary.begin(), auxiliary.end(), u) != auxiliary.end();
    os << "unknown " << s.name << " over " << brace(s.vars->names()) << " level " << s.nest_level
       << " block " << s.block << " terms " << s.support.size() << (aux ? " auxiliary" : "")
       << "\n";
  }
  for (const auto& e : equations)
    os << "equation " << e.label << ": " << expr_to_string(e.expr, *e.ambient, unknowns)
       << " = 0 mod " << (e.modulus.empty() ? "" : e.modulus_name + " + ") << "m^"
       << e.max_degree + 1 << "\n";
  return os.str();
}

std::vector<ResidualPart> IFSystem::evaluate(const std::vector<Jet>& values) const {
  if (values.size() != unknowns.size()) throw StructuralError("one value per unknown expected");
  std::vector<ResidualPart> out;
  for (const auto& e : equations) {
    Evaluator ev(values, e.ambient, field, e.max_degree);
    Jet v = ev.eval(e.expr);
    if (!e.modulus.empty()) {
      std::vector<Jet> gens;
      for (const auto& g : e.modulus) gens.push_back(g.with_trunc(e.max_degree));
      v = IdealJet(e.ambient, field, e.max_degree, gens).normal_form(v);
    }
    if (!v.is_zero()) out.push_back({e.label, v});
  }
  return out;
}

namespace {

/// Cofactors a_k with G(y) - G(s) = Σ_k (y_k - s_k)·a_k, by telescoping
/// divided differences over the listed y variables.
std::vector<Jet> divided_differences(const Jet& G, const std::vector<std::size_t>& y,
                                     const std::vector<Jet>& s) {
  std::vector<Jet> a;
  Jet cur = G;
  for (std::size_t k = 0; k < y.size(); ++k) {
    Jet q = zero_like(G);
    const std::size_t v = y[k];
    std::vector<Jet> spow{one_like(G)};
    Jet yv = Jet::variable(G.vars(), G.field(), G.trunc(), v);
    for (const auto& [m, c] : cur.terms()) {
      int e = m.exponent(v);
      if (!e) continue;
      Monomial rest = m;
      rest.set_exponent(v, 0);
      while (static_cast<int>(spow.size()) < e) spow.push_back(spow.back() * s[k]);
      Jet sum = zero_like(G);
      Jet ypow = one_like(G);
      for (int i = 0; i < e; ++i) {
        sum = sum + ypow * spow[e - 1 - i];
        ypow = ypow * yv;
      }
      q = q + Jet::monomial(G.vars(), G.field(), G.trunc(), rest, c) * sum;
    }
    a.push_back(q);
    cur = cur.substitute(std::map<std::size_t, Jet>{{v, s[k]}});
  }
  return a;
}

}  // namespace

std::vector<Jet> ifs_values(const IFSystem& sys, const SolveReport& report, const GermMap& f,
                            const GermMap& ft) {
  if (report.verdict != Verdict::Success || !report.witness)
    throw DomainError("ifs values need a successful solve");
  const GroupElement& g = *report.witness;
  const RingPtr& X = f.source;
  const RingPtr& Y = f.target;
  const auto tfree = Y->free_vars();
  std::map<std::string, Jet> named;

  auto put_auto = [&](const std::string& prefix, const RingPtr& r, const std::vector<Jet>& im) {
    for (auto i : r->free_vars()) named.emplace(prefix + "_" + r->vars()->name(i), im[i]);
  };

  std::vector<Jet> phi_x = report.phi_x;  // Φ_X for R and LR
  if (sys.group == GroupTag::R) {
    put_auto("Phi_X", X, phi_x);
  } else if (sys.group == GroupTag::L || sys.group == GroupTag::LR) {
    ProductRing P = make_product_ring(X, Y);
    put_auto("Phi_Y", Y, report.phi_y);
    if (sys.group == GroupTag::LR) put_auto("Phi_X", X, phi_x);
    std::vector<Jet> s;
    for (auto k : tfree) s.push_back(x_to_product(P, ft.components[k]));
    for (std::size_t j = 0; j < tfree.size(); ++j) {
      Jet G = y_to_product(P, report.phi_y[tfree[j]]);
      auto a = divided_differences(G, P.y_free, s);
      for (std::size_t k = 0; k < tfree.size(); ++k)
        named.emplace("a_" + std::to_string(j + 1) + std::to_string(k + 1), a[k]);
    }
  } else {
    ProductRing P = make_product_ring(X, Y);
    std::vector<Jet> phi = g.phi ? g.phi->images : identity_automorphism(X).images;
    if (sys.group == GroupTag::K) put_auto("Phi_X", X, phi);
    // C'(x, y) = C(φ(x), y), moved from the witness's product ring.
    const ProductRing& W = g.contact->product;
    std::vector<Jet> sub(W.ring->size());
    for (std::size_t i = 0; i < X->size(); ++i)
      sub[W.x_index[i]] = x_to_product(P, phi[i]);
    for (std::size_t j = 0; j < Y->size(); ++j)
      sub[W.y_index[j]] = Jet::variable(P.ring->vars(), X->field(), X->trunc(), P.y_index[j]);
    std::vector<Jet> s;
    for (auto k : tfree) s.push_back(x_to_product(P, f.components[k]));
    for (std::size_t j = 0; j < tfree.size(); ++j) {
      Jet Cp = g.contact->C[j].substitute(sub);
      named.emplace("C_" + Y->vars()->name(tfree[j]), Cp);
      auto a = divided_differences(zero_like(Cp) - Cp, P.y_free, s);
      for (std::size_t k = 0; k < tfree.size(); ++k)
        named.emplace("a_" + std::to_string(j + 1) + std::to_string(k + 1), a[k]);
    }
    phi_x = phi;
  }

  // Cofactors of the ideal-preservation equations.
  auto put_preservation = [&](const RingPtr& r, const std::vector<Jet>& im, const std::string& p) {
    const auto& gens = r->ideal().generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      auto z = r->ideal().lift(gens[i].substitute(im));
      if (!z) throw ConsistencyError("witness does not preserve the ideal of " + r->name());
      for (std::size_t j = 0; j < gens.size(); ++j)
        named.emplace("z_" + p + "_" + std::to_string(i + 1) + std::to_string(j + 1), (*z)[j]);
    }
  };
  if (!X->is_smooth() && sys.group != GroupTag::L && sys.group != GroupTag::C)
    put_preservation(X, phi_x, "X");
  if (!Y->is_smooth() && (sys.group == GroupTag::L || sys.group == GroupTag::LR))
    put_preservation(Y, report.phi_y, "Y");

  std::vector<Jet> values;
  for (const auto& u : sys.unknowns) {
    auto it = named.find(u.name);
    if (it == named.end()) throw ConsistencyError("no value for unknown " + u.name);
    values.push_back(it->second);
  }
  return values;
}

}  // namespace germforge
