#include "germforge/engine.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace germforge {

namespace {

struct CoordKey {
  std::size_t eq;
  Monomial mono;
};

struct CoordOrder {
  bool operator()(const CoordKey& a, const CoordKey& b) const {
    if (a.eq != b.eq) return a.eq < b.eq;
    return LocalOrder{}(a.mono, b.mono);
  }
};

using Coords = std::map<CoordKey, Scalar, CoordOrder>;

class Engine {
 public:
  Engine(const Problem& p, const EngineOptions& o) : p_(p), opts_(o), values_(p.seed) {
    std::vector<std::size_t> order(p.unknowns.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return p.unknowns[a].priority < p.unknowns[b].priority;
    });
    for (auto u : order)
      for (const auto& m : p.unknowns[u].support) coefs_.push_back(CoefRef{u, m});
    entered_.assign(coefs_.size(), false);
    for (const auto& group : p.invertible)
      for (const auto& row : group)
        for (const auto& c : row) leading_.insert(index_of(c));
  }

  EngineResult run();

 private:
  std::size_t index_of(const CoefRef& c) const {
    for (std::size_t i = 0; i < coefs_.size(); ++i)
      if (coefs_[i].unknown == c.unknown && coefs_[i].mono == c.mono) return i;
    throw StructuralError("invertibility refers to a coefficient outside the support");
  }

  int eq_trunc(std::size_t e, int r) const { return std::min(r, p_.equations[e].max_degree); }

  Coords residual_coords(int r, std::vector<Evaluator>* evals = nullptr);
  std::vector<Coords> columns(int r, const std::vector<std::size_t>& which);
  bool solve_newton(int r, const std::vector<std::size_t>& S, StageLog& log);
  bool enumerate(int r, const std::vector<std::size_t>& S);
  Scalar coef(std::size_t i) const { return values_[coefs_[i].unknown].coefficient(coefs_[i].mono); }
  void set_coef(std::size_t i, const Scalar& v) {
    values_[coefs_[i].unknown].set_term(coefs_[i].mono, v);
  }

  const Problem& p_;
  EngineOptions opts_;
  std::vector<Jet> values_;
  std::vector<CoefRef> coefs_;
  std::vector<bool> entered_;
  std::set<std::size_t> leading_;
};

Coords Engine::residual_coords(int r, std::vector<Evaluator>* evals) {
  Coords out;
  for (std::size_t e = 0; e < p_.equations.size(); ++e) {
    const auto& eq = p_.equations[e];
    int k = eq_trunc(e, r);
    if (k < 0) continue;
    Evaluator ev(values_, eq.ambient, p_.field, k);
    Jet v = ev.eval(eq.expr);
    if (eq.modulus) v = eq.modulus->normal_form_low(v);
    for (const auto& [m, c] : v.terms()) out.emplace(CoordKey{e, m}, c);
    if (evals) evals->push_back(std::move(ev));
  }
  return out;
}

std::vector<Coords> Engine::columns(int r, const std::vector<std::size_t>& which) {
  std::vector<Coords> cols(which.size());
  std::map<std::size_t, std::vector<std::size_t>> by_unknown;
  for (std::size_t k = 0; k < which.size(); ++k) by_unknown[coefs_[which[k]].unknown].push_back(k);
  for (std::size_t e = 0; e < p_.equations.size(); ++e) {
    const auto& eq = p_.equations[e];
    int t = eq_trunc(e, r);
    if (t < 0) continue;
    Evaluator ev(values_, eq.ambient, p_.field, t);
    auto occs = ev.linearize(eq.expr);
    for (const auto& occ : occs) {
      auto it = by_unknown.find(occ.unknown);
      if (it == by_unknown.end()) continue;
      // Powers of the arguments, grown on demand.
      std::vector<std::vector<Jet>> pw(occ.args.size());
      for (std::size_t i = 0; i < occ.args.size(); ++i)
        pw[i].push_back(Jet::constant(eq.ambient, p_.field, t, Scalar::one(p_.field)));
      for (std::size_t k : it->second) {
        const Monomial& m = coefs_[which[k]].mono;
        if (m.degree() > t) continue;
        Jet term = occ.adjoint;
        for (std::size_t i = 0; i < occ.args.size() && !term.is_zero(); ++i) {
          int ex = m.exponent(i);
          if (!ex) continue;
          while (static_cast<int>(pw[i].size()) <= ex) pw[i].push_back(pw[i].back() * occ.args[i]);
          term = term * pw[i][ex];
        }
        if (term.is_zero()) continue;
        if (eq.modulus) term = eq.modulus->normal_form_low(term);
        for (const auto& [mono, c] : term.terms()) {
          auto [pos, ins] = cols[k].try_emplace(CoordKey{e, mono}, c);
          if (!ins) {
            pos->second += c;
            if (pos->second.is_zero()) cols[k].erase(pos);
          }
        }
      }
    }
  }
  return cols;
}

bool Engine::solve_newton(int r, const std::vector<std::size_t>& S, StageLog& log) {
  std::vector<Jet> start = values_;
  int kernel_tries = 0;
  for (int iter = 0; iter <= opts_.max_newton; ++iter) {
    Coords R = residual_coords(r);
    if (R.empty()) {
      if (invertibility_holds(p_, values_)) return true;
      if (kernel_tries >= 3) break;
    }
    auto cols = columns(r, S);
    std::map<CoordKey, std::map<std::size_t, Scalar>, CoordOrder> rows;
    for (std::size_t k = 0; k < S.size(); ++k)
      for (const auto& [key, c] : cols[k]) rows[key][k] = c;
    LinearSystem sys(p_.field, S.size());
    bool ok = true;
    for (const auto& [key, c] : R)
      if (!rows.count(key)) ok = false;
    if (!ok) break;
    for (const auto& [key, row] : rows) {
      auto it = R.find(key);
      Scalar rhs = it == R.end() ? Scalar::zero(p_.field) : -it->second;
      if (!sys.add_equation(row, rhs)) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
    log.equations = rows.size();
    log.rank = sys.rank();
    auto delta = *sys.solve();
    if (R.empty()) {
      // Residual is zero but a linear part degenerated: move along the kernel.
      auto ker = sys.kernel();
      if (ker.empty()) break;
      ++kernel_tries;
      std::fill(delta.begin(), delta.end(), Scalar::zero(p_.field));
      for (std::size_t b = 0; b < ker.size(); ++b) {
        Scalar w(p_.field, static_cast<long>((b * 7 + kernel_tries * 3) % 5) + 1);
        for (std::size_t k = 0; k < S.size(); ++k) delta[k] += w * ker[b][k];
      }
    }
    bool blown = false;
    for (std::size_t k = 0; k < S.size(); ++k)
      if (!delta[k].is_zero()) {
        Scalar v = coef(S[k]) + delta[k];
        blown = blown || v.bits() > opts_.max_bits;
        set_coef(S[k], v);
      }
    // Growing heights mean an irrational or non-convergent branch.
    if (blown) break;
  }
  values_ = start;
  return false;
}

bool Engine::enumerate(int r, const std::vector<std::size_t>& S) {
  if (p_.field.is_rational() || S.empty()) return false;
  const std::uint64_t q = p_.field.size();
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < S.size(); ++k) {
    if (total > opts_.enumeration_limit / q) return false;
    total *= q;
  }
  std::vector<Jet> start = values_;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t k = 0; k < S.size(); ++k) {
      // Enumerate around the current values so that code 0 is the status quo.
      Scalar base = start[coefs_[S[k]].unknown].coefficient(coefs_[S[k]].mono);
      set_coef(S[k], base + Scalar(p_.field, static_cast<long>(c % q)));
      c /= q;
    }
    if (residual_coords(r).empty() && invertibility_holds(p_, values_)) return true;
  }
  values_ = start;
  return false;
}

EngineResult Engine::run() {
  EngineResult res;
  int max_stage = 0;
  for (const auto& eq : p_.equations) max_stage = std::max(max_stage, eq.max_degree);
  // Pivot preference: unknown priority, then higher-degree coefficients, which
  // enter the current stage linearly, before lower-degree ones.
  auto pivot_order = [&](std::size_t a, std::size_t b) {
    int pa = p_.unknowns[coefs_[a].unknown].priority;
    int pb = p_.unknowns[coefs_[b].unknown].priority;
    if (pa != pb) return pa < pb;
    return coefs_[a].mono.degree() > coefs_[b].mono.degree();
  };
  for (int r = 0; r <= max_stage; ++r) {
    StageLog log;
    log.order = r;
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < coefs_.size(); ++i)
      if (!entered_[i] && coefs_[i].mono.degree() <= r) cand.push_back(i);
    std::vector<std::size_t> S;
    if (!cand.empty()) {
      auto cols = columns(r, cand);
      for (std::size_t k = 0; k < cand.size(); ++k)
        if (!cols[k].empty()) S.push_back(cand[k]);
    }
    std::stable_sort(S.begin(), S.end(), pivot_order);
    for (auto i : S) entered_[i] = true;
    log.unknowns = S.size();
    Coords R = residual_coords(r);
    if (R.empty() && invertibility_holds(p_, values_)) {
      log.method = "none";
      res.log.push_back(log);
      continue;
    }
    bool ok = !S.empty() && solve_newton(r, S, log);
    if (ok) log.method = "linear";
    std::vector<std::size_t> ext;
    if (!ok) {
      for (std::size_t i = 0; i < coefs_.size(); ++i)
        if (entered_[i]) ext.push_back(i);
      std::stable_sort(ext.begin(), ext.end(), pivot_order);
      if (ext.size() > S.size()) {
        ok = solve_newton(r, ext, log);
        if (ok) {
          log.method = "linear-extended";
          log.unknowns = ext.size();
        }
      }
    }
    // Retry keeping already nonzero coefficients in place as long as possible.
    auto zero_first = [&](std::size_t a, std::size_t b) {
      int pa = p_.unknowns[coefs_[a].unknown].priority;
      int pb = p_.unknowns[coefs_[b].unknown].priority;
      if (pa != pb) return pa < pb;
      bool za = coef(a).is_zero(), zb = coef(b).is_zero();
      if (za != zb) return za;
      return coefs_[a].mono.degree() > coefs_[b].mono.degree();
    };
    for (auto* set : {&S, &ext}) {
      if (ok || set->empty()) continue;
      auto alt = *set;
      std::stable_sort(alt.begin(), alt.end(), zero_first);
      if (alt == *set) continue;
      ok = solve_newton(r, alt, log);
      if (ok) log.method = set == &S ? "linear-reordered" : "linear-extended-reordered";
    }
    if (!ok && enumerate(r, S)) {
      ok = true;
      log.method = "enumeration";
    }
    if (!ok && ext.size() > S.size() && enumerate(r, ext)) {
      ok = true;
      log.method = "enumeration-extended";
    }
    res.log.push_back(log);
    if (!ok) {
      res.outcome = EngineOutcome::Obstructed;
      res.order = r;
      res.leading_stage = std::any_of(ext.empty() ? S.begin() : ext.begin(),
                                      ext.empty() ? S.end() : ext.end(),
                                      [&](std::size_t i) { return leading_.count(i) != 0; }) ||
                          !invertibility_holds(p_, values_);
      R = residual_coords(r);
      std::map<std::size_t, Jet> parts;
      for (const auto& [key, c] : R) {
        auto it = parts.find(key.eq);
        if (it == parts.end())
          it = parts.emplace(key.eq, Jet(p_.equations[key.eq].ambient, p_.field, r)).first;
        it->second.add_term(key.mono, c);
      }
      for (auto& [e, j] : parts) res.residual.push_back({p_.equations[e].label, j});
      res.values = values_;
      return res;
    }
  }
  res.values = values_;
  if (!residuals(p_, values_).empty()) throw ConsistencyError("engine solution does not verify");
  return res;
}

}  // namespace

EngineResult run_engine(const Problem& p, const EngineOptions& opts) {
  if (p.seed.size() != p.unknowns.size()) throw StructuralError("seed size mismatch");
  return Engine(p, opts).run();
}

std::vector<ResidualPart> residuals(const Problem& p, const std::vector<Jet>& values) {
  std::vector<ResidualPart> out;
  for (const auto& eq : p.equations) {
    Evaluator ev(values, eq.ambient, p.field, eq.max_degree);
    Jet v = ev.eval(eq.expr);
    if (eq.modulus) v = eq.modulus->normal_form_low(v);
    if (!v.is_zero()) out.push_back({eq.label, v});
  }
  return out;
}

bool invertibility_holds(const Problem& p, const std::vector<Jet>& values) {
  for (const auto& group : p.invertible) {
    Matrix m;
    for (const auto& row : group) {
      std::vector<Scalar> r;
      for (const auto& c : row) r.push_back(values[c.unknown].coefficient(c.mono));
      m.push_back(std::move(r));
    }
    if (!invert_matrix(m, p.field)) return false;
  }
  return true;
}

}  // namespace germforge
