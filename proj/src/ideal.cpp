#include "germforge/ideal.hpp"

#include <algorithm>
#include <functional>

namespace germforge {

namespace {

using MonoEchelon = SparseEchelon<Monomial, LocalOrder>;

MonoEchelon::Vec to_vec(const Jet& j) {
  MonoEchelon::Vec v;
  for (const auto& [m, c] : j.terms()) v.emplace_hint(v.end(), m, c);
  return v;
}

// All multipliers m with deg(m) + ord(q) <= D, i.e. monomials of degree
// <= D - ord(q).
template <class F>
void for_each_monomial_up_to(std::size_t nvars, int max_degree, F&& f) {
  for (int d = 0; d <= max_degree; ++d)
    for (const auto& m : monomials_of_degree(nvars, d)) f(m);
}

void enumerate_in_subset(const std::vector<std::size_t>& vars, std::size_t pos, int left,
                         Monomial& cur, std::vector<Monomial>& out) {
  if (pos + 1 == vars.size()) {
    cur.set_exponent(vars[pos], left);
    out.push_back(cur);
    cur.set_exponent(vars[pos], 0);
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur.set_exponent(vars[pos], e);
    enumerate_in_subset(vars, pos + 1, left - e, cur, out);
  }
  cur.set_exponent(vars[pos], 0);
}

struct TaggedKey {
  Monomial mono;
  int gen = -1;  // >= 0: tag coordinate (generator index, multiplier mono)
};

struct TaggedOrder {
  bool operator()(const TaggedKey& a, const TaggedKey& b) const {
    if ((a.gen >= 0) != (b.gen >= 0)) return a.gen < 0;
    if (a.gen != b.gen) return a.gen < b.gen;
    return LocalOrder{}(a.mono, b.mono);
  }
};

}  // namespace

IdealJet::IdealJet(VarSetPtr vars, Field field, int trunc, std::vector<Jet> generators)
    : vars_(std::move(vars)), field_(field), trunc_(trunc) {
  auto ech = std::make_shared<MonoEchelon>(field_);
  for (auto& g : generators) {
    Jet q = g.embed(vars_).with_trunc(trunc_);
    if (q.field() != field_) throw StructuralError("generator over a different field");
    gens_.push_back(q);
  }
  // Low-order generators first keeps rows short.
  std::vector<std::size_t> order(gens_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return gens_[a].order().value_or(trunc_ + 1) < gens_[b].order().value_or(trunc_ + 1);
  });
  for (std::size_t gi : order) {
    const Jet& q = gens_[gi];
    auto ord = q.order();
    if (!ord) continue;
    for_each_monomial_up_to(vars_->size(), trunc_ - *ord, [&](const Monomial& m) {
      MonoEchelon::Vec v;
      for (const auto& [qm, c] : q.terms()) {
        Monomial p = m * qm;
        if (p.degree() <= trunc_) v.emplace(p, c);
      }
      ech->insert(std::move(v));
    });
  }
  ech_ = std::move(ech);
}

void IdealJet::check(const Jet& p) const {
  if (!same_variables(p.vars(), vars_)) throw StructuralError("jet and ideal over different variables");
  if (p.field() != field_) throw StructuralError("jet and ideal over different fields");
  if (p.trunc() != trunc_) throw StructuralError("jet and ideal with different truncation");
}

Jet IdealJet::normal_form(const Jet& p) const {
  check(p);
  auto v = ech_->reduce(to_vec(p));
  Jet r(p.vars(), field_, trunc_);
  for (const auto& [m, c] : v) r.add_term(m, c);
  return r;
}

Jet IdealJet::normal_form_at(const Jet& p, int k) const {
  return normal_form(p.truncated(k)).truncated(k);
}

Jet IdealJet::normal_form_low(const Jet& p) const {
  if (!same_variables(p.vars(), vars_)) throw StructuralError("jet and ideal over different variables");
  if (p.field() != field_) throw StructuralError("jet and ideal over different fields");
  if (p.trunc() > trunc_) throw StructuralError("jet truncated above the ideal");
  const int k = p.trunc();
  auto v = ech_->reduce_prefix(to_vec(p), [k](const Monomial& m) { return m.degree() <= k; });
  Jet r(p.vars(), field_, k);
  for (const auto& [m, c] : v) r.add_term(m, c);
  return r;
}

bool IdealJet::member(const Jet& p) const {
  check(p);
  return ech_->contains(to_vec(p));
}

std::vector<Monomial> IdealJet::quotient_monomial_basis(int k) const {
  if (k > trunc_) throw DomainError("degree above the truncation");
  std::vector<Monomial> out;
  for_each_monomial_up_to(vars_->size(), k, [&](const Monomial& m) {
    if (!ech_->is_pivot(m)) out.push_back(m);
  });
  return out;
}

std::size_t IdealJet::rank_at(int k) const {
  std::size_t n = 0;
  for (const auto& [lead, row] : ech_->rows())
    if (lead.degree() <= k) ++n;
  return n;
}

std::vector<Jet> IdealJet::reduced_basis(int k) const {
  std::vector<Jet> out;
  for (const auto& [lead, row] : ech_->rows()) {
    if (lead.degree() > k) continue;
    Jet j(vars_, field_, trunc_);
    for (const auto& [m, c] : row)
      if (m.degree() <= k) j.add_term(m, c);
    out.push_back(std::move(j));
  }
  return out;
}

std::optional<std::vector<Jet>> IdealJet::lift(const Jet& p) const {
  check(p);
  SparseEchelon<TaggedKey, TaggedOrder> ech(field_);
  for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
    const Jet& q = gens_[gi];
    auto ord = q.order();
    if (!ord) continue;
    for_each_monomial_up_to(vars_->size(), trunc_ - *ord, [&](const Monomial& m) {
      SparseEchelon<TaggedKey, TaggedOrder>::Vec v;
      for (const auto& [qm, c] : q.terms()) {
        Monomial prod = m * qm;
        if (prod.degree() <= trunc_) v.emplace(TaggedKey{prod, -1}, c);
      }
      v.emplace(TaggedKey{m, static_cast<int>(gi)}, Scalar::one(field_));
      ech.insert(std::move(v));
    });
  }
  SparseEchelon<TaggedKey, TaggedOrder>::Vec v;
  for (const auto& [m, c] : p.terms()) v.emplace(TaggedKey{m, -1}, c);
  v = ech.reduce(std::move(v));
  std::vector<Jet> z(gens_.size(), Jet(vars_, field_, trunc_));
  for (const auto& [k, c] : v) {
    if (k.gen < 0) return std::nullopt;
    z[k.gen].add_term(k.mono, -c);
  }
  return z;
}

IdealJet IdealJet::plus(const std::vector<Jet>& extra) const {
  std::vector<Jet> g = gens_;
  g.insert(g.end(), extra.begin(), extra.end());
  return IdealJet(vars_, field_, trunc_, std::move(g));
}

IdealJet IdealJet::embed(const VarSetPtr& target) const {
  return IdealJet(target, field_, trunc_, gens_);
}

IdealJet IdealJet::with_trunc(int trunc) const {
  std::vector<Jet> g;
  for (const auto& q : gens_) g.push_back(q.with_trunc(trunc));
  return IdealJet(vars_, field_, trunc, std::move(g));
}

std::vector<Jet> power_of_maximal_ideal(const VarSetPtr& vars, Field field, int trunc,
                                        const std::vector<std::size_t>& var_indices, int k) {
  std::vector<Jet> out;
  if (k > trunc) return out;
  if (var_indices.empty()) {
    if (k == 0) out.push_back(Jet::constant(vars, field, trunc, Scalar::one(field)));
    return out;
  }
  std::vector<Monomial> monos;
  Monomial cur;
  enumerate_in_subset(var_indices, 0, k, cur, monos);
  for (const auto& m : monos) out.push_back(Jet::monomial(vars, field, trunc, m, Scalar::one(field)));
  return out;
}

std::vector<Jet> power_of_ideal(const std::vector<Jet>& gens, int k) {
  if (gens.empty()) return {};
  // Products over multisets of generators: indices non-decreasing.
  std::vector<std::pair<Jet, std::size_t>> cur{{one_like(gens.front()), 0}};
  for (int i = 0; i < k; ++i) {
    std::vector<std::pair<Jet, std::size_t>> next;
    for (const auto& [a, from] : cur)
      for (std::size_t g = from; g < gens.size(); ++g) {
        Jet p = a * gens[g];
        if (!p.is_zero()) next.emplace_back(std::move(p), g);
      }
    cur = std::move(next);
  }
  std::vector<Jet> out;
  for (auto& [p, g] : cur) out.push_back(std::move(p));
  return out;
}

}  // namespace germforge
