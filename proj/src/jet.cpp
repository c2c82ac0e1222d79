#include "germforge/jet.hpp"

#include <algorithm>
#include <sstream>

namespace germforge {

Jet::Jet(VarSetPtr vars, Field field, int trunc)
    : vars_(std::move(vars)), field_(field), trunc_(trunc) {
  if (!vars_) throw StructuralError("jet without variable set");
  if (trunc < 0) throw DomainError("negative truncation degree");
}

Jet Jet::constant(VarSetPtr vars, Field field, int trunc, const Scalar& c) {
  Jet j(std::move(vars), field, trunc);
  j.add_term(Monomial{}, c);
  return j;
}

Jet Jet::variable(VarSetPtr vars, Field field, int trunc, std::size_t i) {
  if (i >= vars->size()) throw StructuralError("variable index out of range");
  Jet j(std::move(vars), field, trunc);
  j.add_term(Monomial::variable(i), Scalar::one(field));
  return j;
}

Jet Jet::variable(VarSetPtr vars, Field field, int trunc, const std::string& name) {
  auto i = vars->index_of(name);
  if (!i) throw StructuralError("unknown variable '" + name + "'");
  return variable(std::move(vars), field, trunc, *i);
}

Jet Jet::monomial(VarSetPtr vars, Field field, int trunc, const Monomial& m,
                  const Scalar& c) {
  Jet j(std::move(vars), field, trunc);
  j.add_term(m, c);
  return j;
}

Scalar Jet::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar::zero(field_) : it->second;
}

void Jet::add_term(const Monomial& m, const Scalar& c) {
  if (m.degree() > trunc_ || c.is_zero()) return;
  if (c.field() != field_) throw StructuralError("coefficient field mismatch");
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Jet::set_term(const Monomial& m, const Scalar& c) {
  if (m.degree() > trunc_) return;
  if (c.is_zero()) {
    terms_.erase(m);
    return;
  }
  if (c.field() != field_) throw StructuralError("coefficient field mismatch");
  terms_[m] = c;
}

std::optional<int> Jet::order() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first.degree();
}

Jet Jet::truncated(int k) const {
  Jet r(vars_, field_, trunc_);
  for (const auto& [m, c] : terms_) {
    if (m.degree() > k) break;
    r.terms_.emplace_hint(r.terms_.end(), m, c);
  }
  return r;
}

Jet Jet::homogeneous(int k) const {
  Jet r(vars_, field_, trunc_);
  for (const auto& [m, c] : terms_) {
    if (m.degree() > k) break;
    if (m.degree() == k) r.terms_.emplace_hint(r.terms_.end(), m, c);
  }
  return r;
}

Jet Jet::with_trunc(int trunc) const {
  Jet r(vars_, field_, trunc);
  for (const auto& [m, c] : terms_) {
    if (m.degree() > trunc) break;
    r.terms_.emplace_hint(r.terms_.end(), m, c);
  }
  return r;
}

Jet Jet::embed(const VarSetPtr& target) const {
  if (same_variables(vars_, target)) {
    Jet r = *this;
    r.vars_ = target;
    return r;
  }
  std::vector<std::size_t> map(vars_->size());
  for (std::size_t i = 0; i < vars_->size(); ++i) {
    auto j = target->index_of(vars_->name(i));
    map[i] = j ? *j : kMaxVariables;
  }
  Jet r(target, field_, trunc_);
  for (const auto& [m, c] : terms_) {
    Monomial n;
    for (std::size_t i = 0; i < vars_->size(); ++i) {
      int e = m.exponent(i);
      if (e == 0) continue;
      if (map[i] == kMaxVariables)
        throw StructuralError("variable '" + vars_->name(i) +
                              "' is missing from the target ring");
      n.set_exponent(map[i], e);
    }
    r.add_term(n, c);
  }
  return r;
}

Jet Jet::derivative(std::size_t var) const {
  Jet r(vars_, field_, trunc_);
  for (const auto& [m, c] : terms_) {
    int e = m.exponent(var);
    if (e == 0) continue;
    Monomial n = m;
    n.set_exponent(var, e - 1);
    r.add_term(n, c * Scalar(field_, e));
  }
  return r;
}

namespace {

struct PowerCache {
  Jet base;
  int order = 1;
  std::vector<Jet> powers;  // powers[e] = base^e

  const Jet& get(int e) {
    while (static_cast<int>(powers.size()) <= e) powers.push_back(powers.back() * base);
    return powers[e];
  }
};

}  // namespace

Jet Jet::substitute(const std::vector<Jet>& images) const {
  if (images.size() != vars_->size())
    throw StructuralError("substitution needs one image per variable");
  if (images.empty()) {
    throw StructuralError("substitution into a ring without variables");
  }
  const Jet& proto = images.front();
  for (const auto& g : images) {
    g.check_compatible(proto);
    if (g.field_ != field_) throw StructuralError("field mismatch in substitution");
    if (!g.constant_term().is_zero())
      throw DomainError("substituted image has a nonzero constant term");
  }
  const int D = proto.trunc_;
  std::vector<PowerCache> cache;
  cache.reserve(images.size());
  for (const auto& g : images) {
    PowerCache pc{g, g.order().value_or(D + 1), {one_like(g)}};
    cache.push_back(std::move(pc));
  }
  Jet result = zero_like(proto);
  for (const auto& [m, c] : terms_) {
    if (m.degree() > D) break;
    long low = 0;
    for (std::size_t i = 0; i < images.size(); ++i)
      low += static_cast<long>(m.exponent(i)) * cache[i].order;
    if (low > D) continue;
    Jet term = constant(proto.vars_, field_, D, c);
    for (std::size_t i = 0; i < images.size() && !term.is_zero(); ++i) {
      int e = m.exponent(i);
      if (e > 0) term = term * cache[i].get(e);
    }
    result += term;
  }
  return result;
}

Jet Jet::substitute(const std::map<std::size_t, Jet>& assignment) const {
  std::vector<Jet> images;
  images.reserve(vars_->size());
  for (std::size_t i = 0; i < vars_->size(); ++i) {
    auto it = assignment.find(i);
    if (it != assignment.end()) {
      if (!same_variables(it->second.vars_, vars_))
        throw StructuralError("partial substitution must stay in the ring");
      images.push_back(it->second.with_trunc(trunc_));
    } else {
      images.push_back(variable(vars_, field_, trunc_, i));
    }
  }
  return substitute(images);
}

Jet Jet::zero_variables(const std::vector<std::size_t>& vars) const {
  Jet r(vars_, field_, trunc_);
  for (const auto& [m, c] : terms_) {
    bool keep = true;
    for (auto v : vars)
      if (m.exponent(v) != 0) keep = false;
    if (keep) r.terms_.emplace_hint(r.terms_.end(), m, c);
  }
  return r;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

void Jet::check_compatible(const Jet& o) const {
  if (!same_variables(vars_, o.vars_)) throw StructuralError("jets over different variables");
  if (field_ != o.field_) throw StructuralError("jets over different fields");
  if (trunc_ != o.trunc_) throw StructuralError("jets with different truncation degrees");
}

Jet& Jet::operator+=(const Jet& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Jet& Jet::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.check_compatible(b);
  Jet r(a.vars_, a.field_, a.trunc_);
  const int D = a.trunc_;
  for (const auto& [ma, ca] : a.terms_) {
    int room = D - ma.degree();
    if (room < 0) break;
    for (const auto& [mb, cb] : b.terms_) {
      if (mb.degree() > room) break;
      r.add_term(ma * mb, ca * cb);
    }
  }
  return r;
}

Jet Jet::pow(int e) const {
  if (e < 0) throw DomainError("negative exponent");
  Jet result = one_like(*this);
  Jet base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

bool operator==(const Jet& a, const Jet& b) {
  if (!same_variables(a.vars_, b.vars_) || a.field_ != b.field_ || a.trunc_ != b.trunc_)
    return false;
  return a.terms_.size() == b.terms_.size() &&
         std::equal(a.terms_.begin(), a.terms_.end(), b.terms_.begin(),
                    [](const auto& x, const auto& y) {
                      return x.first == y.first && x.second == y.second;
                    });
}

std::string monomial_to_string(const VariableSet& vars, const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    int e = m.exponent(i);
    if (e == 0) continue;
    if (!out.empty()) out += '*';
    out += vars.name(i);
    if (e > 1) out += '^' + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

std::string Jet::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    std::string coeff = c.to_string();
    bool negative = !coeff.empty() && coeff[0] == '-';
    if (negative) coeff.erase(0, 1);
    std::string body;
    if (m.is_one()) {
      body = coeff;
    } else if (coeff == "1") {
      body = monomial_to_string(*vars_, m);
    } else {
      body = coeff + " " + monomial_to_string(*vars_, m);
    }
    if (first) {
      out = negative ? "-" + body : body;
      first = false;
    } else {
      out += negative ? " - " : " + ";
      out += body;
    }
  }
  return out;
}

Jet zero_like(const Jet& like) { return Jet(like.vars(), like.field(), like.trunc()); }

Jet one_like(const Jet& like) {
  return Jet::constant(like.vars(), like.field(), like.trunc(), Scalar::one(like.field()));
}

}  // namespace germforge
