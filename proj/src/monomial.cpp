#include "germforge/monomial.hpp"

#include <algorithm>

#include "germforge/errors.hpp"

namespace germforge {

Monomial Monomial::variable(std::size_t i) {
  Monomial m;
  m.set_exponent(i, 1);
  return m;
}

Monomial Monomial::from_exponents(const std::vector<int>& exps) {
  if (exps.size() > kMaxVariables) throw StructuralError("too many exponents");
  Monomial m;
  for (std::size_t i = 0; i < exps.size(); ++i) m.set_exponent(i, exps[i]);
  return m;
}

void Monomial::set_exponent(std::size_t i, int e) {
  if (i >= kMaxVariables) throw StructuralError("variable index out of range");
  if (e < 0 || e > 255) throw DomainError("exponent out of range");
  degree_ += e - exps_[i];
  exps_[i] = static_cast<std::uint8_t>(e);
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    const int e = exps_[i] + o.exps_[i];
    if (e > 255) throw DomainError("exponent overflow");
    r.exps_[i] = static_cast<std::uint8_t>(e);
  }
  r.degree_ = degree_ + o.degree_;
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  for (std::size_t i = 0; i < kMaxVariables; ++i)
    if (exps_[i] > o.exps_[i]) return false;
  return true;
}

Monomial Monomial::quotient_of(const Monomial& o) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVariables; ++i)
    r.exps_[i] = static_cast<std::uint8_t>(o.exps_[i] - exps_[i]);
  r.degree_ = o.degree_ - degree_;
  return r;
}

int Monomial::degree_in(const std::vector<std::size_t>& vars) const {
  int d = 0;
  for (auto i : vars) d += exps_[i];
  return d;
}

std::size_t Monomial::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (auto e : exps_) h = (h ^ e) * 1099511628211ull;
  return h;
}

bool LocalOrder::operator()(const Monomial& a, const Monomial& b) const {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    if (a.exponent(i) != b.exponent(i)) return a.exponent(i) > b.exponent(i);
  }
  return false;
}

namespace {

void enumerate(std::size_t nvars, std::size_t pos, int remaining, Monomial& cur,
               std::vector<Monomial>& out) {
  if (pos + 1 == nvars) {
    cur.set_exponent(pos, remaining);
    out.push_back(cur);
    cur.set_exponent(pos, 0);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur.set_exponent(pos, e);
    enumerate(nvars, pos + 1, remaining - e, cur, out);
  }
  cur.set_exponent(pos, 0);
}

}  // namespace

std::vector<Monomial> monomials_of_degree(std::size_t nvars, int d) {
  std::vector<Monomial> out;
  if (nvars == 0) {
    if (d == 0) out.emplace_back();
    return out;
  }
  Monomial cur;
  enumerate(nvars, 0, d, cur, out);
  return out;
}

MonomialIndex::MonomialIndex(std::size_t nvars, int max_degree)
    : nvars_(nvars), max_degree_(max_degree) {
  for (int d = 0; d <= max_degree; ++d) {
    auto layer = monomials_of_degree(nvars, d);
    monomials_.insert(monomials_.end(), layer.begin(), layer.end());
  }
  index_.reserve(monomials_.size());
  for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i], i);
}

std::size_t MonomialIndex::count_up_to(int k) const {
  if (k < 0) return 0;
  if (k >= max_degree_) return monomials_.size();
  auto it = std::upper_bound(monomials_.begin(), monomials_.end(), k,
                             [](int deg, const Monomial& m) { return deg < m.degree(); });
  return static_cast<std::size_t>(it - monomials_.begin());
}

}  // namespace germforge
