#include "germforge/linalg.hpp"
#include "germforge/solver.hpp"

namespace germforge {

namespace {

struct Coord {
  std::size_t comp;
  Monomial mono;
};

/// Degree first (lowest first), then component, then the local order.
struct CoordCmp {
  bool operator()(const Coord& a, const Coord& b) const {
    int da = a.mono.degree(), db = b.mono.degree();
    if (da != db) return da < db;
    if (a.comp != b.comp) return a.comp < b.comp;
    return LocalOrder{}(a.mono, b.mono);
  }
};

using Echelon = SparseEchelon<Coord, CoordCmp>;

Echelon::Vec to_vec(const LocalRing& X, const std::vector<Jet>& comps) {
  Echelon::Vec v;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    Jet nf = X.normal_form(comps[j]);
    for (const auto& [m, c] : nf.terms()) v.emplace(Coord{j, m}, c);
  }
  return v;
}

std::vector<Monomial> monomials_between(std::size_t n, int lo, int hi) {
  std::vector<Monomial> out;
  for (int d = lo; d <= hi; ++d)
    for (const auto& m : monomials_of_degree(n, d)) out.push_back(m);
  return out;
}

/// Tangent vectors Σ c_b·image(b) over the candidates b whose coefficient
/// vectors lie in the kernel of the condition map.
void add_constrained(Echelon& T, const LocalRing& X,
                     const std::vector<std::vector<Jet>>& images,
                     const std::vector<std::vector<Jet>>& conditions, const LocalRing& cond_ring) {
  const std::size_t n = images.size();
  bool any = false;
  for (const auto& c : conditions) any = any || !c.empty();
  if (!any) {
    for (const auto& im : images) T.insert(to_vec(X, im));
    return;
  }
  LinearSystem sys(X.field(), n);
  std::map<std::pair<std::size_t, Monomial>, std::map<std::size_t, Scalar>,
           bool (*)(const std::pair<std::size_t, Monomial>&, const std::pair<std::size_t, Monomial>&)>
      rows([](const std::pair<std::size_t, Monomial>& a, const std::pair<std::size_t, Monomial>& b) {
        if (a.first != b.first) return a.first < b.first;
        return LocalOrder{}(a.second, b.second);
      });
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t l = 0; l < conditions[b].size(); ++l) {
      Jet nf = cond_ring.normal_form(conditions[b][l]);
      for (const auto& [m, c] : nf.terms()) rows[{l, m}][b] = c;
    }
  for (const auto& [key, row] : rows) sys.add_equation(row, Scalar::zero(X.field()));
  for (const auto& k : sys.kernel()) {
    std::vector<Jet> v(images[0].size(), X.zero());
    for (std::size_t b = 0; b < n; ++b)
      if (!k[b].is_zero())
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = v[j] + images[b][j] * k[b];
    T.insert(to_vec(X, v));
  }
}

void right_directions(Echelon& T, const GermMap& f) {
  const LocalRing& X = *f.source;
  const int D = X.trunc();
  auto tfree = f.target->free_vars();
  std::vector<std::vector<Jet>> images, conds;
  for (auto i : X.free_vars())
    for (const auto& a : monomials_between(X.size(), 1, D)) {
      Jet xa = Jet::monomial(X.vars(), X.field(), D, a, Scalar::one(X.field()));
      std::vector<Jet> im;
      for (auto j : tfree) im.push_back(xa * f.components[j].derivative(i));
      images.push_back(std::move(im));
      std::vector<Jet> c;
      for (const auto& q : X.ideal().generators()) c.push_back(xa * q.derivative(i));
      conds.push_back(std::move(c));
    }
  add_constrained(T, X, images, conds, X);
}

void left_directions(Echelon& T, const GermMap& f) {
  const LocalRing& X = *f.source;
  const LocalRing& Y = *f.target;
  const int D = X.trunc();
  auto tfree = Y.free_vars();
  std::vector<std::vector<Jet>> images, conds;
  for (std::size_t jj = 0; jj < tfree.size(); ++jj)
    for (const auto& b : monomials_between(Y.size(), 1, D)) {
      Jet yb = Jet::monomial(Y.vars(), Y.field(), D, b, Scalar::one(Y.field()));
      std::vector<Jet> im(tfree.size(), X.zero());
      im[jj] = yb.substitute(f.components);
      images.push_back(std::move(im));
      std::vector<Jet> c;
      for (const auto& q : Y.ideal().generators()) c.push_back(yb * q.derivative(tfree[jj]));
      conds.push_back(std::move(c));
    }
  add_constrained(T, X, images, conds, Y);
}

void contact_directions(Echelon& T, const GermMap& f) {
  const RingPtr& X = f.source;
  const RingPtr& Y = f.target;
  const int D = X->trunc();
  ProductRing P = make_product_ring(X, Y);
  auto tfree = Y->free_vars();
  // Evaluation y := f(x) on the product ring.
  std::vector<Jet> at_f(P.ring->size());
  for (std::size_t i = 0; i < X->size(); ++i) at_f[P.x_index[i]] = X->var(i);
  for (std::size_t j = 0; j < Y->size(); ++j) at_f[P.y_index[j]] = f.components[j];
  std::vector<Jet> dq;  // ∂q_l/∂y_k in the product, indexed l * m + k
  for (const auto& q : Y->ideal().generators())
    for (auto k : tfree) dq.push_back(y_to_product(P, q.derivative(k)));
  const std::size_t ng = Y->ideal().generators().size();
  std::vector<std::vector<Jet>> images, conds;
  for (std::size_t jj = 0; jj < tfree.size(); ++jj)
    for (const auto& a : monomials_between(P.ring->size(), 1, D)) {
      if (a.degree_in(P.y_free) == 0) continue;
      Jet c = Jet::monomial(P.ring->vars(), X->field(), D, a, Scalar::one(X->field()));
      std::vector<Jet> im(tfree.size(), X->zero());
      im[jj] = c.substitute(at_f);
      images.push_back(std::move(im));
      std::vector<Jet> cond;
      for (std::size_t l = 0; l < ng; ++l) cond.push_back(dq[l * tfree.size() + jj] * c);
      conds.push_back(std::move(cond));
    }
  add_constrained(T, *X, images, conds, *P.ring);
}

}  // namespace

TangentReport tangent_space(GroupTag group, const GermMap& f, int k) {
  const LocalRing& X = *f.source;
  const int D = X.trunc();
  if (k < 0) throw DomainError("k must be non-negative");
  if (k + 1 > D) throw DomainError("truncation too small: need k + 1 <= D");
  auto v = validate_map(f);
  if (!v.valid) throw DomainError("invalid map: " + v.reason);

  Echelon T(X.field());
  if (uses_source_automorphism(group)) right_directions(T, f);
  if (uses_target_automorphism(group)) left_directions(T, f);
  if (uses_contact(group)) contact_directions(T, f);

  TangentReport rep;
  rep.group = group;
  rep.k = k;
  rep.dimension = T.rank();
  const std::size_t m = f.target->free_vars().size();
  for (const auto& [lead, row] : T.rows()) {
    std::vector<Jet> comps(m, X.zero());
    for (const auto& [key, c] : row) comps[key.comp].add_term(key.mono, c);
    rep.basis.push_back(std::move(comps));
    if (lead.mono.degree() <= k) ++rep.slice_dimension;
  }
  Echelon big = T;
  for (std::size_t j = 0; j < m; ++j)
    for (const auto& a : monomials_between(X.size(), k + 1, D)) {
      std::vector<Jet> comps(m, X.zero());
      comps[j] = Jet::monomial(X.vars(), X.field(), D, a, Scalar::one(X.field()));
      if (big.insert(to_vec(X, comps))) ++rep.missing;
    }
  rep.determined = rep.missing == 0;
  return rep;
}

}  // namespace germforge
