#include "support.hpp"

namespace germforge::testing {

TestRing smooth_ring(const std::string& name, const std::vector<std::string>& vars, Field f,
                     int D, const std::vector<std::string>& params) {
  return {make_ring(name, vars, f, D, {}, params), RingKind::Smooth, 0};
}

TestRing fat_point_ring(const std::string& name, const std::string& var, int k, Field f,
                        int D) {
  return {make_ring(name, {var}, f, D, {var + "^" + std::to_string(k)}), RingKind::FatPoint, k};
}

TestRing cusp_ring(const std::string& name, const std::string& a, const std::string& b,
                   Field f, int D) {
  return {make_ring(name, {a, b}, f, D, {b + "^2 - " + a + "^3"}), RingKind::Cusp, 0};
}

Scalar RandomFactory::scalar(Field f) { return Scalar(f, uniform(-range_, range_)); }

Scalar RandomFactory::nonzero_scalar(Field f) {
  for (;;) {
    Scalar s = scalar(f);
    if (!s.is_zero()) return s;
  }
}

Jet RandomFactory::jet(const LocalRing& r, int min_order, int terms, bool with_params,
                       int max_degree) {
  Jet j = r.zero();
  std::vector<std::size_t> vars = with_params ? std::vector<std::size_t>{} : r.free_vars();
  if (with_params)
    for (std::size_t i = 0; i < r.size(); ++i) vars.push_back(i);
  if (vars.empty()) return j;
  int hi = max_degree < 0 ? r.trunc() : std::min(max_degree, r.trunc());
  if (min_order > hi) return j;
  for (int t = 0; t < terms; ++t) {
    int deg = uniform(min_order, hi);
    Monomial m;
    for (int k = 0; k < deg; ++k) {
      std::size_t v = vars[uniform(0, static_cast<int>(vars.size()) - 1)];
      m.set_exponent(v, m.exponent(v) + 1);
    }
    j.add_term(m, scalar(r.field()));
  }
  return j;
}

Jet RandomFactory::unit(const LocalRing& r, int terms) {
  return Jet::constant(r.vars(), r.field(), r.trunc(), nonzero_scalar(r.field())) +
         jet(r, 1, terms);
}

Automorphism RandomFactory::automorphism(const TestRing& tr, int terms) {
  const LocalRing& r = *tr.ring;
  Automorphism a = identity_automorphism(tr.ring);
  auto free = r.free_vars();
  switch (tr.kind) {
    case RingKind::Cusp: {
      Jet u = unit(r, terms);
      Jet q = r.ideal().generators().front();
      a.images[free[0]] = u * u * r.var(free[0]) + q * jet(r, 0, terms);
      a.images[free[1]] = u * u * u * r.var(free[1]) + q * jet(r, 0, terms);
      return a;
    }
    case RingKind::FatPoint:
    case RingKind::Smooth:
      for (;;) {
        for (auto i : free) {
          Jet lin = r.zero();
          for (auto j : free) lin.add_term(Monomial::variable(j), scalar(r.field()));
          a.images[i] = lin + jet(r, 2, terms);
        }
        if (invert_matrix(linear_part(a.images, free), r.field())) return a;
      }
  }
  return a;
}

ContactElem RandomFactory::contact(const TestRing& source, const TestRing& target, int terms) {
  ContactElem c = identity_contact(source.ring, target.ring);
  const LocalRing& p = *c.product.ring;
  const auto& yf = c.product.y_free;
  switch (target.kind) {
    case RingKind::Cusp: {
      Jet u = unit(p, terms);
      Jet q = y_to_product(c.product, target.ring->ideal().generators().front());
      c.C[0] = u * u * p.var(yf[0]) + q * jet(p, 0, terms);
      c.C[1] = u * u * u * p.var(yf[1]) + q * jet(p, 0, terms);
      return c;
    }
    case RingKind::FatPoint:
    case RingKind::Smooth:
      for (;;) {
        std::vector<std::vector<Jet>> A(yf.size(), std::vector<Jet>(yf.size(), p.zero()));
        std::vector<std::vector<Scalar>> lin(yf.size(), std::vector<Scalar>(yf.size()));
        for (std::size_t j = 0; j < yf.size(); ++j)
          for (std::size_t i = 0; i < yf.size(); ++i) {
            lin[j][i] = scalar(p.field());
            A[j][i] = Jet::constant(p.vars(), p.field(), p.trunc(), lin[j][i]) +
                      jet(p, 1, terms, true);
          }
        if (!invert_matrix(lin, p.field())) continue;
        for (std::size_t j = 0; j < yf.size(); ++j) {
          c.C[j] = p.zero();
          for (std::size_t i = 0; i < yf.size(); ++i) c.C[j] += A[j][i] * p.var(yf[i]);
        }
        return c;
      }
  }
  return c;
}

GermMap RandomFactory::map(const TestRing& source, const TestRing& target, int terms) {
  const LocalRing& x = *source.ring;
  const int D = x.trunc();
  auto tfree = target.ring->free_vars();
  std::vector<Jet> comps;
  switch (target.kind) {
    case RingKind::Smooth:
      for (std::size_t k = 0; k < tfree.size(); ++k) comps.push_back(jet(x, 1, terms, true));
      break;
    case RingKind::Cusp: {
      Jet h = jet(x, 1, terms);
      comps = {h * h, h * h * h};
      break;
    }
    case RingKind::FatPoint: {
      for (int attempt = 0;; ++attempt) {
        int low = attempt < 20 ? 1 : (D + target.fat_order) / target.fat_order;
        Jet h = jet(x, low, terms);
        comps = {h};
        if (validate_map(make_map(source.ring, target.ring, comps)).valid) break;
      }
      break;
    }
  }
  GermMap f = make_map(source.ring, target.ring, comps);
  if (!validate_map(f).valid) throw ConsistencyError("random map is invalid");
  return f;
}

GroupElement RandomFactory::element(GroupTag tag, const TestRing& source, const TestRing& target,
                                    int terms) {
  GroupElement g = identity_element(tag, source.ring, target.ring);
  if (g.phi) g.phi = automorphism(source, terms);
  if (g.psi) g.psi = automorphism(target, terms);
  if (g.contact) g.contact = contact(source, target, terms);
  return g;
}

GroupElement linear_seed(GroupElement g) {
  if (g.phi)
    for (auto& j : g.phi->images) j = j.truncated(1);
  if (g.psi)
    for (auto& j : g.psi->images) j = j.truncated(1);
  if (g.contact)
    for (auto& j : g.contact->C) j = j.truncated(1);
  return g;
}

}  // namespace germforge::testing
