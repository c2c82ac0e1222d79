#include "germforge/linalg.hpp"

namespace germforge {

LinearSystem::LinearSystem(Field field, std::size_t unknowns)
    : field_(field), n_(unknowns), ech_(field) {}

bool LinearSystem::add_equation(const std::map<std::size_t, Scalar>& coeffs,
                                const Scalar& rhs) {
  SparseEchelon<std::size_t>::Vec v;
  for (const auto& [i, c] : coeffs) {
    if (i >= n_) throw StructuralError("unknown index out of range");
    if (!c.is_zero()) v.emplace(i, c);
  }
  if (!rhs.is_zero()) v.emplace(n_, rhs);
  v = ech_.reduce_lead(std::move(v));
  if (v.empty()) return consistent_;
  if (v.begin()->first == n_) {
    consistent_ = false;
    return false;
  }
  ech_.insert(std::move(v));
  return consistent_;
}

std::vector<std::size_t> LinearSystem::free_unknowns() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n_; ++i)
    if (!ech_.is_pivot(i)) out.push_back(i);
  return out;
}

std::vector<Scalar> LinearSystem::back_substitute(const std::vector<Scalar>& free_values,
                                                  bool homogeneous) const {
  std::vector<Scalar> u = free_values;
  const auto& rows = ech_.rows();
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    const auto& row = it->second;
    Scalar val = Scalar::zero(field_);
    for (std::size_t j = 1; j < row.size(); ++j) {
      const auto& [k, c] = row[j];
      if (k == n_) {
        if (!homogeneous) val += c;
      } else {
        val -= c * u[k];
      }
    }
    u[it->first] = val;
  }
  return u;
}

std::optional<std::vector<Scalar>> LinearSystem::solve() const {
  if (!consistent_) return std::nullopt;
  return back_substitute(std::vector<Scalar>(n_, Scalar::zero(field_)), false);
}

std::vector<std::vector<Scalar>> LinearSystem::kernel() const {
  std::vector<std::vector<Scalar>> basis;
  for (std::size_t f : free_unknowns()) {
    std::vector<Scalar> init(n_, Scalar::zero(field_));
    init[f] = Scalar::one(field_);
    basis.push_back(back_substitute(init, true));
  }
  return basis;
}

std::optional<Matrix> invert_matrix(const Matrix& a, Field field) {
  const std::size_t n = a.size();
  Matrix m = a;
  Matrix inv(n, std::vector<Scalar>(n, Scalar::zero(field)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = Scalar::one(field);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    Scalar s = m[col][col].inverse();
    for (std::size_t j = 0; j < n; ++j) {
      m[col][j] *= s;
      inv[col][j] *= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      Scalar c = m[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        m[r][j] -= c * m[col][j];
        inv[r][j] -= c * inv[col][j];
      }
    }
  }
  return inv;
}

}  // namespace germforge
