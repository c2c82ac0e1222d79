#pragma once

#include <map>
#include <optional>
#include <vector>

#include "germforge/scalar.hpp"

namespace germforge {

/// Row echelon form over sparse vectors. The pivot of a row is its first key
/// under Cmp; stored rows are monic, and only their pivots are mutually
/// eliminated (later keys may still carry other pivots).
template <class Key, class Cmp = std::less<Key>>
class SparseEchelon {
 public:
  using Vec = std::map<Key, Scalar, Cmp>;
  using Row = std::vector<std::pair<Key, Scalar>>;

  explicit SparseEchelon(Field field) : field_(field) {}

  Field field() const { return field_; }
  std::size_t rank() const { return rows_.size(); }
  const std::map<Key, Row, Cmp>& rows() const { return rows_; }
  bool is_pivot(const Key& k) const { return rows_.count(k) != 0; }

  /// Removes every pivot key from v; the result is the canonical
  /// representative of v modulo the row span.
  Vec reduce(Vec v) const {
    auto it = v.begin();
    while (it != v.end()) {
      auto piv = rows_.find(it->first);
      if (piv == rows_.end()) {
        ++it;
        continue;
      }
      Key at = it->first;
      Scalar c = it->second;
      v.erase(it);
      subtract(v, piv->second, c, /*skip_lead=*/true);
      it = v.upper_bound(at);
    }
    return v;
  }

  /// Like reduce, but keys failing keep() are dropped. keep must be
  /// monotone along Cmp (true on a prefix of the key order).
  template <class Keep>
  Vec reduce_prefix(Vec v, Keep keep) const {
    auto it = v.begin();
    while (it != v.end()) {
      if (!keep(it->first)) {
        v.erase(it, v.end());
        break;
      }
      auto piv = rows_.find(it->first);
      if (piv == rows_.end()) {
        ++it;
        continue;
      }
      Key at = it->first;
      Scalar c = it->second;
      v.erase(it);
      const Row& row = piv->second;
      for (std::size_t i = 1; i < row.size(); ++i) {
        if (!keep(row[i].first)) break;
        auto [jt, inserted] = v.try_emplace(row[i].first, -(c * row[i].second));
        if (!inserted) {
          jt->second -= c * row[i].second;
          if (jt->second.is_zero()) v.erase(jt);
        }
      }
      it = v.upper_bound(at);
    }
    return v;
  }

  /// Reduces v only until its leading key is not a pivot.
  Vec reduce_lead(Vec v) const {
    while (!v.empty()) {
      auto piv = rows_.find(v.begin()->first);
      if (piv == rows_.end()) break;
      Scalar c = v.begin()->second;
      v.erase(v.begin());
      subtract(v, piv->second, c, true);
    }
    return v;
  }

  /// Adds v to the span; returns false when it was already contained.
  bool insert(Vec v) {
    v = reduce_lead(std::move(v));
    if (v.empty()) return false;
    Scalar inv = v.begin()->second.inverse();
    Row row;
    row.reserve(v.size());
    for (auto& [k, c] : v) row.emplace_back(k, c * inv);
    Key lead = row.front().first;
    rows_.emplace(lead, std::move(row));
    return true;
  }

  bool contains(const Vec& v) const { return reduce(v).empty(); }

 private:
  static void subtract(Vec& v, const Row& row, const Scalar& c, bool skip_lead) {
    for (std::size_t i = skip_lead ? 1 : 0; i < row.size(); ++i) {
      auto [it, inserted] = v.try_emplace(row[i].first, -(c * row[i].second));
      if (!inserted) {
        it->second -= c * row[i].second;
        if (it->second.is_zero()) v.erase(it);
      }
    }
  }

  Field field_;
  std::map<Key, Row, Cmp> rows_;
};

/// Sparse linear system A·u = b over unknowns 0..n-1.
class LinearSystem {
 public:
  LinearSystem(Field field, std::size_t unknowns);

  std::size_t unknowns() const { return n_; }
  /// Adds the equation Σ coeffs[i]·u_i = rhs. Returns false if it made the
  /// system inconsistent.
  bool add_equation(const std::map<std::size_t, Scalar>& coeffs, const Scalar& rhs);
  bool consistent() const { return consistent_; }
  std::size_t rank() const { return ech_.rank(); }

  /// A solution with every free unknown set to zero.
  std::optional<std::vector<Scalar>> solve() const;
  /// Basis of the solution space of the homogeneous system.
  std::vector<std::vector<Scalar>> kernel() const;
  std::vector<std::size_t> free_unknowns() const;

 private:
  std::vector<Scalar> back_substitute(const std::vector<Scalar>& free_values,
                                      bool homogeneous) const;

  Field field_;
  std::size_t n_;
  // Key n_ holds the right-hand side and sorts last.
  SparseEchelon<std::size_t> ech_;
  bool consistent_ = true;
};

using Matrix = std::vector<std::vector<Scalar>>;

/// Inverse of a square matrix; nullopt if singular.
std::optional<Matrix> invert_matrix(const Matrix& a, Field field);

}  // namespace germforge
