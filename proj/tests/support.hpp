#pragma once

#include <random>

#include "germforge/groups.hpp"

namespace germforge::testing {

enum class RingKind { Smooth, FatPoint, Cusp };

/// A ring together with the shape of its ideal, so that valid random data
/// can be produced for it: FatPoint is (v^k) in one variable, Cusp is
/// (b^2 - a^3) in two variables a, b.
struct TestRing {
  RingPtr ring;
  RingKind kind = RingKind::Smooth;
  int fat_order = 0;
};

TestRing smooth_ring(const std::string& name, const std::vector<std::string>& vars, Field f,
                     int D, const std::vector<std::string>& params = {});
TestRing fat_point_ring(const std::string& name, const std::string& var, int k, Field f, int D);
TestRing cusp_ring(const std::string& name, const std::string& a, const std::string& b, Field f,
                   int D);

/// g with every map truncated to its linear terms: the solver seed that
/// fixes the leading-order branch.
GroupElement linear_seed(GroupElement g);

class RandomFactory {
 public:
  RandomFactory(std::uint64_t seed, int coef_range = 3) : rng_(seed), range_(coef_range) {}

  std::mt19937_64& rng() { return rng_; }
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Scalar scalar(Field f);
  Scalar nonzero_scalar(Field f);

  /// Jet with terms in degrees [min_order, max_degree] over the free
  /// variables (parameters included when with_params).
  Jet jet(const LocalRing& r, int min_order, int terms, bool with_params = false,
          int max_degree = -1);
  Jet unit(const LocalRing& r, int terms);

  Automorphism automorphism(const TestRing& r, int terms = 4);
  ContactElem contact(const TestRing& source, const TestRing& target, int terms = 4);
  GermMap map(const TestRing& source, const TestRing& target, int terms = 4);
  GroupElement element(GroupTag tag, const TestRing& source, const TestRing& target,
                       int terms = 4);

 private:
  std::mt19937_64 rng_;
  int range_;
};

}  // namespace germforge::testing
