#include <doctest.h>

#include "germforge/solver.hpp"
#include "support.hpp"

using namespace germforge;
using namespace germforge::testing;

TEST_CASE("tangent space examples") {
  Field Q = Field::rationals();
  auto X = make_ring("X", {"x"}, Q, 5);
  auto Y = make_ring("Y", {"y"}, Q, 5);
  auto k = tangent_space(GroupTag::K, parse_map(X, Y, {"x^2"}), 2);
  CHECK(k.determined);
  CHECK(k.dimension == 4);  // m^2 mod m^6
  CHECK(k.slice_dimension == 1);
  for (GroupTag tag : {GroupTag::R, GroupTag::L, GroupTag::LR, GroupTag::C, GroupTag::K})
    for (int j = 0; j <= 4; ++j) CHECK_FALSE(tangent_space(tag, parse_map(X, Y, {"0"}), j).determined);
  CHECK(tangent_space(GroupTag::R, parse_map(X, Y, {"x"}), 1).determined);
  CHECK_THROWS_AS(tangent_space(GroupTag::R, parse_map(X, Y, {"x"}), 5), DomainError);
}

TEST_CASE("determinacy agrees with the solver") {
  // x^2 is 2-determined for R: every x^2 + h with h ∈ m^3 is equivalent.
  Field Q = Field::rationals();
  auto X = make_ring("X", {"x", "z"}, Q, 5);
  auto Y = make_ring("Y", {"y"}, Q, 5);
  auto f = parse_map(X, Y, {"x^2 + z^2"});
  CHECK(tangent_space(GroupTag::R, f, 2).determined);
  SolveRequest req;
  req.group = GroupTag::R;
  req.f = f;
  req.f_tilde = parse_map(X, Y, {"x^2 + z^2 + x^3 - 2 x*z^3 + z^5"});
  req.degree = 6;
  CHECK(solve_equivalence(req).verdict == Verdict::Success);
  // x*z^2 is not 3-determined for R (D_4 family needs the cubic).
  CHECK_FALSE(tangent_space(GroupTag::R, parse_map(X, Y, {"x*z^2"}), 3).determined);
}

TEST_CASE("singular source directions preserve the ideal") {
  Field Q = Field::rationals();
  auto c = cusp_ring("X", "x", "z", Q, 5);
  auto Y = make_ring("Y", {"y"}, Q, 5);
  auto f = parse_map(c.ring, Y, {"x"});
  auto T = tangent_space(GroupTag::R, f, 2);
  // ξ must preserve (z^2 - x^3): ξ_x = x·(2/3·u) etc. The x-derivative direction
  // x·∂_x alone does not, so T misses x itself.
  CHECK(T.dimension > 0);
  for (const auto& v : T.basis) CHECK(v[0].order().value_or(99) >= 1);
}
