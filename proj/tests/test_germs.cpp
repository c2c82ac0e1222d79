#include <doctest.h>

#include "germforge/germs.hpp"
#include "support.hpp"

using namespace germforge;
using namespace germforge::testing;

TEST_CASE("validate_map") {
  Field Q = Field::rationals();
  auto X = make_ring("X", {"x"}, Q, 4, {"x^3"});
  auto Y = make_ring("Y", {"y"}, Q, 4, {"y^2"});
  auto S = make_ring("S", {"y"}, Q, 4);
  CHECK(validate_map(parse_map(X, S, {"x + x^2"})).valid);
  auto bad = validate_map(parse_map(X, Y, {"x"}));
  CHECK_FALSE(bad.valid);
  CHECK(bad.generator == std::optional<std::size_t>(0));
  auto X4 = make_ring("X", {"x"}, Q, 4, {"x^4"});
  CHECK(validate_map(parse_map(X4, Y, {"x^2"})).valid);
  CHECK_FALSE(validate_map(parse_map(X, S, {"1 + x"})).valid);
}

TEST_CASE("compose_maps") {
  Field Q = Field::rationals();
  auto X = make_ring("X", {"x"}, Q, 7);
  auto Y = make_ring("Y", {"y"}, Q, 7);
  auto Z = make_ring("Z", {"z"}, Q, 7);
  GermMap f = parse_map(X, Y, {"x^2"});
  GermMap g = parse_map(Y, Z, {"y^3"});
  CHECK(compose_maps(g, f).components[0] == X->parse("x^6"));
  CHECK(compose_maps(f, identity_map(X)).components == f.components);
  CHECK(compose_maps(identity_map(Y), f).components == f.components);

  RandomFactory rf(3);
  TestRing tx = smooth_ring("X", {"x1", "x2"}, Q, 5), ty = smooth_ring("Y", {"y1", "y2"}, Q, 5),
           tz = smooth_ring("Z", {"z"}, Q, 5), tw = smooth_ring("W", {"w1", "w2"}, Q, 5);
  for (int i = 0; i < 20; ++i) {
    GermMap a = rf.map(tx, ty), b = rf.map(ty, tw), c = rf.map(tw, tz);
    CHECK(compose_maps(c, compose_maps(b, a)).components ==
          compose_maps(compose_maps(c, b), a).components);
  }
}

TEST_CASE("compositions of valid maps are valid") {
  Field Q = Field::rationals();
  RandomFactory rf(5);
  TestRing s = smooth_ring("S", {"s"}, Q, 6), c = cusp_ring("C", "a", "b", Q, 6),
           p = fat_point_ring("P", "u", 3, Q, 6), t = smooth_ring("T", {"t1", "t2"}, Q, 6);
  for (int i = 0; i < 10; ++i) {
    GermMap f = rf.map(s, c);
    GermMap g = rf.map(c, t);
    CHECK(validate_map(compose_maps(g, f)).valid);
    GermMap h = rf.map(p, p);
    CHECK(validate_map(compose_maps(h, rf.map(p, p))).valid);
  }
}

TEST_CASE("maps_equal_mod") {
  Field Q = Field::rationals();
  auto X = make_ring("X", {"x"}, Q, 5);
  auto Y = make_ring("Y", {"y"}, Q, 5);
  GermMap f = parse_map(X, Y, {"x^2"}), g = parse_map(X, Y, {"x^2 + x^3"});
  CHECK(maps_equal_mod(f, f, 6));
  CHECK(maps_equal_mod(f, g, 3));
  CHECK_FALSE(maps_equal_mod(f, g, 4));
  auto X3 = make_ring("X", {"x"}, Q, 5, {"x^3"});
  GermMap f3 = parse_map(X3, Y, {"x^2"}), g3 = parse_map(X3, Y, {"x^2 + x^3"});
  for (int d = 1; d <= 6; ++d) CHECK(maps_equal_mod(f3, g3, d));
  CHECK_THROWS_AS(maps_equal_mod(f, g, 7), DomainError);
}

TEST_CASE("central_fibre") {
  Field Q = Field::rationals();
  auto X = make_ring("X", {"x"}, Q, 4, {}, {"t"});
  auto Y = make_ring("Y", {"y"}, Q, 4, {}, {"t"});
  GermMap f = parse_map(X, Y, {"x^2 + t*x^3"});
  GermMap f0 = central_fibre(f);
  CHECK(f0.components.size() == 1);
  CHECK(f0.components[0].to_string() == "x^2");
  auto X2 = make_ring("X", {"x"}, Q, 2, {}, {"t"});
  auto Y2 = make_ring("Y", {"y"}, Q, 2, {}, {"t"});
  CHECK(central_fibre(parse_map(X2, Y2, {"x^2 + t*x"})).components[0].to_string() == "x^2");
  auto P = make_ring("P", {"x"}, Q, 4);
  auto PY = make_ring("PY", {"y"}, Q, 4);
  CHECK(central_fibre(parse_map(P, PY, {"x^3"})).components[0].to_string() == "x^3");

  auto Z = make_ring("Z", {"z"}, Q, 4, {}, {"t"});
  GermMap g = parse_map(Y, Z, {"y + t*y^2"});
  CHECK(central_fibre(compose_maps(g, f)).components ==
        compose_maps(central_fibre(g), central_fibre(f)).components);
}

TEST_CASE("product ring renames clashing variables") {
  Field Q = Field::rationals();
  auto X = make_ring("X", {"x"}, Q, 4, {"x^3"}, {"t"});
  auto Y = make_ring("Y", {"x"}, Q, 4, {"x^2"}, {"t"});
  ProductRing p = make_product_ring(X, Y);
  CHECK(p.ring->size() == 3);
  CHECK(p.ring->vars()->name(p.y_free[0]) == "x_y");
  CHECK(p.y_index[1] == p.x_index[1]);
  CHECK(p.ring->member(p.ring->parse("x_y^2 + x^3")));
}
