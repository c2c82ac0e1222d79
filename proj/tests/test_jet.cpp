#include <doctest.h>

#include <random>

#include "germforge/ideal.hpp"

using namespace germforge;

namespace {

Jet J(const std::string& s, const VarSetPtr& v, int D, Field f = Field::rationals()) {
  return parse_jet(s, v, f, D);
}

Jet random_jet(std::mt19937& rng, const VarSetPtr& v, Field f, int D, int terms) {
  Jet j(v, f, D);
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> exp(0, D);
  std::uniform_int_distribution<std::size_t> var(0, v->size() - 1);
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    int deg = exp(rng);
    for (int k = 0; k < deg; ++k) {
      std::size_t i = var(rng);
      m.set_exponent(i, m.exponent(i) + 1);
    }
    j.add_term(m, Scalar(f, coef(rng)));
  }
  return j;
}

}  // namespace

TEST_CASE("jet multiplication truncates") {
  auto v = make_variables(std::vector<std::string>{"x"});
  CHECK(J("(1+x)*(1-x)", v, 3) == J("1-x^2", v, 3));
  CHECK(J("(1+x)*(1-x)", v, 1) == J("1", v, 1));
  CHECK(J("(x+x^2)^2", v, 3) == J("x^2+2x^3", v, 3));
  CHECK(J("x + 1/2 x^2 - 1/8 x^3", v, 4).to_string() == "x + 1/2 x^2 - 1/8 x^3");
}

TEST_CASE("mismatched jets are rejected") {
  auto v = make_variables(std::vector<std::string>{"x"});
  CHECK_THROWS_AS(J("x", v, 3) * J("x", v, 2), StructuralError);
  auto w = make_variables(std::vector<std::string>{"y"});
  CHECK_THROWS_AS(J("x", v, 3) + J("y", w, 3), StructuralError);
}

TEST_CASE("substitution") {
  auto vy = make_variables(std::vector<std::string>{"y"});
  auto vx = make_variables(std::vector<std::string>{"x"});
  CHECK(J("y^2", vy, 3).substitute({J("x+x^2", vx, 3)}) == J("x^2+2x^3", vx, 3));
  Jet sqrt1px = J("1 + 1/2 x - 1/8 x^2 + 1/16 x^3", vx, 4);
  CHECK(J("y^2", vy, 4).substitute({J("x", vx, 4) * sqrt1px}) == J("x^2+x^3", vx, 4));
  CHECK_THROWS_AS(J("y", vy, 3).substitute({J("1+x", vx, 3)}), DomainError);
}

TEST_CASE("ring axioms and substitution homomorphism") {
  std::mt19937 rng(7);
  auto v = make_variables(std::vector<std::string>{"x", "y", "z"});
  for (Field f : {Field::rationals(), Field::prime(7)}) {
    for (int i = 0; i < 1000; ++i) {
      Jet a = random_jet(rng, v, f, 4, 5), b = random_jet(rng, v, f, 4, 5),
          c = random_jet(rng, v, f, 4, 5);
      REQUIRE((a * b) * c == a * (b * c));
      REQUIRE(a * b == b * a);
      REQUIRE(a * (b + c) == a * b + a * c);
      if (i % 10 == 0) {
        std::vector<Jet> img;
        for (int k = 0; k < 3; ++k) {
          Jet g = random_jet(rng, v, f, 4, 3);
          g.set_term(Monomial{}, Scalar::zero(f));
          img.push_back(g);
        }
        REQUIRE((a * b).substitute(img) == a.substitute(img) * b.substitute(img));
        REQUIRE((a + b).substitute(img) == a.substitute(img) + b.substitute(img));
        std::vector<Jet> img2;
        for (int k = 0; k < 3; ++k) {
          Jet g = random_jet(rng, v, f, 4, 3);
          g.set_term(Monomial{}, Scalar::zero(f));
          img2.push_back(g);
        }
        std::vector<Jet> comp;
        for (auto& g : img) comp.push_back(g.substitute(img2));
        REQUIRE(a.substitute(img).substitute(img2) == a.substitute(comp));
      }
    }
  }
}

TEST_CASE("ideal normal forms") {
  auto v = make_variables({VariableBlock{"x", {"x"}, false}, VariableBlock{"y", {"y"}, false}});
  const int D = 4;
  IdealJet I(v, Field::rationals(), D, {J("y^2-x^3", v, D)});
  CHECK(I.normal_form(J("y^2", v, D)) == J("x^3", v, D));
  CHECK(I.normal_form(J("y^2-x^3", v, D)).is_zero());
  CHECK(I.member(J("x*(y^2-x^3)", v, D)));
  IdealJet zero(v, Field::rationals(), D);
  CHECK(zero.normal_form(J("x+y^3", v, D)) == J("x+y^3", v, D));
  auto vx = make_variables(std::vector<std::string>{"x"});
  IdealJet x2(vx, Field::rationals(), 3, {J("x^2", vx, 3)});
  CHECK_FALSE(x2.member(J("x", vx, 3)));
  CHECK(IdealJet(vx, Field::rationals(), 2, {J("x", vx, 2)}).quotient_monomial_basis(2).size() == 1);
  CHECK(IdealJet(vx, Field::rationals(), 2).quotient_monomial_basis(2).size() == 3);
  for (int k = 0; k <= D; ++k) {
    std::size_t all = 0;
    for (int d = 0; d <= k; ++d) all += monomials_of_degree(2, d).size();
    CHECK(I.quotient_monomial_basis(k).size() + I.rank_at(k) == all);
  }
}

TEST_CASE("ideal normal form properties and lift") {
  std::mt19937 rng(11);
  auto v = make_variables(std::vector<std::string>{"x", "y"});
  Field f = Field::rationals();
  const int D = 5;
  IdealJet I(v, f, D, {J("x^2-y^3", v, D), J("x*y+y^4", v, D)});
  for (int i = 0; i < 200; ++i) {
    Jet a = random_jet(rng, v, f, D, 6), b = random_jet(rng, v, f, D, 6);
    Jet na = I.normal_form(a);
    REQUIRE(I.normal_form(na) == na);
    REQUIRE(I.member(a - na));
    REQUIRE(I.normal_form(a + b * Scalar(f, 3)) == na + I.normal_form(b) * Scalar(f, 3));
    for (int k = 0; k <= D; ++k)
      REQUIRE(I.normal_form_at(a, k) == na.truncated(k));
    Jet m = a * I.generators()[0] + b * I.generators()[1];
    auto z = I.lift(m);
    REQUIRE(z);
    REQUIRE((*z)[0] * I.generators()[0] + (*z)[1] * I.generators()[1] == m);
  }
  CHECK_FALSE(I.lift(J("x", v, D)));
}

TEST_CASE("truncated normal forms agree with full ones") {
  std::mt19937 rng(5);
  auto v = make_variables(std::vector<std::string>{"x", "y"});
  Field f = Field::rationals();
  const int D = 6;
  IdealJet I(v, f, D, {J("y^2-x^3", v, D), J("x^2*y", v, D)});
  for (int i = 0; i < 100; ++i) {
    Jet a = random_jet(rng, v, f, D, 8);
    for (int k = 0; k <= D; ++k)
      REQUIRE(I.normal_form_low(a.with_trunc(k)) == I.normal_form(a).truncated(k).with_trunc(k));
  }
}
