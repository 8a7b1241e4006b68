#include <catch2/catch_amalgamated.hpp>

#include "chp/pomset.hpp"

using namespace chp;

namespace {

Action A(const std::string& s) { return Action::visible(s); }

// the three concurrent traces of NC
Pomset pi1() { return Pomset::of({A("h1"), A("l1"), A("l2")}, {{0, 1}, {0, 2}}); }
Pomset pi2() { return Pomset::chain({A("h2"), A("l1"), A("l2")}); }
Pomset pi3() { return Pomset::chain({A("h2"), A("l2"), A("l1")}); }

}  // namespace

TEST_CASE("pomset isomorphism") {
  Pomset p2 = pi2();
  Pomset permuted = Pomset::of({A("l2"), A("h2"), A("l1")}, {{1, 2}, {2, 0}, {1, 0}});
  REQUIRE(pomset_iso(p2, permuted));
  REQUIRE_FALSE(pomset_iso(pi2(), pi3()));
  REQUIRE_FALSE(pomset_iso(pi1(), pi2()));

  auto w = pomset_iso_witness(p2, permuted);
  REQUIRE(w.has_value());
  for (std::size_t i = 0; i < p2.size(); ++i) {
    REQUIRE(p2.label(i) == permuted.label((*w)[i]));
    for (std::size_t j = 0; j < p2.size(); ++j)
      REQUIRE(p2.less(i, j) == permuted.less((*w)[i], (*w)[j]));
  }
}

TEST_CASE("pomset canonical form is index-invariant") {
  Pomset a = Pomset::of({A("h1"), A("l1"), A("l2")}, {{0, 1}, {0, 2}});
  Pomset b = Pomset::of({A("l2"), A("l1"), A("h1")}, {{2, 0}, {2, 1}});
  REQUIRE(a.code() == b.code());
  REQUIRE(a.is_canonical());
  REQUIRE_THROWS_AS(Pomset::of({A("x"), A("y")}, {{0, 1}, {1, 0}}), StructureError);
}

TEST_CASE("projection") {
  std::vector<Action> low{A("l1"), A("l2")};
  Pomset p1low = project(pi1(), low);
  REQUIRE(p1low.size() == 2);
  REQUIRE_FALSE(p1low.less(0, 1));
  REQUIRE_FALSE(p1low.less(1, 0));

  Pomset p2low = project(pi2(), low);
  REQUIRE(pomset_iso(p2low, Pomset::chain({A("l1"), A("l2")})));

  REQUIRE(project(pi1(), {}).size() == 0);
  REQUIRE(pomset_iso(project(pi1(), {A("h1"), A("l1"), A("l2"), A("x")}), pi1()));
}

TEST_CASE("linearizations") {
  auto lin1 = linearizations(pi1(), 100);
  REQUIRE(lin1.size() == 2);
  bool has_l1_first = false, has_l2_first = false;
  for (const auto& t : lin1) {
    has_l1_first |= pomset_iso(t, Pomset::chain({A("h1"), A("l1"), A("l2")}));
    has_l2_first |= pomset_iso(t, Pomset::chain({A("h1"), A("l2"), A("l1")}));
  }
  REQUIRE(has_l1_first);
  REQUIRE(has_l2_first);

  auto self = linearizations(pi2(), 100);
  REQUIRE(self.size() == 1);
  REQUIRE(pomset_iso(self[0], pi2()));

  auto anti = linearizations(Pomset::antichain({A("x"), A("y"), A("z")}), 100);
  REQUIRE(anti.size() == 6);

  // tomsets are isomorphy classes: equal-label interleavings collapse
  REQUIRE(linearizations(Pomset::antichain({A("x"), A("x")}), 100).size() == 1);

  REQUIRE_THROWS_AS(linearizations(Pomset::antichain({A("w"), A("x"), A("y"), A("z")}), 10),
                    ResourceError);
}

TEST_CASE("tomset recognition") {
  REQUIRE(pi2().total_order());
  REQUIRE_FALSE(pi1().total_order());
  REQUIRE(Pomset().total_order());
}
