#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"

using namespace chp;

namespace {

Net self_loop_net() {
  return NetBuilder("loop").letter("a").place("p").trans("t", {"p"}, "a", {"p"}).initial({"p"}).build();
}

Net contact_net() {
  // firing a at {p,q} re-produces the marked q
  return NetBuilder("bad")
      .letter("a")
      .place("p")
      .place("q")
      .trans("a", {"p"}, "a", {"q"})
      .initial({"p", "q"})
      .build();
}

}  // namespace

TEST_CASE("enabled transitions") {
  auto doc = load_fixture("systems_abc.chp");
  const Net& nc = doc.net("NC");

  auto at = [&](const std::vector<std::string>& names) { return nc.marking_of(names); };

  auto en0 = enabled(nc, at({"p0"}));
  REQUIRE(en0.size() == 2);
  std::set<std::string> labels;
  for (auto i : en0) labels.insert(nc.transitions[i].label.name());
  REQUIRE(labels == std::set<std::string>{"h1", "h2"});

  REQUIRE(enabled(nc, Marking(nc.place_count())).empty());

  auto en1 = enabled(nc, at({"p11", "p12"}));
  REQUIRE(en1.size() == 2);
  std::set<std::pair<std::string, std::string>> seen;
  for (auto i : en1)
    seen.insert({nc.transitions[i].label.name(), nc.place_names(nc.transitions[i].pre)[0]});
  REQUIRE(seen == std::set<std::pair<std::string, std::string>>{{"l1", "p11"}, {"l2", "p12"}});

  REQUIRE_THROWS_AS(enabled(nc, Marking(3)), StructureError);
}

TEST_CASE("firing the token game") {
  auto doc = load_fixture("systems_abc.chp");
  const Net& nc = doc.net("NC");

  const Transition& h1 = *nc.find_transition("a1");
  REQUIRE(nc.place_names(fire(nc, nc.marking_of({"p0"}), h1)) ==
          std::vector<std::string>{"p11", "p12"});

  Net loop = self_loop_net();
  REQUIRE(fire(loop, loop.initial, loop.transitions[0]) == loop.initial);

  const Transition& b3 = *nc.find_transition("b3");
  REQUIRE(nc.place_names(fire(nc, nc.marking_of({"p13"}), b3)) == std::vector<std::string>{"p23"});

  REQUIRE_THROWS_AS(fire(nc, nc.marking_of({"p0"}), b3), FiringError);
}

TEST_CASE("reachable markings") {
  auto doc = load_fixture("systems_abc.chp");
  const Net& nc = doc.net("NC");
  const Net& na = doc.net("NA");

  auto r = reach(nc);
  REQUIRE(r.size() == 10);
  REQUIRE(std::find(r.begin(), r.end(), nc.initial) != r.end());
  REQUIRE(reach(na).size() == 7);

  // cross-check against the independent oracle
  REQUIRE(oracle_reach(nc).size() == 10);
  REQUIRE(oracle_reach(na).size() == 7);
  for (const auto& m : r) {
    auto v = nc.place_names(m);
    REQUIRE(oracle_reach(nc).count(std::set<std::string>(v.begin(), v.end())) == 1);
  }

  REQUIRE(r.size() <= (std::size_t{1} << nc.place_count()));

  // determinism: repeated calls give identical ordered output
  REQUIRE(reach(nc) == r);
}

TEST_CASE("contact-freeness") {
  auto doc = load_fixture("systems_abc.chp");
  for (const auto& name : {"NA", "NB", "NC"}) REQUIRE(is_contact_free(doc.net(name)).ok);

  auto bad = contact_net();
  auto chk = is_contact_free(bad);
  REQUIRE_FALSE(chk.ok);
  REQUIRE(chk.witness->transition_id == "a");
  REQUIRE(bad.place_names(chk.witness->marking) == std::vector<std::string>{"p", "q"});
  REQUIRE(chk.witness->path.empty());
  REQUIRE_THROWS_AS(reach(bad), ContactError);

  Net tiny = NetBuilder("tiny").letter("a").place("p").place("q").trans("t", {"p"}, "a", {"q"}).initial({"p"}).build();
  REQUIRE(is_contact_free(tiny).ok);
}

TEST_CASE("reachability graph") {
  Net tiny = NetBuilder("tiny").letter("a").place("p").place("q").trans("t", {"p"}, "a", {"q"}).initial({"p"}).build();
  auto g = reachability_graph(tiny);
  REQUIRE(g.nodes.size() == 2);
  REQUIRE(g.edges.size() == 1);
  REQUIRE_FALSE(find_cycle_node(g).has_value());

  auto thl = load_fixture("test_hl.chp").test("Thl").net;
  REQUIRE(find_cycle_node(reachability_graph(thl)).has_value());

  auto nc = load_fixture("systems_abc.chp").net("NC");
  auto gc = reachability_graph(nc);
  REQUIRE(gc.nodes.size() == 10);
  REQUIRE_FALSE(find_cycle_node(gc).has_value());
  REQUIRE(gc.nodes == reach(nc));
}

TEST_CASE("dead markings") {
  auto nc = load_fixture("systems_abc.chp").net("NC");
  REQUIRE(is_dead(nc, nc.marking_of({"p31"})));
  REQUIRE_FALSE(is_dead(nc, nc.marking_of({"p0"})));
  REQUIRE_FALSE(is_dead(self_loop_net(), self_loop_net().initial));
}

TEST_CASE("net validation") {
  REQUIRE_THROWS_AS(Action::visible("tau"), StructureError);
  REQUIRE_THROWS_AS(Action::visible(""), StructureError);
  REQUIRE_THROWS_AS(Action::visible("a.b"), StructureError);
  // a net whose initial marking enables nothing is legal
  Net idle = NetBuilder("idle").letter("a").place("p").place("q").trans("t", {"q"}, "a", {"q"}).initial({"p"}).build();
  REQUIRE(is_dead(idle, idle.initial));
  REQUIRE_THROWS_AS(
      NetBuilder("dup").letter("a").place("p").place("q")
          .trans("t1", {"p"}, "a", {"q"}).trans("t2", {"p"}, "a", {"q"}).initial({"p"}).build(),
      StructureError);
}
