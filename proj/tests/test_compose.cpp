#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"

using namespace chp;

namespace {

Action A(const std::string& s) { return Action::visible(s); }

using EdgeTriples = std::set<std::tuple<std::set<std::string>, std::string, std::set<std::string>>>;

EdgeTriples edge_triples(const Net& n) {
  EdgeTriples out;
  auto g = reachability_graph(n);
  auto names = [&](const Marking& m) {
    auto v = n.place_names(m);
    return std::set<std::string>(v.begin(), v.end());
  };
  for (const auto& e : g.edges)
    out.insert({names(g.nodes[e.from]), n.transitions[e.transition].label.name(), names(g.nodes[e.to])});
  return out;
}

const CausalRun& run_with_pomset(const RunEnumeration& en, const Pomset& p) {
  for (const auto& r : en.maximal)
    if (pomset_iso(pomset_of(r), p)) return r;
  throw std::runtime_error("no run with the requested pomset");
}

}  // namespace

TEST_CASE("composition structure") {
  Net a = NetBuilder("A").letter("x").place("p1").place("p2").trans("t", {"p1"}, "x", {"p2"}).initial({"p1"}).build();
  Net b = NetBuilder("B").letter("y").place("q1").place("q2").trans("t", {"q1"}, "y", {"q2"}).initial({"q1"}).build();

  // disjoint alphabets: plain disjoint union
  Net ab = compose(a, b);
  REQUIRE(ab.transitions.size() == 2);
  REQUIRE(ab.place_count() == 4);
  REQUIRE(ab.alphabet.size() == 2);

  auto doc = load_fixture("systems_abc.chp");
  auto tseq = load_fixture("tests_seq_con.chp").test("Tseq");
  Net nt = compose(doc.net("NC"), tseq.net);
  std::size_t sync = 0, async_ = 0;
  for (const auto& t : nt.transitions) (t.id.rfind("sync", 0) == 0 ? sync : async_)++;
  REQUIRE(sync == 6);   // three l1- and three l2-transitions against one partner each
  REQUIRE(async_ == 4); // h1, h2 and the test's primed side
  for (const auto& t : nt.transitions)
    if (t.id.rfind("sync", 0) == 0)
      REQUIRE((t.label == A("l1") || t.label == A("l2")));
}

TEST_CASE("composition auto-renames clashing places") {
  Net a = NetBuilder("A").letter("x").place("p").place("q").trans("t", {"p"}, "x", {"q"}).initial({"p"}).build();
  Net b = NetBuilder("B").letter("y").place("p").place("r").trans("t", {"p"}, "y", {"r"}).initial({"p"}).build();
  Net ab = compose(a, b);
  REQUIRE(ab.find_place("A.p").has_value());
  REQUIRE(ab.find_place("B.p").has_value());
  REQUIRE_FALSE(ab.notes.empty());
}

TEST_CASE("relabeling") {
  auto nc = load_fixture("systems_abc.chp").net("NC");
  auto en = maximal_runs(nc);
  const CausalRun& r3 = run_with_pomset(en, Pomset::chain({A("h2"), A("l2"), A("l1")}));

  Net primed = relabel(r3.causal, RelabelScheme::prime(2));
  std::multiset<std::string> labels;
  for (const auto& t : primed.transitions) labels.insert(t.label.name());
  REQUIRE(labels == std::multiset<std::string>{"h2'", "l1'", "l2'"});

  REQUIRE(structurally_equal(relabel(nc, RelabelScheme::prime(1)), nc));

  Net idx = relabel(nc, RelabelScheme::index(3));
  REQUIRE(idx.in_alphabet(A("l1_3")));

  Net clash = NetBuilder("clash").letter("u").letter("u'")
                  .place("p").place("q").place("r")
                  .trans("t1", {"p"}, "u", {"q"}).trans("t2", {"q"}, "u'", {"r"}).initial({"p"}).build();
  REQUIRE_THROWS_AS(relabel(clash, RelabelScheme::prime(2)), RelabelError);

  // tau is never relabeled
  Net withtau = NetBuilder("wt").letter("x").place("p").place("q").trans("t", {"p"}, "tau", {"q"}).initial({"p"}).build();
  Net wt2 = relabel(withtau, RelabelScheme::prime(2));
  REQUIRE(wt2.transitions[0].label.is_tau());
}

TEST_CASE("three-way compositions of runs and tests") {
  auto nc = load_fixture("systems_abc.chp").net("NC");
  auto tests = load_fixture("tests_seq_con.chp");
  auto en = maximal_runs(nc);
  const CausalRun& r1 = run_with_pomset(en, Pomset::of({A("h1"), A("l1"), A("l2")}, {{0, 1}, {0, 2}}));
  const CausalRun& r3 = run_with_pomset(en, Pomset::chain({A("h2"), A("l2"), A("l1")}));

  Net n1 = r1.causal;
  n1.name = "R1";
  Net n3 = relabel(r3.causal, RelabelScheme::prime(2));
  n3.name = "R3";

  auto outcomes = [&](const Test& t) {
    Net comp = compose_many({n1, t.net, n3});
    IndexSet tp(comp.place_count()), tick(comp.place_count());
    for (std::size_t i = 0; i < t.net.place_count(); ++i) {
      tp.set(comp.place_index(t.net.places[i]));
      if (t.tick.test(i)) tick.set(comp.place_index(t.net.places[i]));
    }
    std::multiset<int> out;
    for (const auto& r : maximal_runs(comp).maximal)
      out.insert(run_outcome(comp, tp, tick, r) == RunOutcome::success ? 1 : 0);
    return out;
  };

  REQUIRE(outcomes(tests.test("Tseq")) == std::multiset<int>{0, 1});
  REQUIRE(outcomes(tests.test("Tcon")) == std::multiset<int>{1});

  REQUIRE(structurally_equal(compose_many({nc}), nc));
}

TEST_CASE("commutativity and associativity on fixtures") {
  auto doc = load_fixture("systems_abc.chp");
  auto tcon = load_fixture("tests_seq_con.chp").test("Tcon");
  const Net& nc = doc.net("NC");

  REQUIRE(edge_triples(compose(nc, tcon.net)) == edge_triples(compose(tcon.net, nc)));

  auto t = load_fixture("test_t.chp").test("T");
  const Net& n1 = load_fixture("systems_12.chp").net("N1");
  Net left = compose(compose(n1, t.net), nc);
  Net right = compose(n1, compose(t.net, nc));
  REQUIRE(edge_triples(left) == edge_triples(right));
}

TEST_CASE("tau never synchronizes") {
  auto tgni = load_fixture("test_gni.chp").test("Tgni");
  auto nc = load_fixture("systems_abc.chp").net("NC");
  Net comp = compose(tgni.net, nc);
  std::size_t taus = 0;
  for (const auto& t : comp.transitions) taus += t.label.is_tau();
  std::size_t taus_gni = 0;
  for (const auto& t : tgni.net.transitions) taus_gni += t.label.is_tau();
  REQUIRE(taus == taus_gni);
}
