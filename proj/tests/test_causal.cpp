#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"

using namespace chp;

namespace {

Action A(const std::string& s) { return Action::visible(s); }

Pomset pi1() { return Pomset::of({A("h1"), A("l1"), A("l2")}, {{0, 1}, {0, 2}}); }
Pomset pi2() { return Pomset::chain({A("h2"), A("l1"), A("l2")}); }
Pomset pi3() { return Pomset::chain({A("h2"), A("l2"), A("l1")}); }

const CausalRun& run_with_pomset(const RunEnumeration& en, const Pomset& p) {
  for (const auto& r : en.maximal)
    if (pomset_iso(pomset_of(r), p)) return r;
  throw std::runtime_error("no run with the requested pomset");
}

}  // namespace

TEST_CASE("causal net conditions") {
  auto nc = load_fixture("systems_abc.chp").net("NC");
  auto en = maximal_runs(nc);
  for (const auto& r : en.maximal) REQUIRE(validate_causal(r.causal).ok);

  auto bad = validate_causal(nc);
  REQUIRE_FALSE(bad.ok);
  bool mentions_p0 = false;
  for (const auto& v : bad.violations) mentions_p0 |= v.find("p0") != std::string::npos;
  REQUIRE(mentions_p0);

  Net idle = NetBuilder("idle").letter("a").place("p").initial({"p"}).build();
  REQUIRE(validate_causal(idle).ok);
}

TEST_CASE("embedding validation") {
  auto nc = load_fixture("systems_abc.chp").net("NC");
  for (const auto& r : maximal_runs(nc).maximal) REQUIRE(validate_embedding(r).ok);

  Net chain = NetBuilder("chain").letter("a").place("p").place("q").trans("t", {"p"}, "a", {"q"}).initial({"p"}).build();
  REQUIRE(validate_embedding(identity_run(chain)).ok);

  // two concurrently marked places mapped onto one target place
  CausalRun bad;
  bad.causal = NetBuilder("c").letter("a").place("c1").place("c2").initial({"c1", "c2"}).build();
  bad.target = std::make_shared<Net>(NetBuilder("t").letter("a").place("P").initial({"P"}).build());
  bad.place_map = {0, 0};
  auto rep = validate_embedding(bad);
  REQUIRE_FALSE(rep.ok);
  bool injectivity = false;
  for (const auto& v : rep.violations) injectivity |= v.find("injective") != std::string::npos;
  REQUIRE(injectivity);
}

TEST_CASE("maximality") {
  auto nc = load_fixture("systems_abc.chp").net("NC");
  auto en = maximal_runs(nc);
  for (const auto& r : en.maximal) {
    REQUIRE(is_maximal(r, MaximalityMode::extension));
    REQUIRE(is_maximal(r, MaximalityMode::literal));
  }

  // the prefix of the h2-run stopping after h2 admits an l1/l2 extension
  CausalRun prefix;
  prefix.causal = NetBuilder("pre").letter("h1").letter("h2").letter("l1").letter("l2")
                      .place("c0").place("c1").trans("e0", {"c0"}, "h2", {"c1"}).initial({"c0"}).build();
  prefix.target = std::make_shared<Net>(nc);
  prefix.place_map = {nc.place_index("p0"), nc.place_index("p13")};
  prefix.event_map = {1};
  REQUIRE(validate_embedding(prefix).ok);
  REQUIRE_FALSE(is_maximal(prefix, MaximalityMode::extension));
  REQUIRE_FALSE(is_maximal(prefix, MaximalityMode::literal));

  // a net enabling nothing has exactly the empty maximal run
  Net idle = NetBuilder("idle").letter("a").place("p").place("q").trans("t", {"q"}, "a", {"q"}).initial({"p"}).build();
  auto iel = maximal_runs(idle);
  REQUIRE(iel.maximal.size() == 1);
  REQUIRE(iel.maximal[0].causal.transitions.empty());
  REQUIRE(is_maximal(iel.maximal[0], MaximalityMode::extension));
  REQUIRE(is_maximal(iel.maximal[0], MaximalityMode::literal));
}

TEST_CASE("maximal run counts") {
  auto doc = load_fixture("systems_abc.chp");
  auto ena = maximal_runs(doc.net("NA"));
  auto enb = maximal_runs(doc.net("NB"));
  auto enc = maximal_runs(doc.net("NC"));
  REQUIRE(ena.maximal.size() == 2);
  REQUIRE(enb.maximal.size() == 4);
  REQUIRE(enc.maximal.size() == 3);
  REQUIRE(ena.exact);
  REQUIRE(enb.exact);
  REQUIRE(enc.exact);

  // each transition occurs once along any firing sequence of a causal net
  for (const auto& r : enc.maximal) {
    auto order = causal_event_order(r.causal);
    std::set<std::size_t> uniq(order.begin(), order.end());
    REQUIRE(uniq.size() == r.causal.transitions.size());
  }
}

TEST_CASE("pomsets of runs") {
  auto nc = load_fixture("systems_abc.chp").net("NC");
  auto en = maximal_runs(nc);
  REQUIRE_NOTHROW(run_with_pomset(en, pi1()));
  REQUIRE_NOTHROW(run_with_pomset(en, pi2()));
  REQUIRE_NOTHROW(run_with_pomset(en, pi3()));

  const CausalRun& r1 = run_with_pomset(en, pi1());
  Pomset p = pomset_of(r1);
  REQUIRE(p.size() == 3);

  Net single = NetBuilder("s").letter("a").place("p").place("q").trans("t", {"p"}, "a", {"q"}).initial({"p"}).build();
  Pomset sp = pomset_of(single);
  REQUIRE(sp.size() == 1);
  REQUIRE(sp.order_pairs().empty());
}

TEST_CASE("causal net of a pomset") {
  Net n2 = causal_net_of(pi2());
  REQUIRE(n2.place_count() == 4);
  REQUIRE(n2.transitions.size() == 3);
  REQUIRE(validate_causal(n2).ok);
  REQUIRE(pomset_iso(pomset_of(n2), pi2()));

  Net empty = causal_net_of(Pomset());
  REQUIRE(empty.place_count() == 1);
  REQUIRE(empty.transitions.empty());
  REQUIRE(validate_causal(empty).ok);

  Net n1 = causal_net_of(pi1());
  REQUIRE(validate_causal(n1).ok);
  REQUIRE(pomset_iso(pomset_of(n1), pi1()));
}

TEST_CASE("bounded enumeration") {
  auto thl = load_fixture("test_hl.chp").test("Thl").net;
  REQUIRE_THROWS_AS(maximal_runs(thl), BoundRequiredError);

  auto en = maximal_runs(thl, 3);
  REQUIRE_FALSE(en.exact);
  REQUIRE_FALSE(en.partial.empty());
  for (const auto& r : en.partial) {
    REQUIRE(r.truncated);
    REQUIRE_FALSE(is_maximal(r, MaximalityMode::extension));
  }
  for (const auto& r : en.maximal) REQUIRE(is_maximal(r, MaximalityMode::extension));
}
