#pragma once

#include <cstdlib>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "chp/causal.hpp"
#include "chp/compose.hpp"
#include "chp/net.hpp"
#include "chp/pomset.hpp"

namespace chp {

// A net with a distinguished set of successful (tick) places.
struct Test {
  Net net;
  IndexSet tick;  // over net.places; may be empty (an all-fail test)
};

enum class Tri { yes, no, unknown };
enum class Quant { forall, exists };
enum class TestMode { may, must };
enum class RunOutcome { deadlock_free, success, failure };

struct FiringStep {
  std::string id;
  Action label;
};

struct Witness {
  std::vector<std::size_t> run_indices;  // assignment, indices into the sorted run list
  std::vector<Pomset> run_pomsets;
  std::vector<FiringStep> path;           // firing sequence of the composition
  std::vector<std::string> marking;       // decisive marking, composition place names
  std::vector<std::string> marking_image; // same marking with run conditions mapped to system places
  bool enters_cycle = false;              // path leads into a cycle (an infinite run exists)
};

struct Verdict {
  Tri holds = Tri::unknown;
  TestMode mode = TestMode::may;
  std::vector<Quant> quantifiers;
  bool bounded = false;
  std::optional<std::size_t> bound_used;
  std::optional<Witness> witness;
};

inline unsigned thread_budget() {
  unsigned n = 0;
  if (const char* env = std::getenv("CHP_THREADS")) n = static_cast<unsigned>(std::atoi(env));
  if (n == 0) n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  return n > 64 ? 64 : n;
}

namespace detail {

struct TestContext {
  Net composed;
  IndexSet test_places;
  IndexSet tick;
};

inline TestContext compose_with_test(const Net& n, const Test& t) {
  bool overlap = false;
  for (const auto& p : n.places)
    if (t.net.find_place(p)) overlap = true;
  TestContext ctx;
  ctx.composed = compose(n, t.net);
  ctx.test_places = IndexSet(ctx.composed.place_count());
  ctx.tick = IndexSet(ctx.composed.place_count());
  for (std::size_t i = 0; i < t.net.place_count(); ++i) {
    std::string name = overlap ? t.net.name + "." + t.net.places[i] : t.net.places[i];
    std::size_t idx = ctx.composed.place_index(name);
    ctx.test_places.set(idx);
    if (t.tick.test(i)) ctx.tick.set(idx);
  }
  return ctx;
}

inline std::vector<FiringStep> path_to(const Net& net, const Exploration& ex, std::size_t node) {
  std::vector<FiringStep> steps;
  while (node != 0) {
    auto [pred, edge] = ex.parent[node];
    const Transition& t = net.transitions[ex.graph.edges[edge].transition];
    steps.push_back({t.id, t.label});
    node = pred;
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

// Shortest loop from `node` back to itself.
inline std::vector<FiringStep> cycle_from(const Net& net, const ReachabilityGraph& g, std::size_t node) {
  std::vector<std::pair<std::size_t, std::size_t>> par(g.nodes.size(), {SIZE_MAX, SIZE_MAX});
  std::vector<std::size_t> queue{node};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::size_t cur = queue[qi];
    for (std::size_t e : g.out[cur]) {
      std::size_t to = g.edges[e].to;
      if (to == node) {
        std::vector<FiringStep> steps;
        const Transition& t = net.transitions[g.edges[e].transition];
        steps.push_back({t.id, t.label});
        while (cur != node) {
          auto [p, pe] = par[cur];
          const Transition& pt = net.transitions[g.edges[pe].transition];
          steps.push_back({pt.id, pt.label});
          cur = p;
        }
        std::reverse(steps.begin(), steps.end());
        return steps;
      }
      if (par[to].first == SIZE_MAX && to != node) {
        par[to] = {cur, e};
        queue.push_back(to);
      }
    }
  }
  return {};
}

inline bool marking_successful(const Marking& m, const TestContext& ctx) {
  return ctx.tick.contains(m & ctx.test_places);
}

// may: some reachable dead marking succeeds, or an infinite run exists.
inline Verdict may_on(const TestContext& ctx) {
  Verdict v;
  v.mode = TestMode::may;
  auto ex = explore(ctx.composed, false);
  const auto& g = ex.graph;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (g.out[i].empty() && marking_successful(g.nodes[i], ctx)) {
      v.holds = Tri::yes;
      Witness w;
      w.path = path_to(ctx.composed, ex, i);
      w.marking = ctx.composed.place_names(g.nodes[i]);
      v.witness = std::move(w);
      return v;
    }
  }
  if (auto c = find_cycle_node(g)) {
    v.holds = Tri::yes;
    Witness w;
    w.path = path_to(ctx.composed, ex, *c);
    auto loop = cycle_from(ctx.composed, g, *c);
    w.path.insert(w.path.end(), loop.begin(), loop.end());
    w.marking = ctx.composed.place_names(g.nodes[*c]);
    w.enters_cycle = true;
    v.witness = std::move(w);
    return v;
  }
  v.holds = Tri::no;
  return v;
}

// must: no reachable dead marking leaves a non-tick test place marked.
inline Verdict must_on(const TestContext& ctx) {
  Verdict v;
  v.mode = TestMode::must;
  auto ex = explore(ctx.composed, false);
  const auto& g = ex.graph;
  std::optional<std::size_t> some_dead;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (!g.out[i].empty()) continue;
    if (!some_dead) some_dead = i;
    if (!marking_successful(g.nodes[i], ctx)) {
      v.holds = Tri::no;
      Witness w;
      w.path = path_to(ctx.composed, ex, i);
      w.marking = ctx.composed.place_names(g.nodes[i]);
      v.witness = std::move(w);
      return v;
    }
  }
  v.holds = Tri::yes;
  if (some_dead) {
    Witness w;
    w.path = path_to(ctx.composed, ex, *some_dead);
    w.marking = ctx.composed.place_names(g.nodes[*some_dead]);
    v.witness = std::move(w);
  }
  return v;
}

}  // namespace detail

// Outcome of one maximal run of a composition against a test.
inline RunOutcome run_outcome(const Net& composed, const IndexSet& test_places, const IndexSet& tick,
                              const CausalRun& run) {
  if (run.target->places != composed.places)
    throw StructureError("run_outcome: run does not belong to the given composition");
  if (!is_maximal(run, MaximalityMode::extension))
    throw StructureError("run_outcome: run is not maximal");
  Marking img = run.image(final_cut(run.causal));
  return tick.contains(img & test_places) ? RunOutcome::success : RunOutcome::failure;
}

inline Verdict may_pass(const Net& n, const Test& t) {
  return detail::may_on(detail::compose_with_test(n, t));
}

inline Verdict must_pass(const Net& n, const Test& t) {
  return detail::must_on(detail::compose_with_test(n, t));
}

namespace detail {

struct HyperEval {
  const std::vector<CausalRun>& runs;
  const Test& test;
  TestMode mode;
  RelabelScheme::Kind scheme;
  bool domain_incomplete;

  struct LeafOut {
    bool pass;
    std::optional<Witness> w;
  };

  LeafOut leaf(const std::vector<std::size_t>& pick) const {
    std::vector<Net> parts;
    std::map<std::string, std::string> translate;
    for (std::size_t i = 0; i < pick.size(); ++i) {
      const CausalRun& run = runs[pick[i]];
      Net rn = relabel(run.causal, RelabelScheme{scheme, i + 1});
      rn.name = "r" + std::to_string(i + 1);
      for (std::size_t p = 0; p < rn.places.size(); ++p) {
        std::string fresh = rn.name + "." + rn.places[p];
        translate[fresh] = run.target->places[run.place_map[p]];
        rn.places[p] = fresh;
      }
      parts.push_back(std::move(rn));
    }
    parts.push_back(test.net);
    Net comp = compose_many(parts);

    TestContext ctx;
    ctx.composed = std::move(comp);
    ctx.test_places = IndexSet(ctx.composed.place_count());
    ctx.tick = IndexSet(ctx.composed.place_count());
    for (std::size_t i = 0; i < test.net.place_count(); ++i) {
      std::size_t idx = ctx.composed.place_index(test.net.places[i]);
      ctx.test_places.set(idx);
      if (test.tick.test(i)) ctx.tick.set(idx);
    }

    Verdict v = mode == TestMode::may ? may_on(ctx) : must_on(ctx);
    LeafOut out;
    out.pass = v.holds == Tri::yes;
    if (v.witness) {
      Witness w = *v.witness;
      w.run_indices = pick;
      for (std::size_t i : pick) w.run_pomsets.push_back(pomset_of(runs[i]));
      for (const auto& name : w.marking) {
        auto it = translate.find(name);
        w.marking_image.push_back(it == translate.end() ? name : it->second);
      }
      out.w = std::move(w);
    }
    return out;
  }
};

struct EvalNode {
  Tri v = Tri::unknown;
  std::optional<Witness> w;
};

inline EvalNode eval_quants(const HyperEval& he, const std::vector<Quant>& quants, std::size_t level,
                            std::vector<std::size_t>& pick) {
  const std::size_t n = he.runs.size();
  const Quant q = quants[level];
  const bool innermost = level + 1 == quants.size();
  bool any_unknown = false;

  auto combine = [&](Tri child, std::optional<Witness> w) -> std::optional<EvalNode> {
    if (q == Quant::exists && child == Tri::yes) return EvalNode{Tri::yes, std::move(w)};
    if (q == Quant::forall && child == Tri::no) return EvalNode{Tri::no, std::move(w)};
    if (child == Tri::unknown) any_unknown = true;
    return std::nullopt;
  };

  if (innermost) {
    // parallel block scan over the leaf row; first decisive index wins
    const unsigned threads = thread_budget();
    const std::size_t block = threads <= 1 ? 1 : threads * 2;
    for (std::size_t base = 0; base < n; base += block) {
      const std::size_t end = std::min(n, base + block);
      std::vector<HyperEval::LeafOut> out(end - base);
      if (threads <= 1 || end - base == 1) {
        for (std::size_t i = base; i < end; ++i) {
          pick.push_back(i);
          out[i - base] = he.leaf(pick);
          pick.pop_back();
          // short-circuit within the sequential path
          auto r = combine(out[i - base].pass ? Tri::yes : Tri::no, std::move(out[i - base].w));
          if (r) return std::move(*r);
        }
        continue;
      }
      std::vector<std::future<HyperEval::LeafOut>> futs;
      for (std::size_t i = base; i < end; ++i) {
        std::vector<std::size_t> full = pick;
        full.push_back(i);
        futs.push_back(std::async(std::launch::async, [&he, full] { return he.leaf(full); }));
      }
      for (std::size_t i = base; i < end; ++i) out[i - base] = futs[i - base].get();
      for (std::size_t i = base; i < end; ++i) {
        auto r = combine(out[i - base].pass ? Tri::yes : Tri::no, std::move(out[i - base].w));
        if (r) return std::move(*r);
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      pick.push_back(i);
      EvalNode child = eval_quants(he, quants, level + 1, pick);
      pick.pop_back();
      auto r = combine(child.v, std::move(child.w));
      if (r) return std::move(*r);
    }
  }

  // exhausted without a decisive child
  if (he.domain_incomplete || any_unknown) return EvalNode{Tri::unknown, std::nullopt};
  return EvalNode{q == Quant::exists ? Tri::no : Tri::yes, std::nullopt};
}

}  // namespace detail

// Quantified hyperproperty query: enumerate maximal runs of the system,
// relabel copy i with scheme i, compose every k-tuple with the test and
// fold may/must verdicts through the quantifier prefix. Bounded (truncated)
// enumeration yields unknown unless a conclusive witness/counterexample
// among complete runs decides the query.
inline Verdict check_hyper(const Net& system, const Test& t, const std::vector<Quant>& quants,
                           TestMode mode, RelabelScheme::Kind scheme = RelabelScheme::Kind::prime,
                           std::optional<std::size_t> bound = std::nullopt) {
  if (quants.empty()) throw StructureError("check_hyper: empty quantifier prefix");
  RunEnumeration en = maximal_runs(system, bound);

  Verdict v;
  v.mode = mode;
  v.quantifiers = quants;
  v.bounded = en.bounded();
  if (bound) v.bound_used = *bound;

  detail::HyperEval he{en.maximal, t, mode, scheme, en.bounded()};
  std::vector<std::size_t> pick;
  detail::EvalNode root = detail::eval_quants(he, quants, 0, pick);
  v.holds = root.v;
  v.witness = std::move(root.w);
  return v;
}

inline Verdict check_trace_test(const Net& system, const Test& t, Quant q, TestMode mode,
                                std::optional<std::size_t> bound = std::nullopt) {
  return check_hyper(system, t, {q}, mode, RelabelScheme::Kind::prime, bound);
}

}  // namespace chp
