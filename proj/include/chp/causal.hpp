#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "chp/canon.hpp"
#include "chp/net.hpp"
#include "chp/pomset.hpp"

namespace chp {

struct CheckReport {
  bool ok = true;
  std::vector<std::string> violations;

  void fail(std::string what) {
    ok = false;
    violations.push_back(std::move(what));
  }
};

// Causal-net conditions: unbranched places, acyclic (well-founded) flow,
// initial marking = places without an ingoing arc.
inline CheckReport validate_causal(const Net& n) {
  CheckReport r;
  const std::size_t np = n.place_count();
  std::vector<int> indeg(np, 0), outdeg(np, 0);
  for (const auto& t : n.transitions) {
    t.post.for_each([&](std::size_t p) { ++indeg[p]; });
    t.pre.for_each([&](std::size_t p) { ++outdeg[p]; });
  }
  for (std::size_t p = 0; p < np; ++p) {
    if (indeg[p] > 1) r.fail("place " + n.places[p] + " has " + std::to_string(indeg[p]) + " ingoing arcs");
    if (outdeg[p] > 1) r.fail("place " + n.places[p] + " has " + std::to_string(outdeg[p]) + " outgoing arcs");
  }

  // flow relation on places, cycle check by DFS
  std::vector<IndexSet> flow(np, IndexSet(np));
  for (const auto& t : n.transitions)
    t.pre.for_each([&](std::size_t p) { flow[p] |= t.post; });
  std::vector<char> color(np, 0);
  bool cyclic = false;
  auto dfs = [&](auto&& self, std::size_t v) -> void {
    color[v] = 1;
    flow[v].for_each([&](std::size_t w) {
      if (cyclic) return;
      if (color[w] == 1) {
        cyclic = true;
        r.fail("flow cycle through place " + n.places[w]);
      } else if (color[w] == 0) {
        self(self, w);
      }
    });
    color[v] = 2;
  };
  for (std::size_t v = 0; v < np && !cyclic; ++v)
    if (color[v] == 0) dfs(dfs, v);

  Marking no_ingoing(np);
  for (std::size_t p = 0; p < np; ++p)
    if (indeg[p] == 0) no_ingoing.set(p);
  if (!(no_ingoing == n.initial))
    r.fail("initial marking differs from the set of places without ingoing arcs");
  return r;
}

// One concurrent run: a causal net embedded into the target net.
struct CausalRun {
  Net causal;
  std::shared_ptr<const Net> target;
  std::vector<std::size_t> place_map;  // causal place -> target place
  std::vector<std::size_t> event_map;  // causal transition -> target transition
  bool truncated = false;              // cut off by an event bound

  Marking image(const Marking& causal_marking) const {
    Marking m(target->place_count());
    causal_marking.for_each([&](std::size_t p) { m.set(place_map[p]); });
    return m;
  }
};

// Places of a causal net never consumed by a transition.
inline Marking final_cut(const Net& causal) {
  Marking cut(causal.place_count());
  for (std::size_t p = 0; p < causal.place_count(); ++p) cut.set(p);
  for (const auto& t : causal.transitions) cut -= t.pre;
  return cut;
}

inline CausalRun identity_run(const Net& causal) {
  CausalRun r;
  r.causal = causal;
  r.target = std::make_shared<Net>(causal);
  r.place_map.resize(causal.place_count());
  for (std::size_t i = 0; i < causal.place_count(); ++i) r.place_map[i] = i;
  r.event_map.resize(causal.transitions.size());
  for (std::size_t i = 0; i < causal.transitions.size(); ++i) r.event_map[i] = i;
  return r;
}

inline CheckReport validate_embedding(const CausalRun& run) {
  CheckReport r;
  const Net& c = run.causal;
  const Net& t = *run.target;
  if (run.place_map.size() != c.place_count() || run.event_map.size() != c.transitions.size()) {
    r.fail("embedding maps sized to a different net");
    return r;
  }

  if (!(run.image(c.initial) == t.initial)) r.fail("f(M0) differs from the target initial marking");

  for (const Marking& m : reach(c)) {
    if (run.image(m).count() != m.count()) {
      r.fail("f not injective on reachable marking {" + [&] {
        std::string s;
        for (const auto& p : c.place_names(m)) s += p + " ";
        return s;
      }() + "}");
      break;
    }
  }

  for (std::size_t e = 0; e < c.transitions.size(); ++e) {
    const Transition& ce = c.transitions[e];
    const Transition& te = t.transitions[run.event_map[e]];
    Marking pre(t.place_count()), post(t.place_count());
    ce.pre.for_each([&](std::size_t p) { pre.set(run.place_map[p]); });
    ce.post.for_each([&](std::size_t p) { post.set(run.place_map[p]); });
    if (!(pre == te.pre) || !(post == te.post) || !(ce.label == te.label))
      r.fail("event " + ce.id + " does not map onto a target transition");
  }

  // f distributes over the flow relation
  const std::size_t np = t.place_count();
  std::vector<IndexSet> tflow(np, IndexSet(np));
  for (const auto& tt : t.transitions)
    tt.pre.for_each([&](std::size_t p) { tflow[p] |= tt.post; });
  for (const auto& ct : c.transitions) {
    bool bad = false;
    ct.pre.for_each([&](std::size_t p) {
      ct.post.for_each([&](std::size_t q) {
        if (!tflow[run.place_map[p]].test(run.place_map[q])) bad = true;
      });
    });
    if (bad) {
      r.fail("f does not distribute over the flow relation at event " + ct.id);
      break;
    }
  }
  return r;
}

enum class MaximalityMode { extension, literal };

// extension: no transition instance of the target can be appended.
// literal: no causal place stops where the embedded place could continue.
inline bool is_maximal(const CausalRun& run, MaximalityMode mode = MaximalityMode::extension) {
  const Net& t = *run.target;
  if (mode == MaximalityMode::extension) {
    if (run.truncated) return false;
    return is_dead(t, run.image(final_cut(run.causal)));
  }
  IndexSet target_has_succ(t.place_count());
  for (const auto& tt : t.transitions) target_has_succ |= tt.pre;
  IndexSet causal_has_succ(run.causal.place_count());
  for (const auto& ct : run.causal.transitions) causal_has_succ |= ct.pre;
  for (std::size_t p = 0; p < run.causal.place_count(); ++p)
    if (target_has_succ.test(run.place_map[p]) && !causal_has_succ.test(p)) return false;
  return true;
}

// Pomset corresponding to a causal net: events are the transitions, the
// order is the transitive closure of immediate causal succession.
inline Pomset pomset_of(const Net& causal) {
  std::vector<Action> labels;
  for (const auto& t : causal.transitions) labels.push_back(t.label);
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t i = 0; i < causal.transitions.size(); ++i)
    for (std::size_t j = 0; j < causal.transitions.size(); ++j)
      if (i != j && causal.transitions[i].post.intersects(causal.transitions[j].pre))
        order.push_back({i, j});
  return Pomset::of(std::move(labels), order);
}

inline Pomset pomset_of(const CausalRun& run) { return pomset_of(run.causal); }

// Causal net corresponding to a pomset: one place per covering pair plus
// an entry place for each minimal and an exit place for each maximal event.
inline Net causal_net_of(const Pomset& p, const std::string& name = "causal") {
  NetBuilder b(name);
  const std::size_t n = p.size();
  if (n == 0) {
    b.place("s");
    b.initial({"s"});
    return b.build();
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!p.label(i).is_tau()) b.letter(p.label(i));

  std::vector<std::vector<std::string>> pre(n), post(n);
  std::vector<std::string> init;
  auto cov = p.covers();
  IndexSet has_pred(n), has_succ(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (p.less(i, j)) {
        has_succ.set(i);
        has_pred.set(j);
      }
    }
  }
  std::size_t k = 0;
  for (auto [i, j] : cov) {
    std::string pl = "m" + std::to_string(k++);
    b.place(pl);
    post[i].push_back(pl);
    pre[j].push_back(pl);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!has_pred.test(i)) {
      std::string pl = "s" + std::to_string(i);
      b.place(pl);
      init.push_back(pl);
      pre[i].push_back(pl);
    }
    if (!has_succ.test(i)) {
      std::string pl = "f" + std::to_string(i);
      b.place(pl);
      post[i].push_back(pl);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    b.trans("e" + std::to_string(i), pre[i], p.label(i), post[i]);
  b.initial(init);
  return b.build();
}

namespace detail {

struct Proc {
  struct Cond {
    std::size_t place;     // target place
    std::size_t producer;  // event index or SIZE_MAX
    std::size_t consumer;  // event index or SIZE_MAX
  };
  struct Ev {
    std::size_t trans;  // target transition index
    std::vector<std::size_t> pre, post;
  };
  std::vector<Cond> conds;
  std::vector<Ev> evs;
  std::vector<std::size_t> cut;  // condition indices without consumer

  Marking image(std::size_t target_places) const {
    Marking m(target_places);
    for (std::size_t c : cut) m.set(conds[c].place);
    return m;
  }
};

// Processes are identified up to isomorphism by their event dag colored
// with target transitions; used to prune interleavings of one process.
inline std::string proc_code(const Proc& pr) {
  const std::size_t n = pr.evs.size();
  std::vector<IndexSet> out(n, IndexSet(n));
  std::vector<int> colors(n);
  for (std::size_t e = 0; e < n; ++e) {
    colors[e] = static_cast<int>(pr.evs[e].trans);
    for (std::size_t c : pr.evs[e].pre)
      if (pr.conds[c].producer != SIZE_MAX) out[pr.conds[c].producer].set(e);
  }
  return canonical_digraph(n, out, colors).code;
}

inline CausalRun run_of_proc(const Proc& pr, const std::shared_ptr<const Net>& target, bool truncated) {
  CausalRun run;
  run.target = target;
  run.truncated = truncated;
  Net& c = run.causal;
  c.name = target->name + "_run";
  c.alphabet = target->alphabet;
  for (std::size_t i = 0; i < pr.conds.size(); ++i) {
    c.places.push_back("c" + std::to_string(i));
    run.place_map.push_back(pr.conds[i].place);
  }
  for (std::size_t e = 0; e < pr.evs.size(); ++e) {
    Transition t;
    t.id = "e" + std::to_string(e);
    t.label = target->transitions[pr.evs[e].trans].label;
    t.pre = IndexSet(c.place_count());
    t.post = IndexSet(c.place_count());
    for (std::size_t x : pr.evs[e].pre) t.pre.set(x);
    for (std::size_t x : pr.evs[e].post) t.post.set(x);
    c.transitions.push_back(std::move(t));
    run.event_map.push_back(pr.evs[e].trans);
  }
  c.initial = IndexSet(c.place_count());
  for (std::size_t i = 0; i < pr.conds.size(); ++i)
    if (pr.conds[i].producer == SIZE_MAX) c.initial.set(i);
  return run;
}

// Canonical code of the causal net with action labels only; two runs with
// equal codes are the same concurrent behavior (isomorphic causal nets).
inline std::string run_net_code(const Net& causal) {
  const std::size_t ne = causal.transitions.size();
  const std::size_t np = causal.place_count();
  const std::size_t n = ne + np;
  std::vector<Action> distinct;
  for (const auto& t : causal.transitions) distinct.push_back(t.label);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<IndexSet> out(n, IndexSet(n));
  std::vector<int> colors(n);
  for (std::size_t e = 0; e < ne; ++e) {
    colors[e] = 1 + static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(),
                                                      causal.transitions[e].label) -
                                     distinct.begin());
    causal.transitions[e].pre.for_each([&](std::size_t p) { out[ne + p].set(e); });
    causal.transitions[e].post.for_each([&](std::size_t p) { out[e].set(ne + p); });
  }
  for (std::size_t p = 0; p < np; ++p) colors[ne + p] = 0;
  std::string code = "R|";
  for (const auto& a : distinct) code += a.name() + ",";
  return code + "|" + canonical_digraph(n, out, colors).code;
}

}  // namespace detail

struct RunEnumeration {
  std::vector<CausalRun> maximal;
  std::vector<CausalRun> partial;  // truncated at the bound, never maximal
  bool exact = true;               // false when anything was truncated

  std::size_t bound_used = 0;
  bool bounded() const { return !exact; }
};

// Enumerates maximal runs by process construction, branching on every
// choice and deduplicating isomorphic causal nets. Cyclic state spaces
// require an event bound.
inline RunEnumeration maximal_runs(const Net& net, std::optional<std::size_t> bound = std::nullopt) {
  if (!bound) {
    auto g = reachability_graph(net);
    if (find_cycle_node(g))
      throw BoundRequiredError("net " + net.name +
                               " has a reachable cycle; run enumeration needs an event bound");
  }
  auto target = std::make_shared<const Net>(net);
  const auto order = net.transition_order();

  detail::Proc root;
  net.initial.for_each([&](std::size_t p) {
    root.cut.push_back(root.conds.size());
    root.conds.push_back({p, SIZE_MAX, SIZE_MAX});
  });

  std::deque<detail::Proc> queue;
  std::unordered_set<std::string> seen;
  queue.push_back(std::move(root));
  seen.insert(detail::proc_code(queue.front()));

  RunEnumeration result;
  result.bound_used = bound.value_or(0);
  std::vector<detail::Proc> max_leaves, cut_leaves;

  while (!queue.empty()) {
    detail::Proc pr = std::move(queue.front());
    queue.pop_front();
    const Marking m = pr.image(net.place_count());

    std::vector<std::size_t> fireable;
    for (std::size_t ti : order)
      if (m.contains(net.transitions[ti].pre)) fireable.push_back(ti);

    if (fireable.empty()) {
      max_leaves.push_back(std::move(pr));
      continue;
    }
    if (bound && pr.evs.size() >= *bound) {
      result.exact = false;
      cut_leaves.push_back(std::move(pr));
      continue;
    }
    for (std::size_t ti : fireable) {
      const Transition& t = net.transitions[ti];
      detail::Proc child = pr;
      const std::size_t ev = child.evs.size();
      detail::Proc::Ev e;
      e.trans = ti;
      // consume the cut conditions mapping onto pre(t); unique per place
      // because the embedding is injective on the cut
      std::vector<std::size_t> new_cut;
      for (std::size_t c : child.cut) {
        if (t.pre.test(child.conds[c].place)) {
          child.conds[c].consumer = ev;
          e.pre.push_back(c);
        } else {
          if (t.post.test(child.conds[c].place))
            throw ContactError("net " + net.name + ": contact firing " + t.id +
                               " during run enumeration");
          new_cut.push_back(c);
        }
      }
      t.post.for_each([&](std::size_t p) {
        e.post.push_back(child.conds.size());
        new_cut.push_back(child.conds.size());
        child.conds.push_back({p, ev, SIZE_MAX});
      });
      child.evs.push_back(std::move(e));
      child.cut = std::move(new_cut);
      if (seen.insert(detail::proc_code(child)).second) queue.push_back(std::move(child));
    }
  }

  auto collect = [&](std::vector<detail::Proc>& leaves, std::vector<CausalRun>& out, bool truncated) {
    std::vector<std::pair<std::string, CausalRun>> keyed;
    for (const auto& pr : leaves) {
      CausalRun run = detail::run_of_proc(pr, target, truncated);
      keyed.emplace_back(detail::run_net_code(run.causal), std::move(run));
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
      if (a.second.causal.transitions.size() != b.second.causal.transitions.size())
        return a.second.causal.transitions.size() < b.second.causal.transitions.size();
      return a.first < b.first;
    });
    std::string last;
    for (auto& [code, run] : keyed) {
      if (code == last) continue;
      last = code;
      out.push_back(std::move(run));
    }
  };
  collect(max_leaves, result.maximal, false);
  collect(cut_leaves, result.partial, true);
  return result;
}

// Events of a causal net in a topological (causal) order.
inline std::vector<std::size_t> causal_event_order(const Net& causal) {
  const std::size_t n = causal.transitions.size();
  std::vector<std::size_t> order;
  std::vector<char> done(n, 0);
  Marking m = causal.initial;
  while (order.size() < n) {
    bool progress = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      if (m.contains(causal.transitions[i].pre)) {
        m = (m - causal.transitions[i].pre) | causal.transitions[i].post;
        done[i] = 1;
        order.push_back(i);
        progress = true;
        break;
      }
    }
    if (!progress) throw StructureError("net " + causal.name + ": not a firable causal net");
  }
  return order;
}

}  // namespace chp
