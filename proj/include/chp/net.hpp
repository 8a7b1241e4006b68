#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "chp/action.hpp"
#include "chp/errors.hpp"
#include "chp/index_set.hpp"

namespace chp {

using Marking = IndexSet;  // set of place indices of the owning net

struct Transition {
  std::string id;
  Action label;
  IndexSet pre;   // nonempty
  IndexSet post;  // nonempty
};

// Safe labeled Petri net. Places are indexed; names are the identity used
// when nets are composed. Immutable after construction by convention.
struct Net {
  std::string name;
  std::vector<std::string> places;
  std::vector<Action> alphabet;  // sorted, unique, visible labels only
  std::vector<Transition> transitions;
  Marking initial;
  std::vector<std::string> notes;  // e.g. place-renaming records from compose

  std::size_t place_count() const { return places.size(); }

  std::optional<std::size_t> find_place(const std::string& n) const {
    for (std::size_t i = 0; i < places.size(); ++i)
      if (places[i] == n) return i;
    return std::nullopt;
  }

  std::size_t place_index(const std::string& n) const {
    if (auto i = find_place(n)) return *i;
    throw StructureError("net " + name + ": unknown place \"" + n + "\"");
  }

  const Transition* find_transition(const std::string& id) const {
    for (const auto& t : transitions)
      if (t.id == id) return &t;
    return nullptr;
  }

  bool in_alphabet(const Action& a) const {
    return !a.is_tau() && std::binary_search(alphabet.begin(), alphabet.end(), a);
  }

  Marking marking_of(const std::vector<std::string>& names) const {
    Marking m(place_count());
    for (const auto& n : names) m.set(place_index(n));
    return m;
  }

  std::vector<std::string> place_names(const IndexSet& m) const {
    std::vector<std::string> out;
    m.for_each([&](std::size_t i) { out.push_back(places[i]); });
    return out;
  }

  // Transition indices ordered by (label, id); the exploration order.
  std::vector<std::size_t> transition_order() const {
    std::vector<std::size_t> ord(transitions.size());
    std::iota(ord.begin(), ord.end(), std::size_t{0});
    std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
      const auto& ta = transitions[a];
      const auto& tb = transitions[b];
      if (ta.label != tb.label) return ta.label < tb.label;
      return ta.id < tb.id;
    });
    return ord;
  }
};

inline void validate_net(const Net& n) {
  std::set<std::string> seen_places;
  for (const auto& p : n.places) {
    if (p.empty()) throw StructureError("net " + n.name + ": empty place name");
    if (!seen_places.insert(p).second)
      throw StructureError("net " + n.name + ": duplicate place \"" + p + "\"");
  }
  if (!std::is_sorted(n.alphabet.begin(), n.alphabet.end()))
    throw StructureError("net " + n.name + ": alphabet not sorted");
  for (const auto& a : n.alphabet)
    if (a.is_tau()) throw StructureError("net " + n.name + ": tau in alphabet");
  if (std::adjacent_find(n.alphabet.begin(), n.alphabet.end()) != n.alphabet.end())
    throw StructureError("net " + n.name + ": duplicate alphabet label");

  std::set<std::string> ids;
  std::set<std::tuple<std::vector<std::size_t>, Action, std::vector<std::size_t>>> triples;
  for (const auto& t : n.transitions) {
    if (t.id.empty()) throw StructureError("net " + n.name + ": empty transition id");
    if (!ids.insert(t.id).second)
      throw StructureError("net " + n.name + ": duplicate transition id \"" + t.id + "\"");
    if (t.pre.size() != n.place_count() || t.post.size() != n.place_count())
      throw StructureError("net " + n.name + ": transition " + t.id + " sized to a different net");
    if (t.pre.empty() || t.post.empty())
      throw StructureError("net " + n.name + ": transition " + t.id + " has empty pre or post set");
    if (!t.label.is_tau() && !n.in_alphabet(t.label))
      throw StructureError("net " + n.name + ": transition " + t.id + " label \"" + t.label.name() +
                           "\" not in alphabet");
    if (!triples.insert({t.pre.indices(), t.label, t.post.indices()}).second)
      throw StructureError("net " + n.name + ": duplicate transition (pre,label,post) at " + t.id);
  }
  if (n.initial.size() != n.place_count())
    throw StructureError("net " + n.name + ": initial marking sized to a different net");
  if (n.initial.empty()) throw StructureError("net " + n.name + ": empty initial marking");
}

// Incremental construction front end; build() validates the result.
class NetBuilder {
public:
  explicit NetBuilder(std::string name) { net_.name = std::move(name); }

  NetBuilder& place(const std::string& p) {
    if (std::find(net_.places.begin(), net_.places.end(), p) != net_.places.end())
      throw StructureError("net " + net_.name + ": duplicate place \"" + p + "\"");
    net_.places.push_back(p);
    return *this;
  }

  NetBuilder& letter(const Action& a) {
    if (a.is_tau()) throw StructureError("net " + net_.name + ": tau in alphabet");
    alphabet_.insert(a);
    return *this;
  }

  NetBuilder& letter(const std::string& a) { return letter(Action::visible(a)); }

  NetBuilder& trans(const std::string& id, const std::vector<std::string>& pre, const Action& label,
                    const std::vector<std::string>& post) {
    pending_.push_back({id, label, pre, post});
    return *this;
  }

  NetBuilder& trans(const std::string& id, const std::vector<std::string>& pre,
                    const std::string& label, const std::vector<std::string>& post) {
    return trans(id, pre, label == "tau" ? Action::tau() : Action::visible(label), post);
  }

  NetBuilder& initial(const std::vector<std::string>& names) {
    initial_ = names;
    return *this;
  }

  Net build() {
    net_.alphabet.assign(alphabet_.begin(), alphabet_.end());
    for (const auto& pt : pending_) {
      Transition t;
      t.id = pt.id;
      t.label = pt.label;
      t.pre = IndexSet(net_.place_count());
      t.post = IndexSet(net_.place_count());
      for (const auto& p : pt.pre) t.pre.set(net_.place_index(p));
      for (const auto& p : pt.post) t.post.set(net_.place_index(p));
      net_.transitions.push_back(std::move(t));
    }
    net_.initial = IndexSet(net_.place_count());
    for (const auto& p : initial_) net_.initial.set(net_.place_index(p));
    validate_net(net_);
    return net_;
  }

private:
  struct PendingTrans {
    std::string id;
    Action label;
    std::vector<std::string> pre, post;
  };
  Net net_;
  std::set<Action> alphabet_;
  std::vector<PendingTrans> pending_;
  std::vector<std::string> initial_;
};

// --- token game -------------------------------------------------------------

inline std::vector<std::size_t> enabled(const Net& net, const Marking& m) {
  if (m.size() != net.place_count())
    throw StructureError("marking sized to a different net than " + net.name);
  std::vector<std::size_t> out;
  for (std::size_t i : net.transition_order())
    if (m.contains(net.transitions[i].pre)) out.push_back(i);
  return out;
}

inline bool is_enabled(const Net& net, const Marking& m, const Transition& t) {
  return m.contains(t.pre);
}

// M' = (M - pre(t)) | post(t); the union must be disjoint (contact-freeness).
inline Marking fire(const Net& net, const Marking& m, const Transition& t) {
  if (!is_enabled(net, m, t))
    throw FiringError("net " + net.name + ": transition " + t.id + " not enabled");
  Marking rest = m - t.pre;
  if (rest.intersects(t.post))
    throw ContactError("net " + net.name + ": contact firing " + t.id);
  return rest | t.post;
}

struct ReachabilityGraph {
  struct Edge {
    std::size_t from;
    std::size_t transition;  // index into net.transitions
    std::size_t to;
  };
  std::vector<Marking> nodes;  // breadth-first discovery order, nodes[0] = initial
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> out;  // node -> edge indices

  std::optional<std::size_t> find(const Marking& m) const {
    auto it = index.find(m);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  std::unordered_map<Marking, std::size_t, IndexSetHash> index;
};

struct ContactWitness {
  Marking marking;
  std::string transition_id;
  std::vector<std::string> path;  // transition ids from the initial marking
};

struct ContactCheck {
  bool ok = true;
  std::optional<ContactWitness> witness;
};

namespace detail {

// Breadth-first exploration of the token game. When `stop_on_contact` is
// false a contact violation throws; otherwise it is reported in the result.
struct Exploration {
  ReachabilityGraph graph;
  ContactCheck contact;
  std::vector<std::pair<std::size_t, std::size_t>> parent;  // node -> (pred node, edge)
};

inline Exploration explore(const Net& net, bool stop_on_contact) {
  Exploration ex;
  auto& g = ex.graph;
  const auto order = net.transition_order();
  g.nodes.push_back(net.initial);
  g.index.emplace(net.initial, 0);
  g.out.emplace_back();
  ex.parent.emplace_back(SIZE_MAX, SIZE_MAX);

  auto path_to = [&](std::size_t node) {
    std::vector<std::string> ids;
    while (node != 0) {
      auto [pred, edge] = ex.parent[node];
      ids.push_back(net.transitions[g.edges[edge].transition].id);
      node = pred;
    }
    std::reverse(ids.begin(), ids.end());
    return ids;
  };

  for (std::size_t cur = 0; cur < g.nodes.size(); ++cur) {
    const Marking m = g.nodes[cur];
    for (std::size_t ti : order) {
      const Transition& t = net.transitions[ti];
      if (!m.contains(t.pre)) continue;
      Marking rest = m - t.pre;
      if (rest.intersects(t.post)) {
        if (stop_on_contact) {
          ex.contact.ok = false;
          ex.contact.witness = ContactWitness{m, t.id, path_to(cur)};
          return ex;
        }
        throw ContactError("net " + net.name + ": contact firing " + t.id + " after [" +
                           [&] {
                             std::string s;
                             for (const auto& id : path_to(cur)) s += id + " ";
                             return s;
                           }() +
                           "]");
      }
      Marking succ = rest | t.post;
      auto [it, fresh] = g.index.emplace(succ, g.nodes.size());
      if (fresh) {
        g.nodes.push_back(succ);
        g.out.emplace_back();
        ex.parent.emplace_back(cur, g.edges.size());
      }
      g.out[cur].push_back(g.edges.size());
      g.edges.push_back({cur, ti, it->second});
    }
  }
  return ex;
}

}  // namespace detail

// All markings reachable by finite firing sequences, breadth-first order.
inline std::vector<Marking> reach(const Net& net) {
  return detail::explore(net, false).graph.nodes;
}

inline ContactCheck is_contact_free(const Net& net) {
  return detail::explore(net, true).contact;
}

inline ReachabilityGraph reachability_graph(const Net& net) {
  return detail::explore(net, false).graph;
}

inline bool is_dead(const Net& net, const Marking& m) {
  for (const auto& t : net.transitions)
    if (m.contains(t.pre)) return false;
  return true;
}

// Any cycle in the graph; returns a node on it, if one exists.
inline std::optional<std::size_t> find_cycle_node(const ReachabilityGraph& g) {
  enum : char { White, Grey, Black };
  std::vector<char> color(g.nodes.size(), White);
  std::vector<std::pair<std::size_t, std::size_t>> stack;  // (node, next out-edge pos)
  for (std::size_t root = 0; root < g.nodes.size(); ++root) {
    if (color[root] != White) continue;
    stack.push_back({root, 0});
    color[root] = Grey;
    while (!stack.empty()) {
      auto& [node, pos] = stack.back();
      if (pos < g.out[node].size()) {
        const auto& e = g.edges[g.out[node][pos++]];
        if (color[e.to] == Grey) return e.to;
        if (color[e.to] == White) {
          color[e.to] = Grey;
          stack.push_back({e.to, 0});
        }
      } else {
        color[node] = Black;
        stack.pop_back();
      }
    }
  }
  return std::nullopt;
}

// Structural equality up to internal ordering of alphabet/initial sets;
// place and transition declaration order is significant (round-trip law).
inline bool structurally_equal(const Net& a, const Net& b) {
  if (a.name != b.name || a.places != b.places || a.alphabet != b.alphabet) return false;
  if (!(a.initial == b.initial)) return false;
  if (a.transitions.size() != b.transitions.size()) return false;
  for (std::size_t i = 0; i < a.transitions.size(); ++i) {
    const auto& x = a.transitions[i];
    const auto& y = b.transitions[i];
    if (x.id != y.id || x.label != y.label || !(x.pre == y.pre) || !(x.post == y.post)) return false;
  }
  return true;
}

}  // namespace chp
