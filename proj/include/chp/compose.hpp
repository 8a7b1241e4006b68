#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "chp/net.hpp"

namespace chp {

// Label rewrite for the i-th copy of a system under test. The prime scheme
// appends copy_number-1 apostrophes, the index scheme appends _copy_number.
// tau is never relabeled.
struct RelabelScheme {
  enum class Kind { prime, index };
  Kind kind = Kind::prime;
  std::size_t copy_number = 1;

  static RelabelScheme prime(std::size_t copy) { return {Kind::prime, copy}; }
  static RelabelScheme index(std::size_t copy) { return {Kind::index, copy}; }

  Action apply(const Action& a) const {
    if (a.is_tau()) return a;
    if (kind == Kind::prime) {
      if (copy_number == 0) throw RelabelError("copy number must be positive");
      return Action::visible(a.name() + std::string(copy_number - 1, '\''));
    }
    return Action::visible(a.name() + "_" + std::to_string(copy_number));
  }
};

inline Net relabel(const Net& n, const RelabelScheme& scheme) {
  Net out = n;
  out.alphabet.clear();
  for (const auto& a : n.alphabet) {
    Action img = scheme.apply(a);
    if (!(img == a) && n.in_alphabet(img))
      throw RelabelError("net " + n.name + ": relabeling " + a.name() + " collides with existing label " +
                         img.name());
    out.alphabet.push_back(img);
  }
  std::sort(out.alphabet.begin(), out.alphabet.end());
  out.alphabet.erase(std::unique(out.alphabet.begin(), out.alphabet.end()), out.alphabet.end());
  if (out.alphabet.size() != n.alphabet.size())
    throw RelabelError("net " + n.name + ": relabeling merges distinct labels");
  for (auto& t : out.transitions) t.label = scheme.apply(t.label);
  return out;
}

namespace detail {

inline Net rename_places(const Net& n) {
  Net out = n;
  for (auto& p : out.places) p = n.name + "." + p;
  out.notes.push_back("places prefixed with \"" + n.name + ".\"");
  return out;
}

}  // namespace detail

// Parallel composition: transitions with a label shared by both alphabets
// synchronize pairwise, all others stay asynchronous. tau never synchronizes.
inline Net compose(const Net& a_in, const Net& b_in) {
  const Net* a = &a_in;
  const Net* b = &b_in;
  Net ra, rb;
  bool overlap = false;
  for (const auto& p : a_in.places)
    if (b_in.find_place(p)) overlap = true;
  if (overlap) {
    ra = detail::rename_places(a_in);
    rb = detail::rename_places(b_in);
    a = &ra;
    b = &rb;
    for (const auto& p : ra.places)
      if (rb.find_place(p))
        throw StructureError("compose: places of " + a_in.name + " and " + b_in.name +
                             " still clash after renaming; give the nets distinct names");
  }

  Net out;
  out.name = a->name + "_x_" + b->name;
  out.notes = a->notes;
  out.notes.insert(out.notes.end(), b->notes.begin(), b->notes.end());
  out.places = a->places;
  out.places.insert(out.places.end(), b->places.begin(), b->places.end());
  const std::size_t na = a->place_count();
  const std::size_t n = out.places.size();

  std::set<Action> shared;
  for (const auto& x : a->alphabet)
    if (b->in_alphabet(x)) shared.insert(x);
  std::set<Action> alpha(a->alphabet.begin(), a->alphabet.end());
  alpha.insert(b->alphabet.begin(), b->alphabet.end());
  out.alphabet.assign(alpha.begin(), alpha.end());

  auto widen = [&](const IndexSet& s, std::size_t offset) {
    IndexSet w(n);
    s.for_each([&](std::size_t i) { w.set(i + offset); });
    return w;
  };

  std::set<std::string> a_ids, b_ids;
  for (const auto& t : a->transitions) a_ids.insert(t.id);
  for (const auto& t : b->transitions) b_ids.insert(t.id);

  auto async_id = [&](const Net& owner, const std::string& id) {
    const auto& other = (&owner == a) ? b_ids : a_ids;
    return other.count(id) ? owner.name + "." + id : id;
  };

  for (const auto& t : a->transitions) {
    if (!t.label.is_tau() && shared.count(t.label)) continue;
    out.transitions.push_back({async_id(*a, t.id), t.label, widen(t.pre, 0), widen(t.post, 0)});
  }
  for (const auto& t : b->transitions) {
    if (!t.label.is_tau() && shared.count(t.label)) continue;
    out.transitions.push_back({async_id(*b, t.id), t.label, widen(t.pre, na), widen(t.post, na)});
  }
  std::size_t sync_count = 0;
  for (const auto& lab : shared) {
    for (const auto& ta : a->transitions) {
      if (!(ta.label == lab)) continue;
      for (const auto& tb : b->transitions) {
        if (!(tb.label == lab)) continue;
        out.transitions.push_back({"sync" + std::to_string(++sync_count) + "." + ta.id + "." + tb.id,
                                   lab, widen(ta.pre, 0) | widen(tb.pre, na),
                                   widen(ta.post, 0) | widen(tb.post, na)});
      }
    }
  }

  out.initial = widen(a->initial, 0) | widen(b->initial, na);
  validate_net(out);
  return out;
}

// Left fold of compose; associativity is a tested property, not an assumption.
inline Net compose_many(const std::vector<Net>& nets) {
  if (nets.empty()) throw StructureError("compose_many: empty net list");
  Net acc = nets[0];
  for (std::size_t i = 1; i < nets.size(); ++i) acc = compose(acc, nets[i]);
  return acc;
}

}  // namespace chp
