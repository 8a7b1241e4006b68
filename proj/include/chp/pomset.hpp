#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chp/action.hpp"
#include "chp/canon.hpp"
#include "chp/errors.hpp"
#include "chp/index_set.hpp"

namespace chp {

// A labeled strict partial order held as a canonical representative of its
// isomorphy class. The order is stored as the full transitive relation.
class Pomset {
public:
  Pomset() = default;

  // Builds from labels and order pairs (transitively closed here); throws
  // if the closure is not irreflexive.
  static Pomset of(std::vector<Action> labels, const std::vector<std::pair<std::size_t, std::size_t>>& order) {
    Pomset p;
    p.labels_ = std::move(labels);
    const std::size_t n = p.labels_.size();
    p.below_.assign(n, IndexSet(n));
    for (auto [i, j] : order) {
      if (i >= n || j >= n) throw StructureError("pomset order pair out of range");
      p.below_[i].set(j);
    }
    p.close();
    p.canonicalize();
    return p;
  }

  static Pomset chain(const std::vector<Action>& labels) {
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t i = 0; i + 1 < labels.size(); ++i) order.push_back({i, i + 1});
    return of(labels, order);
  }

  static Pomset antichain(const std::vector<Action>& labels) { return of(labels, {}); }

  std::size_t size() const { return labels_.size(); }
  const Action& label(std::size_t i) const { return labels_[i]; }
  const std::vector<Action>& labels() const { return labels_; }
  bool less(std::size_t i, std::size_t j) const { return below_[i].test(j); }
  bool is_canonical() const { return canonical_; }

  bool total_order() const {
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j)
        if (!less(i, j) && !less(j, i)) return false;
    return true;
  }

  // Full order relation as index pairs.
  std::vector<std::pair<std::size_t, std::size_t>> order_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < size(); ++i)
      below_[i].for_each([&](std::size_t j) { out.push_back({i, j}); });
    return out;
  }

  // Immediate (covering) pairs: i < j with nothing in between.
  std::vector<std::pair<std::size_t, std::size_t>> covers() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < size(); ++i) {
      below_[i].for_each([&](std::size_t j) {
        bool direct = true;
        below_[i].for_each([&](std::size_t k) {
          if (k != j && below_[k].test(j)) direct = false;
        });
        if (direct) out.push_back({i, j});
      });
    }
    return out;
  }

  const std::string& code() const { return code_; }

  // Canonical representative; returns the applied permutation old -> new.
  std::vector<std::size_t> canonicalize() {
    const std::size_t n = size();
    std::vector<Action> distinct = labels_;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<int> colors(n);
    for (std::size_t i = 0; i < n; ++i)
      colors[i] = static_cast<int>(
          std::lower_bound(distinct.begin(), distinct.end(), labels_[i]) - distinct.begin());
    auto res = detail::canonical_digraph(n, below_, colors);
    apply_perm(res.perm);
    code_ = "P|";
    for (const auto& a : distinct) code_ += a.name() + ",";
    code_ += "|" + res.code;
    canonical_ = true;
    return res.perm;
  }

  friend bool operator==(const Pomset& a, const Pomset& b) { return a.code_ == b.code_ && !a.code_.empty(); }
  friend bool operator<(const Pomset& a, const Pomset& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.code_ < b.code_;
  }

  std::string to_string() const {
    if (size() == 0) return "(empty)";
    std::string s;
    auto cov = covers();
    IndexSet related(size());
    for (auto [i, j] : cov) {
      if (!s.empty()) s += ", ";
      s += labels_[i].name() + "<" + labels_[j].name();
      related.set(i);
      related.set(j);
    }
    for (std::size_t i = 0; i < size(); ++i) {
      if (!related.test(i)) {
        if (!s.empty()) s += ", ";
        s += labels_[i].name();
      }
    }
    return s;
  }

private:
  void close() {
    const std::size_t n = size();
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        IndexSet next = below_[i];
        below_[i].for_each([&](std::size_t j) { next |= below_[j]; });
        if (!(next == below_[i])) {
          below_[i] = next;
          changed = true;
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (below_[i].test(i)) throw StructureError("pomset order is cyclic");
  }

  void apply_perm(const std::vector<std::size_t>& perm) {
    const std::size_t n = size();
    std::vector<Action> labels(n);
    std::vector<IndexSet> below(n, IndexSet(n));
    for (std::size_t i = 0; i < n; ++i) {
      labels[perm[i]] = labels_[i];
      below_[i].for_each([&](std::size_t j) { below[perm[i]].set(perm[j]); });
    }
    labels_.swap(labels);
    below_.swap(below);
  }

  std::vector<Action> labels_;
  std::vector<IndexSet> below_;
  bool canonical_ = false;
  std::string code_ = "P||g0|";
};

// Label- and order-preserving bijection from a to b, if one exists.
inline std::optional<std::vector<std::size_t>> pomset_iso_witness(const Pomset& a, const Pomset& b) {
  if (a.size() != b.size()) return std::nullopt;
  Pomset ca = a, cb = b;
  auto pa = ca.canonicalize();
  auto pb = cb.canonicalize();
  if (ca.code() != cb.code()) return std::nullopt;
  std::vector<std::size_t> pb_inv(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) pb_inv[pb[i]] = i;
  std::vector<std::size_t> witness(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) witness[i] = pb_inv[pa[i]];
  return witness;
}

inline bool pomset_iso(const Pomset& a, const Pomset& b) {
  return pomset_iso_witness(a, b).has_value();
}

// Restriction to events whose label is in `keep`.
inline Pomset project(const Pomset& p, const std::vector<Action>& keep) {
  std::vector<std::size_t> sel;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (std::find(keep.begin(), keep.end(), p.label(i)) != keep.end()) sel.push_back(i);
  std::vector<Action> labels;
  for (std::size_t i : sel) labels.push_back(p.label(i));
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t x = 0; x < sel.size(); ++x)
    for (std::size_t y = 0; y < sel.size(); ++y)
      if (p.less(sel[x], sel[y])) order.push_back({x, y});
  return Pomset::of(std::move(labels), order);
}

// All linear extensions as tomsets (isomorphy classes, so duplicates by
// label sequence collapse). Throws ResourceError past `cap` distinct ones.
inline std::vector<Pomset> linearizations(const Pomset& p, std::size_t cap) {
  const std::size_t n = p.size();
  std::vector<IndexSet> above(n, IndexSet(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (p.less(i, j)) above[j].set(i);

  std::set<std::vector<Action>> seqs;
  std::vector<Action> seq;
  IndexSet used(n);
  std::size_t steps = 0;

  auto rec = [&](auto&& self) -> void {
    if (++steps > 10'000'000) throw ResourceError("linearization search too large");
    if (seq.size() == n) {
      seqs.insert(seq);
      if (seqs.size() > cap)
        throw ResourceError("more than " + std::to_string(cap) + " linearizations");
      return;
    }
    // skip choices interchangeable with an earlier one (same label, same
    // descendants, both currently minimal)
    std::vector<std::size_t> tried;
    for (std::size_t v = 0; v < n; ++v) {
      if (used.test(v)) continue;
      if (!used.contains(above[v])) continue;
      bool twin = false;
      for (std::size_t u : tried) {
        IndexSet dv(n), du(n);
        for (std::size_t w = 0; w < n; ++w) {
          if (p.less(v, w)) dv.set(w);
          if (p.less(u, w)) du.set(w);
        }
        if (p.label(u) == p.label(v) && du == dv) {
          twin = true;
          break;
        }
      }
      if (twin) continue;
      tried.push_back(v);
      used.set(v);
      seq.push_back(p.label(v));
      self(self);
      seq.pop_back();
      used.reset(v);
    }
  };
  rec(rec);

  std::vector<Pomset> out;
  for (const auto& s : seqs) out.push_back(Pomset::chain(s));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace chp
