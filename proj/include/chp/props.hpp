#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "chp/errors.hpp"
#include "chp/pomset.hpp"

namespace chp {

// Split of the visible labels into low- and high-security events. Labels in
// neither class are permitted and ignored by all checks.
struct SecurityPartition {
  std::vector<Action> low;
  std::vector<Action> high;

  SecurityPartition(std::vector<Action> lo, std::vector<Action> hi)
      : low(std::move(lo)), high(std::move(hi)) {
    for (const auto& a : low)
      if (std::find(high.begin(), high.end(), a) != high.end())
        throw StructureError("security partition: label " + a.name() + " is both low and high");
  }

  bool is_low(const Action& a) const { return std::find(low.begin(), low.end(), a) != low.end(); }
  bool is_high(const Action& a) const { return std::find(high.begin(), high.end(), a) != high.end(); }
};

// No low event may causally depend on a high event.
inline bool check_T1(const Pomset& p, const SecurityPartition& part) {
  for (std::size_t x = 0; x < p.size(); ++x)
    for (std::size_t y = 0; y < p.size(); ++y)
      if (p.less(x, y) && part.is_high(p.label(x)) && part.is_low(p.label(y))) return false;
  return true;
}

namespace detail {

inline std::map<Action, std::size_t> low_multiset(const Pomset& p, const SecurityPartition& part) {
  std::map<Action, std::size_t> m;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (part.is_low(p.label(i))) ++m[p.label(i)];
  return m;
}

// Backtracking search for a label-preserving bijection between the low
// events of a and b; the independent route cross-checking the multiset test.
inline bool low_bijection_exists(const Pomset& a, const Pomset& b, const SecurityPartition& part) {
  std::vector<std::size_t> xa, xb;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (part.is_low(a.label(i))) xa.push_back(i);
  for (std::size_t i = 0; i < b.size(); ++i)
    if (part.is_low(b.label(i))) xb.push_back(i);
  if (xa.size() != xb.size()) return false;
  std::vector<char> used(xb.size(), 0);
  auto rec = [&](auto&& self, std::size_t k) -> bool {
    if (k == xa.size()) return true;
    for (std::size_t j = 0; j < xb.size(); ++j) {
      if (used[j] || !(a.label(xa[k]) == b.label(xb[j]))) continue;
      used[j] = 1;
      if (self(self, k + 1)) return true;
      used[j] = 0;
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace detail

// Every pair agrees on the occurrence of the low events.
inline bool check_H1(const std::vector<Pomset>& ts, const SecurityPartition& part) {
  for (const auto& a : ts) {
    for (const auto& b : ts) {
      bool multiset = detail::low_multiset(a, part) == detail::low_multiset(b, part);
      bool bijection = detail::low_bijection_exists(a, b, part);
      if (multiset != bijection)
        throw Error("H1 routes disagree (multiset vs bijection search)");
      if (!multiset) return false;
    }
  }
  return true;
}

// Every pair agrees on the occurrence and the ordering of the low events.
inline bool check_H2(const std::vector<Pomset>& ts, const SecurityPartition& part) {
  for (const auto& a : ts)
    for (const auto& b : ts)
      if (!pomset_iso(project(a, part.low), project(b, part.low))) return false;
  return true;
}

// Generalized noninterference on concurrent traces: for every ordered pair
// (a, b) some c in ts matches a on low events and b on high events.
inline bool check_H3(const std::vector<Pomset>& ts, const SecurityPartition& part) {
  for (const auto& a : ts) {
    for (const auto& b : ts) {
      bool found = false;
      Pomset a_low = project(a, part.low);
      Pomset b_high = project(b, part.high);
      for (const auto& c : ts) {
        if (pomset_iso(project(c, part.low), a_low) && pomset_iso(project(c, part.high), b_high)) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
  }
  return true;
}

}  // namespace chp
