#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "chp/index_set.hpp"

namespace chp::detail {

// Canonical form of a vertex-colored digraph by partition refinement with
// individualization on ties. Small inputs only; the search is exact.
class DigraphCanon {
public:
  DigraphCanon(std::size_t n, const std::vector<IndexSet>& out, const std::vector<int>& colors)
      : n_(n), out_(out), colors_(colors), in_(n, IndexSet(n)) {
    for (std::size_t v = 0; v < n_; ++v)
      out_[v].for_each([&](std::size_t w) { in_[w].set(v); });
  }

  struct Result {
    std::string code;
    std::vector<std::size_t> perm;  // old index -> canonical position
  };

  Result run() {
    if (n_ == 0) return {"g0|", {}};
    Cells cells = initial_cells();
    best_code_.clear();
    search(cells);
    return {best_code_, best_perm_};
  }

private:
  using Cells = std::vector<std::vector<std::size_t>>;

  Cells initial_cells() const {
    std::vector<std::size_t> vs(n_);
    for (std::size_t i = 0; i < n_; ++i) vs[i] = i;
    std::stable_sort(vs.begin(), vs.end(),
                     [&](std::size_t a, std::size_t b) { return colors_[a] < colors_[b]; });
    Cells cells;
    for (std::size_t i = 0; i < n_;) {
      std::size_t j = i;
      while (j < n_ && colors_[vs[j]] == colors_[vs[i]]) ++j;
      cells.emplace_back(vs.begin() + i, vs.begin() + j);
      i = j;
    }
    return cells;
  }

  // Signature of v against the current partition: out/in degree per cell.
  std::vector<int> signature(const Cells& cells, std::size_t v) const {
    std::vector<int> sig;
    sig.reserve(cells.size() * 2);
    for (const auto& cell : cells) {
      int o = 0, i = 0;
      for (std::size_t w : cell) {
        if (out_[v].test(w)) ++o;
        if (in_[v].test(w)) ++i;
      }
      sig.push_back(o);
      sig.push_back(i);
    }
    return sig;
  }

  void refine(Cells& cells) const {
    bool changed = true;
    while (changed) {
      changed = false;
      Cells next;
      next.reserve(cells.size());
      for (const auto& cell : cells) {
        if (cell.size() == 1) {
          next.push_back(cell);
          continue;
        }
        std::vector<std::pair<std::vector<int>, std::size_t>> keyed;
        keyed.reserve(cell.size());
        for (std::size_t v : cell) keyed.emplace_back(signature(cells, v), v);
        std::stable_sort(keyed.begin(), keyed.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::size_t i = 0;
        while (i < keyed.size()) {
          std::size_t j = i;
          std::vector<std::size_t> group;
          while (j < keyed.size() && keyed[j].first == keyed[i].first)
            group.push_back(keyed[j++].second);
          if (group.size() != cell.size()) changed = true;
          next.push_back(std::move(group));
          i = j;
        }
      }
      cells.swap(next);
    }
  }

  // All members of the cell interchangeable by a swap automorphism?
  bool uniform_cell(const std::vector<std::size_t>& cell) const {
    for (std::size_t k = 1; k < cell.size(); ++k)
      if (!(out_[cell[k]] == out_[cell[0]]) || !(in_[cell[k]] == in_[cell[0]])) return false;
    return true;
  }

  void search(Cells cells) {
    refine(cells);
    std::size_t target = SIZE_MAX;
    std::size_t target_size = SIZE_MAX;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].size() > 1 && cells[c].size() < target_size) {
        target = c;
        target_size = cells[c].size();
      }
    }
    if (target == SIZE_MAX) {
      emit(cells);
      return;
    }
    const auto cell = cells[target];
    const std::size_t tries = uniform_cell(cell) ? 1 : cell.size();
    for (std::size_t k = 0; k < tries; ++k) {
      Cells branched;
      branched.reserve(cells.size() + 1);
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c != target) {
          branched.push_back(cells[c]);
          continue;
        }
        branched.push_back({cell[k]});
        std::vector<std::size_t> rest;
        for (std::size_t j = 0; j < cell.size(); ++j)
          if (j != k) rest.push_back(cell[j]);
        branched.push_back(std::move(rest));
      }
      search(std::move(branched));
    }
  }

  void emit(const Cells& cells) {
    std::vector<std::size_t> order;
    order.reserve(n_);
    for (const auto& cell : cells) order.push_back(cell[0]);
    std::string code = "g" + std::to_string(n_) + "|";
    for (std::size_t v : order) code += std::to_string(colors_[v]) + ",";
    code += "|";
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) code += out_[order[i]].test(order[j]) ? '1' : '0';
      code += ';';
    }
    if (best_code_.empty() || code < best_code_) {
      best_code_ = std::move(code);
      best_perm_.assign(n_, 0);
      for (std::size_t pos = 0; pos < n_; ++pos) best_perm_[order[pos]] = pos;
    }
  }

  std::size_t n_;
  std::vector<IndexSet> out_;
  std::vector<int> colors_;
  std::vector<IndexSet> in_;
  std::string best_code_;
  std::vector<std::size_t> best_perm_;
};

inline DigraphCanon::Result canonical_digraph(std::size_t n, const std::vector<IndexSet>& out,
                                              const std::vector<int>& colors) {
  return DigraphCanon(n, out, colors).run();
}

}  // namespace chp::detail
