#pragma once

#include <cstdint>
#include <cstddef>
#include <functional>
#include <vector>

namespace chp {

// Fixed-width bitset sized at construction. Used for markings and
// place/transition sets; all operands of a binary op must have equal size.
class IndexSet {
public:
  IndexSet() = default;
  explicit IndexSet(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  bool empty() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  bool contains(const IndexSet& other) const {  // other subset of *this
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (other.w_[k] & ~w_[k]) return false;
    return true;
  }

  bool intersects(const IndexSet& other) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & other.w_[k]) return true;
    return false;
  }

  IndexSet& operator|=(const IndexSet& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }
  IndexSet& operator&=(const IndexSet& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }
  IndexSet& operator-=(const IndexSet& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
    return *this;
  }

  friend IndexSet operator|(IndexSet a, const IndexSet& b) { return a |= b; }
  friend IndexSet operator&(IndexSet a, const IndexSet& b) { return a &= b; }
  friend IndexSet operator-(IndexSet a, const IndexSet& b) { return a -= b; }

  friend bool operator==(const IndexSet& a, const IndexSet& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }
  friend bool operator<(const IndexSet& a, const IndexSet& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return a.w_ < b.w_;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t k = 0; k < w_.size(); ++k) {
      std::uint64_t w = w_[k];
      while (w) {
        unsigned b = static_cast<unsigned>(__builtin_ctzll(w));
        fn(k * 64 + b);
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  std::size_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto w : w_) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }

private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

struct IndexSetHash {
  std::size_t operator()(const IndexSet& s) const { return s.hash(); }
};

}  // namespace chp
