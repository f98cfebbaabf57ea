#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "tcl/errors.hpp"

namespace tcl {

/// Fixed-universe bitset over node ids 0..universe-1. Equality is set
/// equality; all binary operations require matching universes.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(int universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}

  static NodeSet of(int universe, std::initializer_list<int> nodes) {
    NodeSet s(universe);
    for (int v : nodes) s.insert(v);
    return s;
  }

  int universe() const { return universe_; }

  bool contains(int v) const {
    return (words_[static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1;
  }

  void insert(int v) {
    check(v);
    words_[static_cast<std::size_t>(v) >> 6] |= 1ULL << (v & 63);
  }

  void erase(int v) {
    check(v);
    words_[static_cast<std::size_t>(v) >> 6] &= ~(1ULL << (v & 63));
  }

  int count() const {
    int c = 0;
    for (std::uint64_t w : words_) c += __builtin_popcountll(w);
    return c;
  }

  bool empty() const {
    for (std::uint64_t w : words_)
      if (w) return false;
    return true;
  }

  /// Lowest member, or -1 when empty.
  int first() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i]) return static_cast<int>(i * 64 + __builtin_ctzll(words_[i]));
    return -1;
  }

  bool is_subset_of(const NodeSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  bool intersects(const NodeSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  NodeSet& operator|=(const NodeSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }

  NodeSet& operator&=(const NodeSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }

  NodeSet& operator-=(const NodeSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }
  friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
  friend NodeSet operator-(NodeSet a, const NodeSet& b) { return a -= b; }

  friend bool operator==(const NodeSet& a, const NodeSet& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }
  friend bool operator!=(const NodeSet& a, const NodeSet& b) { return !(a == b); }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for_each([&](int v) { out.push_back(v); });
    return out;
  }

  template <class F>
  void for_each(F f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        int v = static_cast<int>(i * 64 + __builtin_ctzll(w));
        f(v);
        w &= w - 1;
      }
    }
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  void check(int v) const {
    if (v < 0 || v >= universe_) throw OutOfRange("node id out of range");
  }

  int universe_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace tcl
