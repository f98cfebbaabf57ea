#pragma once

#include <cstdint>
#include <vector>

#include "tcl/errors.hpp"

namespace tcl {

/// Multiset of participant opinions over the nodes of a graph.
class Profile {
 public:
  Profile() = default;
  explicit Profile(int node_count) : counts_(node_count, 0) {}

  static Profile from_counts(const std::vector<long long>& counts) {
    Profile p;
    p.counts_ = counts;
    for (long long c : counts) {
      if (c < 0) throw OutOfRange("negative participant count");
      p.total_ += c;
    }
    return p;
  }

  void add(int node, long long count = 1) {
    if (node < 0 || node >= static_cast<int>(counts_.size()))
      throw OutOfRange("profile node out of range");
    if (count < 0) throw OutOfRange("negative participant count");
    counts_[node] += count;
    total_ += count;
  }

  int node_count() const { return static_cast<int>(counts_.size()); }
  long long count_at(int node) const { return counts_[node]; }
  long long total() const { return total_; }
  const std::vector<long long>& counts() const { return counts_; }

  /// Nodes with at least one participant, ascending.
  std::vector<int> support() const {
    std::vector<int> s;
    for (int v = 0; v < node_count(); ++v)
      if (counts_[v] > 0) s.push_back(v);
    return s;
  }

  friend bool operator==(const Profile& a, const Profile& b) {
    return a.counts_ == b.counts_;
  }

 private:
  std::vector<long long> counts_;
  long long total_ = 0;
};

}  // namespace tcl
