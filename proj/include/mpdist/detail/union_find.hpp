#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace mpdist::detail {

// Disjoint sets where every root remembers the oldest (smallest) filtration
// position among its members; merges follow the elder rule.
class ElderUnionFind {
 public:
  explicit ElderUnionFind(std::size_t n) : parent_(n), oldest_(n) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    std::iota(oldest_.begin(), oldest_.end(), std::uint32_t{0});
  }

  std::uint32_t find(std::uint32_t x) {
    std::uint32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::uint32_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  std::uint32_t oldest(std::uint32_t root) const { return oldest_[root]; }

  // Joins two distinct roots; the survivor keeps the older birth. Returns the
  // birth position of the class that dies.
  std::uint32_t merge(std::uint32_t ra, std::uint32_t rb) {
    if (oldest_[ra] > oldest_[rb]) std::swap(ra, rb);
    const std::uint32_t killed = oldest_[rb];
    parent_[rb] = ra;
    return killed;
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> oldest_;
};

}  // namespace mpdist::detail
