// Lexicographic multi-index bases for dense exterior algebra on R^n, n <= 8.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace mvlab {

inline constexpr int kMaxDim = 8;

/// C(n,k); 0 for k < 0 or k > n.
long binomial(int n, int k);

/// A strictly increasing index tuple i1 < ... < ik; only the first k entries
/// of the array are meaningful.
using MultiIndex = std::array<std::uint8_t, kMaxDim>;

/// All k-element subsets of {0..n-1} in lexicographic order, with O(1)
/// rank lookup. Instances are immutable and shared process-wide.
class MultiIndexTable {
 public:
  /// Shared table for (n, k); built on first use, thread-safe.
  static const MultiIndexTable& get(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  int size() const { return static_cast<int>(indices_.size()); }

  const MultiIndex& operator[](int r) const { return indices_[r]; }

  /// Subset of r-th tuple as a bitmask over {0..n-1}.
  std::uint32_t bits(int r) const { return bits_[r]; }

  /// Rank of a strictly increasing tuple (first k entries); inverse of [].
  int rank(const MultiIndex& idx) const;

  /// Rank of a subset given as a bitmask with exactly k bits set.
  int rank_of_bits(std::uint32_t mask) const { return rank_by_bits_[mask]; }

 private:
  MultiIndexTable(int n, int k);

  int n_, k_;
  std::vector<MultiIndex> indices_;
  std::vector<std::uint32_t> bits_;
  std::vector<int> rank_by_bits_;  // dense over all 2^n masks; -1 if unused
};

}  // namespace mvlab
