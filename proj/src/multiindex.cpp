#include "mvlab/multiindex.hpp"

#include <bit>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mvlab {

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

MultiIndexTable::MultiIndexTable(int n, int k) : n_(n), k_(k) {
  if (n < 0 || n > kMaxDim || k < 0 || k > n)
    throw std::invalid_argument("MultiIndexTable: need 0 <= k <= n <= 8");
  rank_by_bits_.assign(std::size_t{1} << n, -1);
  MultiIndex idx{};
  for (int i = 0; i < k; ++i) idx[i] = static_cast<std::uint8_t>(i);
  const long count = binomial(n, k);
  for (long r = 0; r < count; ++r) {
    std::uint32_t mask = 0;
    for (int i = 0; i < k; ++i) mask |= 1u << idx[i];
    indices_.push_back(idx);
    bits_.push_back(mask);
    rank_by_bits_[mask] = static_cast<int>(r);
    // advance to the next strictly increasing tuple
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = static_cast<std::uint8_t>(idx[i - 1] + 1);
  }
}

const MultiIndexTable& MultiIndexTable::get(int n, int k) {
  static std::map<std::pair<int, int>, MultiIndexTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({n, k});
  if (it == cache.end())
    it = cache.emplace(std::make_pair(n, k), MultiIndexTable(n, k)).first;
  return it->second;
}

int MultiIndexTable::rank(const MultiIndex& idx) const {
  std::uint32_t mask = 0;
  for (int i = 0; i < k_; ++i) {
    if (idx[i] >= n_) throw std::invalid_argument("MultiIndexTable::rank: index out of range");
    mask |= 1u << idx[i];
  }
  if (std::popcount(mask) != k_)
    throw std::invalid_argument("MultiIndexTable::rank: tuple not strictly increasing");
  int r = rank_by_bits_[mask];
  if (r < 0) throw std::invalid_argument("MultiIndexTable::rank: tuple not in table");
  return r;
}

}  // namespace mvlab
