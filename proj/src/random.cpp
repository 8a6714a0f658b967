#include "divscope/random.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace divscope {

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    std::uint64_t seed) {
  if (k > n) throw std::invalid_argument("sample size exceeds population");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

std::vector<std::size_t> sample_sorted(std::size_t n, std::size_t k, std::uint64_t seed) {
  auto idx = sample_without_replacement(n, k, seed);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace divscope
