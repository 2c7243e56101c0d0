#include "wpnn/ports.hpp"

#include <algorithm>
#include <numeric>

namespace wpnn {

PortPartition::PortPartition(std::vector<int> tx, std::vector<int> rx, std::vector<int> pm)
    : tx_(std::move(tx)), rx_(std::move(rx)), pm_(std::move(pm)) {
  if (tx_.empty() || rx_.empty() || pm_.empty())
    throw DimensionMismatch("each port class needs at least one port");
  std::vector<int> all;
  all.reserve(tx_.size() + rx_.size() + pm_.size());
  all.insert(all.end(), tx_.begin(), tx_.end());
  all.insert(all.end(), rx_.begin(), rx_.end());
  all.insert(all.end(), pm_.begin(), pm_.end());
  std::vector<int> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  const int n = static_cast<int>(sorted.size());
  for (int i = 0; i < n; ++i) {
    if (sorted[i] != i)
      throw DimensionMismatch("port classes must be disjoint and cover 0..N-1 exactly");
  }
}

PortPartition PortPartition::contiguous(int n_t, int n_r, int n_s) {
  auto fill = [](int lo, int count) {
    std::vector<int> v(static_cast<size_t>(std::max(count, 0)));
    std::iota(v.begin(), v.end(), lo);
    return v;
  };
  return PortPartition(fill(0, n_t), fill(n_t, n_r), fill(n_t + n_r, n_s));
}

}  // namespace wpnn
