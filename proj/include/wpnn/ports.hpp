#pragma once

#include <vector>

#include "wpnn/errors.hpp"

namespace wpnn {

/// Partition of the N port indices into transmit antennas, receive antennas,
/// and tunable (metasurface) element ports. The three index sets are pairwise
/// disjoint, each non-empty, and together cover exactly {0, ..., N-1}.
class PortPartition {
 public:
  PortPartition(std::vector<int> tx, std::vector<int> rx, std::vector<int> pm);

  /// Contiguous layout tx -> rx -> pm, the ordering used by the interchange format.
  static PortPartition contiguous(int n_t, int n_r, int n_s);

  const std::vector<int>& tx() const { return tx_; }
  const std::vector<int>& rx() const { return rx_; }
  const std::vector<int>& pm() const { return pm_; }

  int n_t() const { return static_cast<int>(tx_.size()); }
  int n_r() const { return static_cast<int>(rx_.size()); }
  int n_s() const { return static_cast<int>(pm_.size()); }
  int n_total() const { return n_t() + n_r() + n_s(); }

  bool operator==(const PortPartition& o) const {
    return tx_ == o.tx_ && rx_ == o.rx_ && pm_ == o.pm_;
  }

 private:
  std::vector<int> tx_, rx_, pm_;
};

}  // namespace wpnn
