#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wpnn/scattering.hpp"

namespace wpnn {

/// Frequency-indexed family of scattering matrices on a uniform grid, all
/// sharing one port partition. The default grid mirrors a 481-point sweep of
/// 110-170 GHz with the operating point at 140 GHz.
class WidebandScattering {
 public:
  WidebandScattering(VecR grid_hz, std::vector<MatC> matrices, PortPartition partition,
                     int operating_index);

  const VecR& grid_hz() const { return grid_; }
  int n_freq() const { return static_cast<int>(grid_.size()); }
  int operating_index() const { return operating_index_; }
  double operating_frequency_hz() const { return grid_(operating_index_); }
  double band_span_hz() const { return grid_(grid_.size() - 1) - grid_(0); }
  double grid_spacing_hz() const { return (grid_(1) - grid_(0)); }

  const PortPartition& partition() const { return partition_; }
  int n_t() const { return partition_.n_t(); }
  int n_r() const { return partition_.n_r(); }
  int n_s() const { return partition_.n_s(); }

  const MatC& matrix(int k) const { return matrices_[static_cast<size_t>(k)]; }
  ScatteringMatrix at(int k) const {
    return ScatteringMatrix(matrices_[static_cast<size_t>(k)], partition_, grid_(k));
  }
  ScatteringMatrix at_operating() const { return at(operating_index_); }

  /// Throws PassivityViolation if any frequency sample fails the unit bound.
  void require_passive() const;

  /// Copy with every pm-pm block zeroed (mutual coupling removed).
  std::shared_ptr<WidebandScattering> with_zero_pm_coupling() const;

  /// Frequency-block view used by the channel evaluators: per-frequency copies
  /// of the four partition blocks plus the largest singular value of each
  /// pm-pm block (a tight spectral-radius guard for unit-magnitude loads).
  struct BlockView {
    std::vector<MatC> s_rt, s_rs, s_st, s_ss;
    std::vector<double> s_ss_sigma_max;
  };
  const BlockView& blocks() const;

 private:
  VecR grid_;
  std::vector<MatC> matrices_;
  PortPartition partition_;
  int operating_index_;
  mutable std::shared_ptr<const BlockView> blocks_;  // built on first use
};

/// Interchange document:
///   {"n_t", "n_r", "n_s", "frequencies_hz": [...], "matrices": [...],
///    "operating_index": k}
/// where matrices[f][i][j] = [re, im] is entry (i,j) at frequency index f,
/// rows/columns ordered tx -> rx -> pm. Values are quantized to 15 significant
/// digits on emit; "operating_index" is optional on load (defaults to the
/// sample nearest 140 GHz, else mid-grid).
std::string to_interchange_json(const WidebandScattering& ws);
std::shared_ptr<WidebandScattering> from_interchange_json(const std::string& json_text);

void save_interchange(const WidebandScattering& ws, const std::string& path);
std::shared_ptr<WidebandScattering> load_interchange(const std::string& path);

}  // namespace wpnn
