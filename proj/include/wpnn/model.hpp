#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wpnn/encoding.hpp"
#include "wpnn/timegate.hpp"
#include "wpnn/wideband.hpp"

namespace wpnn {

/// Weight sharing across layers: SharedWeights ties every layer to one weight
/// vector, IndependentWeights trains one vector per layer.
enum class ArchitectureMode { SharedWeights, IndependentWeights };

std::string to_string(ArchitectureMode mode);
ArchitectureMode mode_from_string(const std::string& name);

/// N_S x L trainable weights. Under SharedWeights a single column is stored
/// and replicated on demand, so the trainable degrees of freedom never exceed
/// N_S. Stored values are unconstrained; the linear encoding clips on use.
class WeightMatrix {
 public:
  WeightMatrix(ArchitectureMode mode, int n_s, int depth);
  WeightMatrix(ArchitectureMode mode, int depth, MatR stored);

  ArchitectureMode mode() const { return mode_; }
  int n_s() const { return static_cast<int>(stored_.rows()); }
  int depth() const { return depth_; }

  /// Stored representation: N_S x 1 (shared) or N_S x depth (independent).
  const MatR& stored() const { return stored_; }
  MatR& stored() { return stored_; }
  int stored_cols() const { return static_cast<int>(stored_.cols()); }

  /// Weight vector used by layer ell (0-based).
  Eigen::Ref<const VecR> layer(int ell) const {
    return stored_.col(mode_ == ArchitectureMode::SharedWeights ? 0 : ell);
  }

  /// Full N_S x L matrix with sharing materialized.
  MatR materialized() const;

 private:
  ArchitectureMode mode_;
  int depth_;
  MatR stored_;
};

/// Complete architecture descriptor: cavity, encoding, gate, depth, sharing
/// mode, and weights. Immutable during evaluation; the layer cascade requires
/// a square direct block, i.e. N_T == N_R.
struct WpnnModel {
  std::shared_ptr<const WidebandScattering> cavity;
  EncodingKind encoding = EncodingKind::Phase;
  GateSetting gate = GateSetting::infinite();
  int depth = 1;
  ArchitectureMode mode = ArchitectureMode::SharedWeights;
  WeightMatrix weights;
  /// Optional per-layer cavities for ablations; empty means every layer uses
  /// `cavity`.
  std::vector<std::shared_ptr<const WidebandScattering>> layer_cavities;

  WpnnModel(std::shared_ptr<const WidebandScattering> cavity_, EncodingKind enc, GateSetting g,
            int depth_, ArchitectureMode mode_);

  const WidebandScattering& cavity_for_layer(int ell) const {
    return layer_cavities.empty() ? *cavity : *layer_cavities[static_cast<size_t>(ell)];
  }
};

struct ForwardResult {
  double readout = 0.0;
  /// Wavefronts b^(1..L), only populated when requested.
  std::vector<VecC> wavefronts;
};

/// Reference forward pass: per layer, encode the loads, evaluate the (gated)
/// channel by direct linear solves, propagate the wavefront, then read out the
/// mean of the real parts of the final received wavefront.
ForwardResult forward(const WpnnModel& model, double x, bool keep_intermediates = false);

/// Elementwise forward over a batch, identical to repeated scalar calls.
VecR batch_forward(const WpnnModel& model, const VecR& xs);

/// Sum of squared residuals over the target's sum of squares.
double nmse(const VecR& predictions, const VecR& targets);

/// Checkpoint: architecture fields plus the stored weight matrix (row-major,
/// full double precision). The cavity is referenced by path and content hash.
std::string to_checkpoint_json(const WpnnModel& model, const std::string& cavity_path,
                               uint64_t cavity_hash);
WpnnModel from_checkpoint_json(const std::string& json_text,
                               std::shared_ptr<const WidebandScattering> cavity);
std::string checkpoint_cavity_path(const std::string& json_text);
uint64_t checkpoint_cavity_hash(const std::string& json_text);

}  // namespace wpnn
