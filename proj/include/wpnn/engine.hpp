#pragma once

#include <memory>
#include <vector>

#include "wpnn/model.hpp"

namespace wpnn {

/// Fast differentiable evaluator for the load-separable encodings.
///
/// Both encodings factor the load matrix as Phi(x, w) = z(x) * diag(psi(w))
/// with a scalar z on or inside the unit circle. Expanding the coupling
/// resolvent geometrically then turns each (gated) layer channel into a low-
/// degree matrix polynomial in z whose coefficients depend only on the
/// weights:
///
///   H_gated(z) = sum_k gate_k [ S_RT(f_k) + sum_j z^{j+1} S_RS Psi (S_SS Psi)^j S_ST ](f_k)
///
/// One pass over the frequency grid per iteration builds the polynomial
/// coefficients, after which every sample evaluation is a Horner step and the
/// exact batch gradient is recovered from the same chains contracted against
/// batch moment matrices on a root-of-unity grid. Chains truncate at a
/// relative tolerance; passivity guarantees convergence.
///
/// The reference path (direct per-frequency linear solves in
/// `forward`/`gate_channel`) computes the same quantities and is used to
/// cross-check this engine in the tests.
struct EngineOptions {
  double chain_tol = 1e-12;
  int max_chain = 8000;
};

class WpnnEngine {
 public:
  using Options = EngineOptions;

  WpnnEngine(std::shared_ptr<const WidebandScattering> cavity, EncodingKind encoding,
             GateSetting gate, int depth, ArchitectureMode mode, Options options = Options());

  static WpnnEngine for_model(const WpnnModel& model, Options options = Options());

  int depth() const { return depth_; }
  EncodingKind encoding() const { return encoding_; }

  /// Readouts for a batch of inputs.
  VecR forward_batch(const WeightMatrix& weights, const VecR& xs) const;
  double forward_one(const WeightMatrix& weights, double x) const;

  struct LossGrad {
    double value = 0.0;  // batch NMSE
    MatR grad;           // gradient w.r.t. the stored weights (N_S x stored columns)
  };

  /// Batch NMSE and its gradient with respect to the stored weight columns
  /// (shared mode folds the per-layer contributions into the single column).
  LossGrad loss_and_gradient(const WeightMatrix& weights, const VecR& xs, const VecR& ys) const;

 private:
  struct LayerPolynomial {
    std::vector<MatC> coeffs;     // coeffs[p], p = 0..P, each N_R x N_T
    std::vector<int> chain_len;   // emitted chain orders per support frequency
    int max_len = 0;
  };

  VecC layer_psi(const WeightMatrix& weights, int layer) const;
  cxd sample_z(double x) const;
  LayerPolynomial build_polynomial(const VecC& psi) const;
  static MatC horner(const std::vector<MatC>& coeffs, cxd z);

  std::shared_ptr<const WidebandScattering> cavity_;
  const WidebandScattering::BlockView* blocks_ = nullptr;
  EncodingKind encoding_;
  GateSetting gate_;
  int depth_;
  ArchitectureMode mode_;
  Options options_;

  std::vector<int> support_;  // frequency indices entering the gate sum
  VecC gate_weights_;         // per-support complex gate weights
  MatC gated_direct_;         // sum_k gate_k S_RT(f_k)
  VecC u_;                    // readout vector (identity once contracted)
  VecC a1_;                   // input wavefront (identity once contracted)
  bool contracted_ = false;   // depth-1 blocks carry the readout contraction
  int n_out_ = 0, n_in_ = 0;  // effective block dimensions
  std::vector<MatC> srt_, srs_, sst_;  // per-support blocks, contracted at depth 1
};

}  // namespace wpnn
