#pragma once

#include "wpnn/model.hpp"

namespace wpnn {

/// Closed-form series expansions of the scalar readout in the input x.
/// Phase encoding yields the real part of a complex Fourier series; linear
/// encoding yields a real power series. With the pm-pm coupling removed the
/// series truncate at order L.
struct SeriesCoefficients {
  enum class Kind { FourierComplex, PowerReal };
  Kind kind = Kind::FourierComplex;
  VecC coeffs;         // index = order, starting at 0
  int truncation = 0;  // highest order held
  bool converged = true;

  /// Evaluate the series at x.
  double reconstruct(double x) const;
};

/// Relative cutoff of the adaptive series truncation: extraction stops once a
/// coefficient magnitude falls below this fraction of the running maximum.
inline constexpr double kSeriesTailCutoff = 1e-14;

/// Readout Fourier coefficients of a single-layer phase-encoded model with its
/// full coupling, from repeated application of Psi S_SS to the coupling chain.
/// max_order < 0 selects adaptive truncation at the tail cutoff.
SeriesCoefficients fourier_single_layer(const WpnnModel& model, int max_order = -1);

/// Exactly L+1 Fourier coefficients of a phase-encoded model evaluated with
/// the pm-pm block zeroed, via the layer-product expansion.
SeriesCoefficients fourier_multilayer_nomc(const WpnnModel& model);

/// Power-series coefficients of a single-layer linear-encoded model with its
/// full coupling. max_order < 0 selects adaptive truncation.
SeriesCoefficients power_single_layer(const WpnnModel& model, int max_order = -1);

/// Degree-L polynomial coefficients of a linear-encoded model with the pm-pm
/// block zeroed.
SeriesCoefficients poly_multilayer_nomc(const WpnnModel& model);

/// Structural-non-linearity measure: relative residual of the best affine fit
/// from the encoded loads [Re r; Im r; 1] to the readout over random inputs.
/// Zero means the readout is affine in the loads.
double nonlinearity_score(const WpnnModel& model, int samples, uint64_t seed = 0xA11A5);

}  // namespace wpnn
