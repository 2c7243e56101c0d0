#pragma once

#include <string>
#include <vector>

#include "wpnn/wideband.hpp"

namespace wpnn {

/// Delay-domain truncation setting. A finite tau keeps only the response at
/// delays <= tau (inclusive); the infinite setting bypasses gating entirely.
/// The band window applied before the delay transform is rectangular.
class GateSetting {
 public:
  static GateSetting infinite() { return GateSetting(true, 0.0); }
  static GateSetting truncate(double tau_seconds);

  bool is_infinite() const { return infinite_; }
  double tau_seconds() const { return tau_; }

  /// "inf" or the truncation time in seconds.
  std::string to_string() const;
  static GateSetting from_string(const std::string& text);

  bool operator==(const GateSetting& o) const {
    return infinite_ == o.infinite_ && (infinite_ || tau_ == o.tau_);
  }

 private:
  GateSetting(bool inf, double tau) : infinite_(inf), tau_(tau) {}
  bool infinite_;
  double tau_;
};

/// The six finite truncation times of the standard sweep, seconds.
const std::vector<double>& standard_gate_sweep_s();

/// Spectrum <-> delay transforms on a length-N uniform grid. Delay sample n
/// is labeled t_n = n / B with B the band span, so the axis spacing is 1/B and
/// its extent (N-1)/B. Conventions chosen so a transfer factor exp(+j2 pi f t0)
/// appears at positive delay t0.
VecC spectrum_to_delay(const VecC& spectrum);
VecC delay_to_spectrum(const VecC& delay);

/// Time gating as an explicit linear map on length-N_f spectra: transform to
/// the delay domain, zero samples beyond tau, transform back, read off the
/// operating-frequency sample. Precomputing the map keeps the training path
/// linear and cheap to differentiate.
class GateOperator {
 public:
  GateOperator(const VecR& grid_hz, int operating_index, GateSetting setting);

  const GateSetting& setting() const { return setting_; }
  int n_freq() const { return n_; }
  int operating_index() const { return op_; }
  int kept_delay_samples() const { return keep_; }

  /// Row vector w with gated value at the operating frequency = w . spectrum.
  const VecC& row() const { return row_; }
  cxd at_operating(const VecC& spectrum) const { return row_.transpose() * spectrum; }

  /// Full spectrum -> gated spectrum action (a projector in the delay domain).
  VecC apply_spectrum(const VecC& spectrum) const;

 private:
  GateSetting setting_;
  int n_ = 0;
  int op_ = 0;
  int keep_ = 0;  // delay samples kept; n_ when the gate is infinite
  VecC row_;
};

/// Gated end-to-end channel: evaluate H(f) over the whole grid for one
/// frequency-flat load vector, gate each of the N_R x N_T entries, return the
/// operating-frequency channel. The infinite setting returns the ungated
/// operating-frequency channel directly.
ChannelMatrix gate_channel(const WidebandScattering& ws, const LoadVector& loads,
                           const GateSetting& setting);

/// Delay axis plus per-entry complex impulse responses of the end-to-end
/// channel, for diagnostics and for choosing truncation times.
struct ImpulseResponse {
  VecR delays_s;            // length N_f, spacing 1/B
  int n_r = 0, n_t = 0;
  std::vector<VecC> entries;  // row-major (i * n_t + j)

  const VecC& entry(int i, int j) const { return entries[static_cast<size_t>(i * n_t + j)]; }
};

ImpulseResponse impulse_response(const WidebandScattering& ws, const LoadVector& loads);

/// Per-frequency end-to-end channels for one frequency-flat load vector
/// (the shared workhorse behind gating and impulse extraction).
std::vector<MatC> channel_spectrum(const WidebandScattering& ws, const LoadVector& loads);

}  // namespace wpnn
