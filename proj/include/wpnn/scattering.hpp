#pragma once

#include <Eigen/Dense>
#include <complex>

#include "wpnn/errors.hpp"
#include "wpnn/ports.hpp"

namespace wpnn {

using cxd = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

/// Slack allowed on the unit singular-value bound when declaring a matrix passive.
inline constexpr double kPassivityTol = 1e-9;
/// Margin below unity required of the load-coupling spectral radius before a
/// resolvent solve is attempted.
inline constexpr double kResolventMargin = 1e-12;
/// Configurations whose spectral radius is this close to unity are flagged in
/// diagnostics as near-critical.
inline constexpr double kNearCriticalBand = 1e-6;

/// Complex N x N scattering matrix at a single frequency, all ports referenced
/// to 50 ohms, together with the port partition that names its blocks.
class ScatteringMatrix {
 public:
  ScatteringMatrix(MatC entries, PortPartition partition, double frequency_hz);

  const MatC& entries() const { return entries_; }
  const PortPartition& partition() const { return partition_; }
  double frequency_hz() const { return frequency_hz_; }

  int n_t() const { return partition_.n_t(); }
  int n_r() const { return partition_.n_r(); }
  int n_s() const { return partition_.n_s(); }
  int n_total() const { return partition_.n_total(); }

  // Port-class blocks (copies).
  MatC s_rt() const { return block(partition_.rx(), partition_.tx()); }
  MatC s_rs() const { return block(partition_.rx(), partition_.pm()); }
  MatC s_st() const { return block(partition_.pm(), partition_.tx()); }
  MatC s_ss() const { return block(partition_.pm(), partition_.pm()); }

  /// Copy with the pm-pm block replaced by zeros (mutual coupling removed).
  ScatteringMatrix with_zero_pm_coupling() const;

 private:
  MatC block(const std::vector<int>& rows, const std::vector<int>& cols) const;

  MatC entries_;
  PortPartition partition_;
  double frequency_hz_;
};

/// Reflection coefficients of the tunable loads terminating the pm ports.
class LoadVector {
 public:
  explicit LoadVector(VecC reflections);

  const VecC& reflections() const { return reflections_; }
  int size() const { return static_cast<int>(reflections_.size()); }

 private:
  VecC reflections_;
};

/// End-to-end channel from the transmit to the receive antennas for one load
/// configuration at one frequency.
struct ChannelMatrix {
  MatC entries;  // N_R x N_T
  double frequency_hz = 0.0;
};

struct PassivityReport {
  double sigma_max = 0.0;
  double frequency_hz = 0.0;
  bool passive = false;
};

/// Report-only check of the unit singular-value bound (sigma_max <= 1 + tol).
PassivityReport validate_passivity(const ScatteringMatrix& s);

/// Largest eigenvalue magnitude of diag(loads) * s_ss, the quantity that must
/// stay below unity for the load-coupling resolvent to exist.
double spectral_radius(const LoadVector& loads, const MatC& s_ss);

/// Margin diagnostics for the resolvent guard. `radius_bound` is a cheap upper
/// bound; `radius` the exact value when it had to be computed.
struct ResolventGuard {
  double radius_bound = 0.0;
  double radius = -1.0;  // negative = not computed (bound was conclusive)
  bool near_critical = false;
};

ResolventGuard check_resolvent_margin(const LoadVector& loads, const MatC& s_ss);

/// H = S_RT + S_RS (I - Phi S_SS)^{-1} Phi S_ST, evaluated with a pivoted LU
/// solve (never an explicit inverse). Throws SingularResolvent when the
/// spectral radius of Phi S_SS reaches 1 - kResolventMargin or the solve
/// detects rank deficiency.
ChannelMatrix end_to_end_channel(const ScatteringMatrix& s, const LoadVector& loads);

/// Truncated geometric-series form of the same channel:
/// H_K = S_RT + S_RS [sum_{k=0}^{K} (Phi S_SS)^k] Phi S_ST.
ChannelMatrix neumann_channel(const ScatteringMatrix& s, const LoadVector& loads, int order);

}  // namespace wpnn
