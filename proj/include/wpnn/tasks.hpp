#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wpnn/model.hpp"

namespace wpnn {

/// Reference target scale reported alongside calibration results.
inline constexpr double kDefaultTargetScale = 30.0;
/// Margin applied to the minimal admissible scale so calibrated targets sit
/// comfortably inside the readout distribution.
inline constexpr double kScaleComfortFactor = 2.5;

/// Fourth-order lowpass Butterworth digital filter (bilinear design) as a
/// cascade of two biquad sections, each normalized to unit DC gain. Cutoff is
/// relative to Nyquist, in (0, 1).
struct Biquad {
  double b0, b1, b2;  // numerator
  double a1, a2;      // denominator (a0 = 1)
};

struct ButterworthFilter {
  double cutoff = 0.0;
  std::vector<Biquad> sections;

  /// Single-pass magnitude response at digital frequency f in [0, 1] (Nyquist = 1).
  double magnitude(double f) const;
};

ButterworthFilter design_butterworth4(double cutoff);

/// Forward-backward (zero-phase) filtering with reflect padding of 3x the
/// filter order on each side.
VecR filtfilt(const ButterworthFilter& filter, const VecR& x);

/// One scalar regression target: lowpass-filtered white Gaussian noise on 600
/// uniform samples of [0,1], standardized to zero mean and standard deviation
/// 1/g, split 200 train / 400 test.
struct RegressionTask {
  VecR xs;
  VecR ys;
  double cutoff = 0.0;
  double scale_g = 0.0;
  uint64_t seed = 0;
  std::vector<int> train_idx;
  std::vector<int> test_idx;

  VecR gather_x(const std::vector<int>& idx) const;
  VecR gather_y(const std::vector<int>& idx) const;
};

inline constexpr int kTaskSamples = 600;
inline constexpr int kTrainSamples = 200;

RegressionTask generate_task(double cutoff, double scale_g, uint64_t seed);

std::string to_task_json(const RegressionTask& task);
RegressionTask from_task_json(const std::string& json_text);
void save_task(const RegressionTask& task, const std::string& path);
RegressionTask load_task(const std::string& path);

/// Readout-spread calibration of the target scale g: evaluates the readout for
/// `draws` random weight configurations at random inputs and suggests a g that
/// keeps +-3 standardized target deviations inside the 1st-99th percentile
/// readout interval. The reference value 30 is reported alongside.
struct ScaleCalibration {
  double suggested_g = 0.0;
  double reference_g = kDefaultTargetScale;
  bool unreachable = false;  // constant readout, no usable spread
  double readout_p01 = 0.0;
  double readout_p99 = 0.0;
  double readout_median = 0.0;
};

ScaleCalibration calibrate_scale(const WpnnModel& model, int draws = 1000, uint64_t seed = 2024);

}  // namespace wpnn
