#include "wpnn/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <json.hpp>

#include "wpnn/rng.hpp"
#include "wpnn/util.hpp"

namespace wpnn {

using nlohmann::json;

double ButterworthFilter::magnitude(double f) const {
  const cxd z = std::polar(1.0, M_PI * f);
  const cxd zi = 1.0 / z;
  cxd h(1.0, 0.0);
  for (const Biquad& s : sections) {
    const cxd num = s.b0 + s.b1 * zi + s.b2 * zi * zi;
    const cxd den = 1.0 + s.a1 * zi + s.a2 * zi * zi;
    h *= num / den;
  }
  return std::abs(h);
}

ButterworthFilter design_butterworth4(double cutoff) {
  if (!(cutoff > 0.0 && cutoff < 1.0))
    throw FilterDesignError("cutoff must lie strictly inside (0, 1) of Nyquist");
  const double warped = std::tan(0.5 * M_PI * cutoff);
  ButterworthFilter filt;
  filt.cutoff = cutoff;
  // Analog prototype poles on the unit circle, conjugate pairs at
  // angles 5pi/8 and 7pi/8; bilinear map z = (1 + s)/(1 - s).
  const double angles[2] = {5.0 * M_PI / 8.0, 7.0 * M_PI / 8.0};
  for (double ang : angles) {
    const cxd ps = warped * std::polar(1.0, ang);
    const cxd zp = (1.0 + ps) / (1.0 - ps);
    Biquad s{};
    s.a1 = -2.0 * zp.real();
    s.a2 = std::norm(zp);
    const double dc = 1.0 + s.a1 + s.a2;  // numerator (1 + z^-1)^2 has DC gain 4
    s.b0 = dc / 4.0;
    s.b1 = 2.0 * s.b0;
    s.b2 = s.b0;
    filt.sections.push_back(s);
  }
  return filt;
}

namespace {

VecR run_sections(const ButterworthFilter& filter, const VecR& x) {
  VecR y = x;
  for (const Biquad& s : filter.sections) {
    // Direct form II transposed, state initialized to the steady state of the
    // first sample so constants pass through exactly.
    const double c = y.size() ? y(0) : 0.0;
    double z1 = c * (1.0 - s.b0);
    double z2 = c * (s.b2 - s.a2);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double in = y(i);
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      y(i) = out;
    }
  }
  return y;
}

}  // namespace

VecR filtfilt(const ButterworthFilter& filter, const VecR& x) {
  constexpr int kOrder = 4;
  const int pad = 3 * kOrder;
  const int n = static_cast<int>(x.size());
  if (n <= pad) throw FilterDesignError("signal too short for reflect padding");
  VecR ext(n + 2 * pad);
  for (int i = 0; i < pad; ++i) ext(i) = x(pad - i);
  ext.segment(pad, n) = x;
  for (int i = 0; i < pad; ++i) ext(pad + n + i) = x(n - 2 - i);
  VecR fwd = run_sections(filter, ext);
  VecR rev = fwd.reverse();
  VecR bwd = run_sections(filter, rev);
  VecR out = bwd.reverse().segment(pad, n);
  return out;
}

VecR RegressionTask::gather_x(const std::vector<int>& idx) const {
  VecR out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = xs(idx[i]);
  return out;
}

VecR RegressionTask::gather_y(const std::vector<int>& idx) const {
  VecR out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = ys(idx[i]);
  return out;
}

RegressionTask generate_task(double cutoff, double scale_g, uint64_t seed) {
  if (!(scale_g > 0.0)) throw DomainError("target scale g must be positive");
  const ButterworthFilter filt = design_butterworth4(cutoff);

  RegressionTask task;
  task.cutoff = cutoff;
  task.scale_g = scale_g;
  task.seed = seed;

  CounterRng rng(seed);
  const int n = kTaskSamples;
  task.xs.resize(n);
  for (int i = 0; i < n; ++i) task.xs(i) = static_cast<double>(i) / (n - 1);
  VecR noise(n);
  for (int i = 0; i < n; ++i) noise(i) = rng.normal();
  VecR y = filtfilt(filt, noise);

  const double mu = y.mean();
  const double sigma = std::sqrt((y.array() - mu).square().mean());
  if (sigma == 0.0) throw DegenerateTarget("filtered noise collapsed to a constant");
  task.ys = (y.array() - mu) / (scale_g * sigma);

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(order[static_cast<size_t>(i)],
              order[static_cast<size_t>(rng.uniform_index(static_cast<uint64_t>(i) + 1))]);
  task.train_idx.assign(order.begin(), order.begin() + kTrainSamples);
  task.test_idx.assign(order.begin() + kTrainSamples, order.end());
  std::sort(task.train_idx.begin(), task.train_idx.end());
  std::sort(task.test_idx.begin(), task.test_idx.end());
  return task;
}

std::string to_task_json(const RegressionTask& task) {
  json doc;
  doc["cutoff"] = task.cutoff;
  doc["g"] = task.scale_g;
  doc["seed"] = task.seed;
  json xs = json::array(), ys = json::array();
  for (Eigen::Index i = 0; i < task.xs.size(); ++i) xs.push_back(task.xs(i));
  for (Eigen::Index i = 0; i < task.ys.size(); ++i) ys.push_back(task.ys(i));
  doc["xs"] = std::move(xs);
  doc["ys"] = std::move(ys);
  doc["train_idx"] = task.train_idx;
  doc["test_idx"] = task.test_idx;
  return doc.dump();
}

RegressionTask from_task_json(const std::string& json_text) {
  json doc = json::parse(json_text);
  RegressionTask task;
  task.cutoff = doc.at("cutoff").get<double>();
  task.scale_g = doc.at("g").get<double>();
  task.seed = doc.at("seed").get<uint64_t>();
  const auto& xs = doc.at("xs");
  const auto& ys = doc.at("ys");
  task.xs.resize(xs.size());
  task.ys.resize(ys.size());
  for (size_t i = 0; i < xs.size(); ++i) task.xs(static_cast<Eigen::Index>(i)) = xs[i].get<double>();
  for (size_t i = 0; i < ys.size(); ++i) task.ys(static_cast<Eigen::Index>(i)) = ys[i].get<double>();
  task.train_idx = doc.at("train_idx").get<std::vector<int>>();
  task.test_idx = doc.at("test_idx").get<std::vector<int>>();
  return task;
}

void save_task(const RegressionTask& task, const std::string& path) {
  write_file_atomic(path, to_task_json(task));
}

RegressionTask load_task(const std::string& path) { return from_task_json(read_file(path)); }

ScaleCalibration calibrate_scale(const WpnnModel& model, int draws, uint64_t seed) {
  if (draws < 2) throw DomainError("calibration needs at least two draws");
  CounterRng rng(seed);
  WpnnModel probe = model;
  std::vector<double> readouts;
  readouts.reserve(static_cast<size_t>(draws));
  const int n_s = probe.weights.n_s();
  const int cols = probe.weights.stored_cols();
  for (int d = 0; d < draws; ++d) {
    MatR w(n_s, cols);
    for (int i = 0; i < n_s; ++i)
      for (int j = 0; j < cols; ++j)
        w(i, j) = probe.encoding == EncodingKind::Phase ? rng.uniform() : rng.uniform(0.25, 0.75);
    probe.weights = WeightMatrix(probe.mode, probe.depth, std::move(w));
    readouts.push_back(forward(probe, rng.uniform()).readout);
  }
  std::sort(readouts.begin(), readouts.end());
  auto quantile = [&](double q) {
    const double pos = q * (draws - 1);
    const int lo = static_cast<int>(pos);
    const int hi = std::min(lo + 1, draws - 1);
    const double t = pos - lo;
    return (1.0 - t) * readouts[static_cast<size_t>(lo)] + t * readouts[static_cast<size_t>(hi)];
  };
  ScaleCalibration cal;
  cal.readout_p01 = quantile(0.01);
  cal.readout_p99 = quantile(0.99);
  cal.readout_median = quantile(0.5);
  const double half = std::min(cal.readout_p99 - cal.readout_median,
                               cal.readout_median - cal.readout_p01);
  if (half <= 0.0) {
    cal.unreachable = true;
    cal.suggested_g = std::numeric_limits<double>::infinity();
  } else {
    // Standardized targets span about +-3 target deviations of width 1/g.
    // The comfort factor keeps them well inside the percentile interval
    // rather than touching it.
    cal.suggested_g = kScaleComfortFactor * 3.0 / half;
  }
  return cal;
}

}  // namespace wpnn
