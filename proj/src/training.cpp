#include "wpnn/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace wpnn {

void TrainConfig::validate(int n_train) const {
  if (learning_rate <= 0.0) throw ConfigError("learning rate must be positive");
  if (iterations < 0) throw ConfigError("iteration count must be non-negative");
  if (batch_size < 1 || batch_size > n_train)
    throw ConfigError("batch size must lie in [1, n_train]");
  if (adam_beta1 <= 0.0 || adam_beta1 >= 1.0 || adam_beta2 <= 0.0 || adam_beta2 >= 1.0)
    throw ConfigError("Adam betas must lie in (0, 1)");
  if (adam_eps <= 0.0) throw ConfigError("Adam epsilon must be positive");
  if (chain_tol <= 0.0) throw ConfigError("chain tolerance must be positive");
}

WpnnEngine::LossGrad loss_and_gradient(const WpnnModel& model, const VecR& xs, const VecR& ys,
                                       double chain_tol) {
  WpnnEngine::Options opt;
  opt.chain_tol = chain_tol;
  return WpnnEngine::for_model(model, opt).loss_and_gradient(model.weights, xs, ys);
}

WeightMatrix init_weights(const WpnnModel& model, const TrainConfig& cfg, CounterRng& rng) {
  double lo = cfg.init_lo, hi = cfg.init_hi;
  if (lo >= hi) {
    if (model.encoding == EncodingKind::Phase) {
      lo = 0.0;
      hi = 1.0;
    } else {
      lo = 0.25;
      hi = 0.75;
    }
  }
  const int n_s = model.weights.n_s();
  const int cols = model.weights.stored_cols();
  MatR w(n_s, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < n_s; ++i) w(i, j) = rng.uniform(lo, hi);
  return WeightMatrix(model.mode, model.depth, std::move(w));
}

std::pair<WpnnModel, TrainTrace> train(const WpnnModel& model, const RegressionTask& task,
                                       const TrainConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n_train = static_cast<int>(task.train_idx.size());
  cfg.validate(n_train);

  CounterRng rng(cfg.seed);
  WpnnModel trained = model;
  trained.weights = init_weights(model, cfg, rng);

  WpnnEngine::Options opt;
  opt.chain_tol = cfg.chain_tol;
  const WpnnEngine engine = WpnnEngine::for_model(trained, opt);

  const VecR train_x = task.gather_x(task.train_idx);
  const VecR train_y = task.gather_y(task.train_idx);

  TrainTrace trace;
  if (cfg.grad_check_coords > 0) {
    trace.grad_check = gradient_check(trained, train_x, train_y, cfg.grad_check_coords,
                                      cfg.seed ^ 0x5A5A5A5AULL);
    trace.grad_checked = true;
  }

  MatR& w = trained.weights.stored();
  MatR m = MatR::Zero(w.rows(), w.cols());
  MatR v = MatR::Zero(w.rows(), w.cols());

  // Epoch schedule: shuffle the training indices, consume batch_size at a
  // time, reshuffle when exhausted.
  std::vector<int> order(static_cast<size_t>(n_train));
  for (int i = 0; i < n_train; ++i) order[static_cast<size_t>(i)] = i;
  int cursor = n_train;  // force an initial shuffle

  VecR bx(cfg.batch_size), by(cfg.batch_size);
  if (cfg.iterations == 0) {
    trace.batch_nmse.push_back(
        engine.loss_and_gradient(trained.weights, train_x, train_y).value);
  }
  for (int it = 0; it < cfg.iterations; ++it) {
    if (cursor + cfg.batch_size > n_train) {
      for (int i = n_train - 1; i > 0; --i)
        std::swap(order[static_cast<size_t>(i)],
                  order[static_cast<size_t>(rng.uniform_index(static_cast<uint64_t>(i) + 1))]);
      cursor = 0;
    }
    for (int b = 0; b < cfg.batch_size; ++b) {
      const int idx = order[static_cast<size_t>(cursor + b)];
      bx(b) = train_x(idx);
      by(b) = train_y(idx);
    }
    cursor += cfg.batch_size;

    const auto lg = engine.loss_and_gradient(trained.weights, bx, by);
    trace.batch_nmse.push_back(lg.value);

    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, it + 1);
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, it + 1);
    m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * lg.grad;
    v = cfg.adam_beta2 * v + (1.0 - cfg.adam_beta2) * lg.grad.cwiseProduct(lg.grad);
    w.array() -= cfg.learning_rate * (m.array() / bc1) /
                 ((v.array() / bc2).sqrt() + cfg.adam_eps);
    if (trained.encoding == EncodingKind::Linear)
      w = w.array().min(1.0).max(0.0).matrix();
  }

  const auto [tr, te] = evaluate(trained, task, cfg.chain_tol);
  trace.final_train_nmse = tr;
  trace.final_test_nmse = te;
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(trained), std::move(trace)};
}

std::pair<double, double> evaluate(const WpnnModel& model, const RegressionTask& task,
                                   double chain_tol) {
  WpnnEngine::Options opt;
  opt.chain_tol = chain_tol;
  const WpnnEngine engine = WpnnEngine::for_model(model, opt);
  const VecR pred_train = engine.forward_batch(model.weights, task.gather_x(task.train_idx));
  const VecR pred_test = engine.forward_batch(model.weights, task.gather_x(task.test_idx));
  return {nmse(pred_train, task.gather_y(task.train_idx)),
          nmse(pred_test, task.gather_y(task.test_idx))};
}

GradientCheckReport gradient_check(const WpnnModel& model, const VecR& xs, const VecR& ys,
                                   int n_coords, uint64_t seed, double chain_tol) {
  WpnnEngine::Options opt;
  opt.chain_tol = chain_tol;
  const WpnnEngine engine = WpnnEngine::for_model(model, opt);
  const auto lg = engine.loss_and_gradient(model.weights, xs, ys);

  const MatR& w0 = model.weights.stored();
  const double h = model.encoding == EncodingKind::Phase ? 1e-6 : 1e-7;
  const double grad_scale = lg.grad.cwiseAbs().maxCoeff();
  const double floor = std::max(1e-3 * grad_scale, 1e-300);

  CounterRng rng(seed);
  GradientCheckReport rep;
  rep.coords = n_coords;
  double sum_rel = 0.0;
  for (int c = 0; c < n_coords; ++c) {
    int i = 0, j = 0;
    for (int tries = 0; tries < 1000; ++tries) {
      i = static_cast<int>(rng.uniform_index(static_cast<uint64_t>(w0.rows())));
      j = static_cast<int>(rng.uniform_index(static_cast<uint64_t>(w0.cols())));
      if (model.encoding == EncodingKind::Phase) break;
      // Stay clear of the clip kinks for the linear encoding.
      if (w0(i, j) > 2.0 * h && w0(i, j) < 1.0 - 2.0 * h) break;
    }
    WpnnModel probe = model;
    MatR wp = w0;
    wp(i, j) = w0(i, j) + h;
    probe.weights = WeightMatrix(model.mode, model.depth, wp);
    const double fp = nmse(engine.forward_batch(probe.weights, xs), ys);
    wp(i, j) = w0(i, j) - h;
    probe.weights = WeightMatrix(model.mode, model.depth, wp);
    const double fm = nmse(engine.forward_batch(probe.weights, xs), ys);
    const double fd = (fp - fm) / (2.0 * h);
    const double an = lg.grad(i, j);
    double rel = 0.0;
    const double mag = std::max({std::abs(an), std::abs(fd), floor});
    if (mag > 0.0) rel = std::abs(fd - an) / mag;
    rep.max_rel_err = std::max(rep.max_rel_err, rel);
    sum_rel += rel;
  }
  rep.mean_rel_err = n_coords > 0 ? sum_rel / n_coords : 0.0;
  return rep;
}

}  // namespace wpnn
