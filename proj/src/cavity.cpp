#include "wpnn/cavity.hpp"

#include <Eigen/LU>
#include <cmath>

#include "wpnn/rng.hpp"
#include "wpnn/timegate.hpp"

namespace wpnn {

namespace {

// Log-spread of per-mode coupling widths, in decades on either side of the
// dwell-time target. Wide modes produce the short-delay response that survives
// tight time gates; narrow modes carry the reverberant tail.
constexpr double kWidthSpreadDecades = 1.0;

/// Choose static antenna feed-phase trims that null the all-ones readout
/// contraction of the direct antenna block, ungated and under the tightest
/// standard gates, for one to three cascaded layers. The readout sees a
/// weight-independent constant through those contractions; physical systems
/// trim it out with line-length adjustments, and leaving it in place parks a
/// constant floor under every regression fit.
VecR optimize_direct_trims(const std::vector<MatC>& gated_direct, int n_t, int n_r,
                           uint64_t seed) {
  const VecC u = VecC::Constant(n_r, cxd(1.0 / n_r, 0.0));
  const VecC a = VecC::Ones(n_t);
  const int dof = n_r + n_t;
  auto objective = [&](const VecR& theta) {
    VecC er(n_r), et(n_t);
    for (int i = 0; i < n_r; ++i) er(i) = std::polar(1.0, theta(i));
    for (int i = 0; i < n_t; ++i) et(i) = std::polar(1.0, theta(n_r + i));
    double total = 0.0;
    for (const MatC& gd : gated_direct) {
      const MatC m = er.asDiagonal() * gd * et.asDiagonal();
      MatC p = m;
      for (int depth = 1; depth <= 3; ++depth) {
        if (depth > 1) p = (m * p).eval();
        const double wgt = depth <= 2 ? 1.0 : 0.2;
        const MatC contraction = u.transpose() * p * a;
        total += wgt * std::norm(contraction(0, 0));
        if (n_t != n_r) break;  // powers undefined for rectangular blocks
      }
    }
    return total;
  };

  CounterRng rng(seed ^ 0x7431D5ULL);
  VecR best = VecR::Zero(dof);
  double fbest = objective(best);
  for (int restart = 0; restart < 12; ++restart) {
    VecR t(dof);
    for (int i = 0; i < dof; ++i) t(i) = restart == 0 ? 0.0 : rng.uniform(0.0, 2.0 * M_PI);
    double f = objective(t);
    double step = 0.7;
    for (int it = 0; it < 4000; ++it) {
      const int i = static_cast<int>(rng.uniform_index(static_cast<uint64_t>(dof)));
      VecR t2 = t;
      t2(i) += (rng.uniform() - 0.5) * 2.0 * step;
      const double f2 = objective(t2);
      if (f2 < f) {
        t = t2;
        f = f2;
      }
      if (it % 500 == 499) step *= 0.6;
    }
    if (f < fbest) {
      fbest = f;
      best = t;
    }
  }
  return best;
}

}  // namespace

std::shared_ptr<WidebandScattering> synthesize_cavity(const CavitySpec& spec) {
  const int n = spec.n_t + spec.n_r + spec.n_s;
  const int m = spec.modes();
  if (spec.n_t < 1 || spec.n_r < 1 || spec.n_s < 1)
    throw DimensionMismatch("cavity needs at least one port of each class");
  if (m < n) throw DomainError("mode count must be at least the port count");
  if (spec.absorption_rate <= 0.0) throw DomainError("absorption rate must be positive");
  if (spec.mean_dwell_time <= 0.0) throw DomainError("mean dwell time must be positive");
  if (spec.coupling_scale < 0.0) throw DomainError("coupling scale must be non-negative");
  if (spec.ant_feed_loss <= 0.0 || spec.ant_feed_loss > 1.0 || spec.pm_feed_loss <= 0.0 ||
      spec.pm_feed_loss > 1.0)
    throw DomainError("feed loss factors must lie in (0, 1]");
  if (spec.ant_feed_delay < 0.0 || spec.pm_feed_delay < 0.0)
    throw DomainError("feed delays must be non-negative");
  if (spec.n_freq < 2) throw GridError("frequency grid needs at least two samples");
  if (spec.f_max_hz <= spec.f_min_hz) throw GridError("empty frequency band");

  CounterRng rng(spec.rng_seed);
  const double band = spec.f_max_hz - spec.f_min_hz;
  const double guard = 0.1 * band;

  // Mode frequencies across the guarded band.
  VecR mode_freq(m);
  for (int i = 0; i < m; ++i)
    mode_freq(i) = rng.uniform(spec.f_min_hz - guard, spec.f_max_hz + guard);

  // Per-mode width factors, log-uniform with unit mean so the ensemble dwell
  // time stays at the requested target.
  const double a = kWidthSpreadDecades;
  const double log_mean = (std::pow(10.0, a) - std::pow(10.0, -a)) / (2.0 * a * std::log(10.0));
  VecR width(m);
  for (int i = 0; i < m; ++i) width(i) = std::pow(10.0, rng.uniform(-a, a)) / log_mean;

  // Coupling matrix: row i scaled so the modal decay width from coupling alone
  // is width(i) / (pi * mean_dwell_time) at unit scale.
  const double gamma_target = 1.0 / (M_PI * spec.mean_dwell_time);
  MatR v(m, n);
  for (int i = 0; i < m; ++i) {
    const double sigma = spec.coupling_scale * std::sqrt(width(i) * gamma_target / n);
    for (int j = 0; j < n; ++j) v(i, j) = sigma * rng.normal();
  }

  VecR grid(spec.n_freq);
  const double df = band / (spec.n_freq - 1);
  for (int k = 0; k < spec.n_freq; ++k) grid(k) = spec.f_min_hz + k * df;
  int op_index = 0;
  double best = 1e300;
  for (int k = 0; k < spec.n_freq; ++k) {
    const double d = std::abs(grid(k) - spec.f_op_hz);
    if (d < best) {
      best = d;
      op_index = k;
    }
  }

  // Feed factors per port class.
  VecR feed_delay(n), feed_loss(n);
  for (int p = 0; p < n; ++p) {
    const bool antenna = p < spec.n_t + spec.n_r;
    feed_delay(p) = antenna ? spec.ant_feed_delay : spec.pm_feed_delay;
    feed_loss(p) = antenna ? spec.ant_feed_loss : spec.pm_feed_loss;
  }

  // Port-space resolvent: with Delta(f) = diag(f - f_m + (j/2) Gamma_abs),
  //   S_inner(f) = I - j [K - K (-2j I + K)^{-1} K],  K = V^T Delta^{-1} V.
  const MatC vc = v.cast<cxd>();
  std::vector<MatC> mats;
  mats.reserve(spec.n_freq);
  MatC scaled(m, n), k_mat(n, n);
  VecC dinv(m);
  for (int k = 0; k < spec.n_freq; ++k) {
    for (int i = 0; i < m; ++i)
      dinv(i) = 1.0 / cxd(grid(k) - mode_freq(i), 0.5 * spec.absorption_rate);
    scaled.noalias() = dinv.asDiagonal() * vc;
    k_mat.noalias() = vc.transpose() * scaled;
    MatC core = -2.0 * cxd(0.0, 1.0) * MatC::Identity(n, n) + k_mat;
    Eigen::PartialPivLU<MatC> lu(core);
    MatC s = MatC::Identity(n, n);
    s.noalias() -= cxd(0.0, 1.0) * (k_mat - k_mat * lu.solve(k_mat));
    // Dress with the port feeds.
    VecC d(n);
    for (int p = 0; p < n; ++p)
      d(p) = feed_loss(p) * std::polar(1.0, 2.0 * M_PI * grid(k) * feed_delay(p));
    s = d.asDiagonal() * s * d.asDiagonal();
    mats.push_back(std::move(s));
  }

  // Null the direct readout contraction with static antenna phase trims,
  // evaluated against the ungated selector and the tightest standard gates.
  if (spec.direct_trim && spec.coupling_scale > 0.0) {
    std::vector<GateSetting> trim_gates = {GateSetting::infinite(),
                                           GateSetting::truncate(0.02e-9),
                                           GateSetting::truncate(0.05e-9),
                                           GateSetting::truncate(0.1e-9)};
    std::vector<MatC> gated_direct;
    for (const GateSetting& gate : trim_gates) {
      const GateOperator op(grid, op_index, gate);
      MatC acc = MatC::Zero(spec.n_r, spec.n_t);
      for (int k = 0; k < spec.n_freq; ++k) {
        acc += op.row()(k) *
               mats[static_cast<size_t>(k)].block(spec.n_t, 0, spec.n_r, spec.n_t);
      }
      gated_direct.push_back(std::move(acc));
    }
    const VecR theta = optimize_direct_trims(gated_direct, spec.n_t, spec.n_r, spec.rng_seed);
    VecC trim(n);
    for (int p = 0; p < n; ++p) {
      if (p < spec.n_t)
        trim(p) = std::polar(1.0, theta(spec.n_r + p));  // tx
      else if (p < spec.n_t + spec.n_r)
        trim(p) = std::polar(1.0, theta(p - spec.n_t));  // rx
      else
        trim(p) = cxd(1.0, 0.0);
    }
    for (MatC& s : mats) s = trim.asDiagonal() * s * trim.asDiagonal();
  }

  auto ws = std::make_shared<WidebandScattering>(std::move(grid), std::move(mats),
                                                 PortPartition::contiguous(spec.n_t, spec.n_r, spec.n_s),
                                                 op_index);
  ws->require_passive();
  return ws;
}

double coupling_richness(const WidebandScattering& ws) {
  MatC s_ss = ws.at_operating().s_ss();
  s_ss.diagonal().setZero();
  return s_ss.norm() / std::sqrt(static_cast<double>(ws.n_s()));
}

}  // namespace wpnn
