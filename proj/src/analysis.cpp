#include "wpnn/analysis.hpp"

#include <Eigen/QR>
#include <cmath>

#include "wpnn/rng.hpp"

namespace wpnn {

double SeriesCoefficients::reconstruct(double x) const {
  if (kind == Kind::FourierComplex) {
    cxd acc(0.0, 0.0);
    for (Eigen::Index k = 0; k < coeffs.size(); ++k)
      acc += coeffs(k) * std::polar(1.0, 2.0 * M_PI * k * x);
    return acc.real();
  }
  double acc = 0.0;
  double xp = 1.0;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    acc += coeffs(k).real() * xp;
    xp *= x;
  }
  return acc;
}

namespace {

struct ReadoutBlocks {
  MatC s_rt, s_rs, s_st, s_ss;
  VecC u;   // (1/N_R) ones
  VecC a1;  // ones
};

ReadoutBlocks readout_blocks(const WpnnModel& model) {
  const ScatteringMatrix s = model.cavity->at_operating();
  ReadoutBlocks b{s.s_rt(), s.s_rs(), s.s_st(), s.s_ss(),
                  VecC::Constant(s.n_r(), cxd(1.0 / s.n_r(), 0.0)), VecC::Ones(s.n_t())};
  return b;
}

void require_single_layer_ungated(const WpnnModel& model, EncodingKind kind, const char* what) {
  if (model.encoding != kind)
    throw ModeError(std::string(what) + " requires the " +
                    (kind == EncodingKind::Phase ? std::string("phase") : std::string("linear")) +
                    " encoding");
  if (model.depth != 1) throw ModeError(std::string(what) + " requires a single layer");
  if (!model.gate.is_infinite()) throw ModeError(std::string(what) + " requires no time gating");
}

VecC diag_factors(const WpnnModel& model, int layer) {
  const auto w = model.weights.layer(layer);
  VecC psi(w.size());
  if (model.encoding == EncodingKind::Phase) {
    for (Eigen::Index i = 0; i < w.size(); ++i) psi(i) = std::polar(1.0, 2.0 * M_PI * w(i));
  } else {
    for (Eigen::Index i = 0; i < w.size(); ++i) psi(i) = cxd(clip01(w(i)), 0.0);
  }
  return psi;
}

/// Single-layer chain contraction shared by the Fourier and power extractors:
/// order 0 is the direct readout, order k >= 1 contracts
/// S_RS (Psi S_SS)^{k-1} Psi S_ST against the readout vectors.
SeriesCoefficients single_layer_series(const WpnnModel& model, int max_order,
                                       SeriesCoefficients::Kind kind) {
  const ReadoutBlocks b = readout_blocks(model);
  const VecC psi = diag_factors(model, 0);

  std::vector<cxd> coeffs;
  coeffs.push_back(b.u.transpose() * b.s_rt * b.a1);
  const VecC rsu = b.s_rs.transpose() * b.u;
  VecC chain = b.s_st * b.a1;
  double running_max = std::abs(coeffs[0]);
  bool converged = true;
  const int hard_cap = max_order >= 0 ? max_order : 100000;
  for (int k = 1; k <= hard_cap; ++k) {
    const VecC scaled = psi.asDiagonal() * chain;
    const cxd alpha = rsu.transpose() * scaled;
    coeffs.push_back(alpha);
    running_max = std::max(running_max, std::abs(alpha));
    chain = b.s_ss * scaled;
    if (max_order < 0) {
      const double next_bound = rsu.norm() * chain.norm();
      if (next_bound < kSeriesTailCutoff * running_max) break;
      if (k == hard_cap) converged = false;
    }
  }

  SeriesCoefficients out;
  out.kind = kind;
  out.coeffs = Eigen::Map<const VecC>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
  if (kind == SeriesCoefficients::Kind::PowerReal)
    for (Eigen::Index k = 0; k < out.coeffs.size(); ++k)
      out.coeffs(k) = cxd(out.coeffs(k).real(), 0.0);
  out.truncation = static_cast<int>(coeffs.size()) - 1;
  out.converged = converged;
  return out;
}

/// Layer-product expansion with the pm-pm block zeroed: expand the ordered
/// product of (S_RT + z B^(l)) by dynamic programming over layers, then apply
/// the readout contraction to each coefficient matrix.
SeriesCoefficients multilayer_nomc_series(const WpnnModel& model, SeriesCoefficients::Kind kind) {
  const ReadoutBlocks b = readout_blocks(model);
  const int depth = model.depth;

  std::vector<MatC> coeff_mats;  // after l layers: orders 0..l
  coeff_mats.reserve(static_cast<size_t>(depth) + 1);
  for (int ell = 0; ell < depth; ++ell) {
    const VecC psi = diag_factors(model, ell);
    MatC layer_b = b.s_rs * psi.asDiagonal() * b.s_st;
    if (ell == 0) {
      coeff_mats.push_back(b.s_rt);
      coeff_mats.push_back(std::move(layer_b));
      continue;
    }
    std::vector<MatC> next(coeff_mats.size() + 1);
    for (size_t k = 0; k < next.size(); ++k) {
      MatC acc = MatC::Zero(b.s_rt.rows(), b.s_rt.cols());
      if (k < coeff_mats.size()) acc.noalias() += b.s_rt * coeff_mats[k];
      if (k >= 1) acc.noalias() += layer_b * coeff_mats[k - 1];
      next[k] = std::move(acc);
    }
    coeff_mats = std::move(next);
  }

  SeriesCoefficients out;
  out.kind = kind;
  out.coeffs.resize(static_cast<Eigen::Index>(coeff_mats.size()));
  for (size_t k = 0; k < coeff_mats.size(); ++k) {
    const cxd c = b.u.transpose() * coeff_mats[k] * b.a1;
    out.coeffs(static_cast<Eigen::Index>(k)) =
        kind == SeriesCoefficients::Kind::PowerReal ? cxd(c.real(), 0.0) : c;
  }
  out.truncation = depth;
  return out;
}

}  // namespace

SeriesCoefficients fourier_single_layer(const WpnnModel& model, int max_order) {
  require_single_layer_ungated(model, EncodingKind::Phase, "fourier_single_layer");
  return single_layer_series(model, max_order, SeriesCoefficients::Kind::FourierComplex);
}

SeriesCoefficients fourier_multilayer_nomc(const WpnnModel& model) {
  if (model.encoding != EncodingKind::Phase)
    throw ModeError("fourier_multilayer_nomc requires the phase encoding");
  return multilayer_nomc_series(model, SeriesCoefficients::Kind::FourierComplex);
}

SeriesCoefficients power_single_layer(const WpnnModel& model, int max_order) {
  require_single_layer_ungated(model, EncodingKind::Linear, "power_single_layer");
  return single_layer_series(model, max_order, SeriesCoefficients::Kind::PowerReal);
}

SeriesCoefficients poly_multilayer_nomc(const WpnnModel& model) {
  if (model.encoding != EncodingKind::Linear)
    throw ModeError("poly_multilayer_nomc requires the linear encoding");
  return multilayer_nomc_series(model, SeriesCoefficients::Kind::PowerReal);
}

double nonlinearity_score(const WpnnModel& model, int samples, uint64_t seed) {
  if (samples < 8) throw DomainError("nonlinearity score needs at least 8 samples");
  CounterRng rng(seed);
  const int n_s = model.cavity->n_s();
  const int n_feat = 2 * n_s + 1;
  MatR features(samples, n_feat);
  VecR readouts(samples);
  for (int q = 0; q < samples; ++q) {
    const double x = rng.uniform();
    const LoadVector r = encode(model.encoding, x, model.weights.layer(0));
    features.row(q).segment(0, n_s) = r.reflections().real();
    features.row(q).segment(n_s, n_s) = r.reflections().imag();
    features(q, n_feat - 1) = 1.0;
    readouts(q) = forward(model, x).readout;
  }
  const VecR fit = features * features.colPivHouseholderQr().solve(readouts);
  const double centered = (readouts.array() - readouts.mean()).matrix().norm();
  if (centered == 0.0) return 0.0;
  return (readouts - fit).norm() / centered;
}

}  // namespace wpnn
