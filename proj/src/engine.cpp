#include "wpnn/engine.hpp"

#include <cmath>
#include <map>

namespace wpnn {

namespace {

using RowMatC = Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

int next_pow2(int n) {
  int q = 1;
  while (q < n) q <<= 1;
  return q;
}

/// Radix-2 DFT over the first `n` rows (a power of two), each column an
/// independent sequence. sign = -1 gives X_q = sum_j x_j e^{-j2pi qj/n},
/// sign = +1 the conjugate kernel.
void fft_rows(RowMatC& buf, int n, int sign) {
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) buf.row(i).swap(buf.row(j));
  }
  for (int len = 2; len <= n; len <<= 1) {
    const cxd wlen = std::polar(1.0, sign * 2.0 * M_PI / len);
    for (int i = 0; i < n; i += len) {
      cxd w(1.0, 0.0);
      for (int h = 0; h < len / 2; ++h) {
        auto even = buf.row(i + h);
        auto odd = buf.row(i + h + len / 2);
        for (Eigen::Index c = 0; c < buf.cols(); ++c) {
          const cxd t = w * odd(c);
          odd(c) = even(c) - t;
          even(c) += t;
        }
        w *= wlen;
      }
    }
  }
}

}  // namespace

WpnnEngine::WpnnEngine(std::shared_ptr<const WidebandScattering> cavity, EncodingKind encoding,
                       GateSetting gate, int depth, ArchitectureMode mode, Options options)
    : cavity_(std::move(cavity)),
      encoding_(encoding),
      gate_(gate),
      depth_(depth),
      mode_(mode),
      options_(options) {
  if (depth_ < 1) throw DomainError("depth must be at least 1");
  if (cavity_->n_t() != cavity_->n_r()) throw DimensionMismatch("layer cascade requires N_T == N_R");
  blocks_ = &cavity_->blocks();

  const int nf = cavity_->n_freq();
  if (gate_.is_infinite()) {
    support_ = {cavity_->operating_index()};
    gate_weights_ = VecC::Ones(1);
  } else {
    const GateOperator op(cavity_->grid_hz(), cavity_->operating_index(), gate_);
    support_.resize(static_cast<size_t>(nf));
    gate_weights_.resize(nf);
    for (int k = 0; k < nf; ++k) {
      support_[static_cast<size_t>(k)] = k;
      gate_weights_(k) = op.row()(k);
    }
  }

  // Depth one contracts the readout and input vectors into the frequency
  // blocks up front, so the chains run on vectors instead of blocks.
  const int nr = cavity_->n_r();
  const int nt = cavity_->n_t();
  const VecC u_full = VecC::Constant(nr, cxd(1.0 / nr, 0.0));
  const VecC a_full = VecC::Ones(nt);
  contracted_ = depth_ == 1;
  srt_.reserve(support_.size());
  srs_.reserve(support_.size());
  sst_.reserve(support_.size());
  for (size_t s = 0; s < support_.size(); ++s) {
    const size_t k = static_cast<size_t>(support_[s]);
    if (contracted_) {
      srt_.push_back(u_full.transpose() * blocks_->s_rt[k] * a_full);
      srs_.push_back(u_full.transpose() * blocks_->s_rs[k]);
      sst_.push_back(blocks_->s_st[k] * a_full);
    } else {
      srt_.push_back(blocks_->s_rt[k]);
      srs_.push_back(blocks_->s_rs[k]);
      sst_.push_back(blocks_->s_st[k]);
    }
  }
  n_out_ = contracted_ ? 1 : nr;
  n_in_ = contracted_ ? 1 : nt;
  gated_direct_ = MatC::Zero(n_out_, n_in_);
  for (size_t s = 0; s < support_.size(); ++s)
    gated_direct_ += gate_weights_(static_cast<Eigen::Index>(s)) * srt_[s];
  u_ = contracted_ ? VecC::Ones(1) : u_full;
  a1_ = contracted_ ? VecC::Ones(1) : a_full;
}

WpnnEngine WpnnEngine::for_model(const WpnnModel& model, Options options) {
  if (!model.layer_cavities.empty())
    throw ModeError("fast engine supports a single shared cavity only");
  return WpnnEngine(model.cavity, model.encoding, model.gate, model.depth, model.mode, options);
}

VecC WpnnEngine::layer_psi(const WeightMatrix& weights, int layer) const {
  const auto w = weights.layer(layer);
  VecC psi(w.size());
  if (encoding_ == EncodingKind::Phase) {
    for (Eigen::Index i = 0; i < w.size(); ++i) psi(i) = std::polar(1.0, 2.0 * M_PI * w(i));
  } else {
    for (Eigen::Index i = 0; i < w.size(); ++i) psi(i) = cxd(clip01(w(i)), 0.0);
  }
  return psi;
}

cxd WpnnEngine::sample_z(double x) const {
  if (!(x >= -kInputDomainSlack && x <= 1.0 + kInputDomainSlack))
    throw DomainError("input x must lie in [0, 1]");
  return encoding_ == EncodingKind::Phase ? std::polar(1.0, 2.0 * M_PI * x) : cxd(x, 0.0);
}

WpnnEngine::LayerPolynomial WpnnEngine::build_polynomial(const VecC& psi) const {
  const int nr = n_out_;
  const int nt = n_in_;
  const int ns = cavity_->n_s();
  LayerPolynomial poly;
  poly.coeffs.push_back(gated_direct_);
  poly.chain_len.resize(support_.size(), 0);

  MatC u_cur(ns, nt), u_scaled(ns, nt), u_next(ns, nt), c(nr, nt);
  for (size_t s = 0; s < support_.size(); ++s) {
    const int k = support_[s];
    const cxd wk = gate_weights_(static_cast<Eigen::Index>(s));
    const MatC& srs = srs_[s];
    const MatC& sss = blocks_->s_ss[static_cast<size_t>(k)];
    u_cur = sst_[s];
    const double stop = options_.chain_tol * u_cur.norm();
    int j = 0;
    for (;; ++j) {
      u_scaled.noalias() = psi.asDiagonal() * u_cur;
      c.noalias() = srs * u_scaled;
      if (static_cast<size_t>(j + 2) > poly.coeffs.size())
        poly.coeffs.push_back(MatC::Zero(nr, nt));
      poly.coeffs[static_cast<size_t>(j + 1)] += wk * c;
      u_next.noalias() = sss * u_scaled;
      if (u_next.norm() <= stop) break;
      if (j + 1 >= options_.max_chain)
        throw SingularResolvent("coupling series did not converge within the chain budget");
      u_cur.swap(u_next);
    }
    poly.chain_len[s] = j;  // emitted orders 0..j
    poly.max_len = std::max(poly.max_len, j);
  }
  return poly;
}

MatC WpnnEngine::horner(const std::vector<MatC>& coeffs, cxd z) {
  MatC h = coeffs.back();
  for (int p = static_cast<int>(coeffs.size()) - 2; p >= 0; --p) {
    h *= z;
    h += coeffs[static_cast<size_t>(p)];
  }
  return h;
}

VecR WpnnEngine::forward_batch(const WeightMatrix& weights, const VecR& xs) const {
  const int d_count = mode_ == ArchitectureMode::SharedWeights ? 1 : depth_;
  std::vector<LayerPolynomial> polys;
  polys.reserve(static_cast<size_t>(d_count));
  for (int d = 0; d < d_count; ++d) polys.push_back(build_polynomial(layer_psi(weights, d)));

  VecR out(xs.size());
  for (Eigen::Index s = 0; s < xs.size(); ++s) {
    const cxd z = sample_z(xs(s));
    VecC a = a1_;
    for (int ell = 0; ell < depth_; ++ell) {
      const LayerPolynomial& poly = polys[static_cast<size_t>(d_count == 1 ? 0 : ell)];
      a = (horner(poly.coeffs, z) * a).eval();
    }
    out(s) = a.real().mean();
  }
  return out;
}

double WpnnEngine::forward_one(const WeightMatrix& weights, double x) const {
  VecR xs(1);
  xs(0) = x;
  return forward_batch(weights, xs)(0);
}

WpnnEngine::LossGrad WpnnEngine::loss_and_gradient(const WeightMatrix& weights, const VecR& xs,
                                                   const VecR& ys) const {
  if (xs.size() != ys.size()) throw DimensionMismatch("input/target length mismatch");
  if (xs.size() == 0) throw DimensionMismatch("empty batch");
  const int nr = n_out_;
  const int nt = n_in_;
  const int ns = cavity_->n_s();
  const int batch = static_cast<int>(xs.size());
  const int d_count = mode_ == ArchitectureMode::SharedWeights ? 1 : depth_;

  std::vector<VecC> psi(static_cast<size_t>(d_count));
  std::vector<LayerPolynomial> polys;
  polys.reserve(static_cast<size_t>(d_count));
  for (int d = 0; d < d_count; ++d) {
    psi[static_cast<size_t>(d)] = layer_psi(weights, d);
    polys.push_back(build_polynomial(psi[static_cast<size_t>(d)]));
  }

  // Forward pass, keeping per-sample layer operators and wavefronts.
  const double denom = ys.squaredNorm();
  if (denom == 0.0) throw DegenerateTarget("batch target sum of squares is zero");
  std::vector<std::vector<MatC>> h_s(static_cast<size_t>(batch));
  std::vector<std::vector<VecC>> a_s(static_cast<size_t>(batch));
  VecC zs(batch);
  VecR coef(batch);
  double sq_err = 0.0;
  for (int s = 0; s < batch; ++s) {
    const cxd z = sample_z(xs(s));
    zs(s) = z;
    auto& hs = h_s[static_cast<size_t>(s)];
    auto& as = a_s[static_cast<size_t>(s)];
    hs.reserve(static_cast<size_t>(depth_));
    as.reserve(static_cast<size_t>(depth_) + 1);
    VecC a = a1_;
    as.push_back(a);
    for (int ell = 0; ell < depth_; ++ell) {
      const LayerPolynomial& poly = polys[static_cast<size_t>(d_count == 1 ? 0 : ell)];
      hs.push_back(horner(poly.coeffs, z));
      a = (hs.back() * a).eval();
      as.push_back(a);
    }
    const double yhat = a.real().mean();
    if (!std::isfinite(yhat)) throw NonFiniteGradient("forward readout is not finite");
    const double r = yhat - ys(s);
    sq_err += r * r;
    coef(s) = 2.0 * r / denom;
  }

  // Batch moment matrices per distinct weight column:
  //   Zm[d][p] = sum over samples and layers using column d of
  //              coef_s z_s^{p+1} ubar^{(l)}_s a^{(l)T}_s.
  std::vector<std::vector<MatC>> zm(static_cast<size_t>(d_count));
  for (int d = 0; d < d_count; ++d) {
    const int p2 = 2 * polys[static_cast<size_t>(d)].max_len + 1;
    zm[static_cast<size_t>(d)].assign(static_cast<size_t>(p2) + 1, MatC::Zero(nr, nt));
  }
  MatC outer(nr, nt);
  for (int s = 0; s < batch; ++s) {
    const cxd z = zs(s);
    VecC ubar = u_;
    for (int ell = depth_ - 1; ell >= 0; --ell) {
      const int d = d_count == 1 ? 0 : ell;
      outer.noalias() = ubar * a_s[static_cast<size_t>(s)][static_cast<size_t>(ell)].transpose();
      outer *= coef(s);
      auto& zmd = zm[static_cast<size_t>(d)];
      cxd zp = z;  // z^{p+1} at p = 0
      for (size_t p = 0; p < zmd.size(); ++p) {
        zmd[p] += zp * outer;
        zp *= z;
      }
      if (ell > 0)
        ubar = (h_s[static_cast<size_t>(s)][static_cast<size_t>(ell)].transpose() * ubar).eval();
    }
  }

  // Gradient assembly: rebuild the chains per support frequency and contract
  // them with the moment matrices on a root-of-unity grid sized per frequency
  // (exact discrete convolution; moments beyond the grid length are excluded
  // rather than aliased).
  MatR grad = MatR::Zero(ns, weights.stored_cols());
  const int rcols = nr * ns;
  const int ucols = ns * nt;
  for (int d = 0; d < d_count; ++d) {
    const LayerPolynomial& poly = polys[static_cast<size_t>(d)];
    const auto& zmd = zm[static_cast<size_t>(d)];
    const int p2 = static_cast<int>(zmd.size()) - 1;
    const int q_max = next_pow2(p2 + 2);

    // Moment DFTs for every power-of-two grid size in use.
    std::map<int, RowMatC> zhat;
    auto zhat_for = [&](int q_len) -> const RowMatC& {
      auto it = zhat.find(q_len);
      if (it != zhat.end()) return it->second;
      RowMatC buf = RowMatC::Zero(q_len, nr * nt);
      const int p_top = std::min(p2, q_len - 1);
      for (int p = 0; p <= p_top; ++p)
        for (int r = 0; r < nr; ++r)
          for (int t = 0; t < nt; ++t) buf(p, r * nt + t) = zmd[static_cast<size_t>(p)](r, t);
      fft_rows(buf, q_len, -1);
      return zhat.emplace(q_len, std::move(buf)).first->second;
    };

    const VecC& psi_d = psi[static_cast<size_t>(d)];
    RowMatC chain(q_max, rcols + ucols);
    MatC u_cur(ns, nt), u_scaled(ns, nt), r_cur(nr, ns), r_scaled(nr, ns);
    VecC lambda = VecC::Zero(ns);
    VecC acc_k(ns);
    MatC zr(nt, ns);
    for (size_t s = 0; s < support_.size(); ++s) {
      const int k = support_[s];
      const cxd wk = gate_weights_(static_cast<Eigen::Index>(s));
      const MatC& srs = srs_[s];
      const MatC& sss = blocks_->s_ss[static_cast<size_t>(k)];
      const int jmax = poly.chain_len[s];
      const int q_len = next_pow2(2 * jmax + 3);
      chain.topRows(q_len).setZero();
      u_cur = sst_[s];
      r_cur = srs;
      for (int j = 0; j <= jmax; ++j) {
        for (int r = 0; r < nr; ++r)
          for (int i = 0; i < ns; ++i) chain(j, r * ns + i) = r_cur(r, i);
        for (int i = 0; i < ns; ++i)
          for (int t = 0; t < nt; ++t) chain(j, rcols + i * nt + t) = u_cur(i, t);
        if (j == jmax) break;
        u_scaled.noalias() = psi_d.asDiagonal() * u_cur;
        u_cur.noalias() = sss * u_scaled;
        r_scaled.noalias() = r_cur * psi_d.asDiagonal();
        r_cur.noalias() = r_scaled * sss;
      }
      fft_rows(chain, q_len, +1);

      const RowMatC& zq_all = zhat_for(q_len);
      acc_k.setZero();
      for (int q = 0; q < q_len; ++q) {
        Eigen::Map<const RowMatC> rq(chain.row(q).data(), nr, ns);
        Eigen::Map<const RowMatC> uq(chain.row(q).data() + rcols, ns, nt);
        Eigen::Map<const RowMatC> zq(zq_all.row(q).data(), nr, nt);
        zr.noalias() = zq.transpose() * rq;  // (t, i) = sum_r zhat(r,t) Rhat(r,i)
        acc_k.array() += (zr.transpose().array() * uq.array()).rowwise().sum();
      }
      lambda += (wk / static_cast<double>(q_len)) * acc_k;
    }

    // Finish through the encoding derivative.
    VecR g(ns);
    if (encoding_ == EncodingKind::Phase) {
      g = -2.0 * M_PI * (psi_d.array() * lambda.array()).imag();
    } else {
      const auto wcol = weights.layer(d);
      for (int i = 0; i < ns; ++i) g(i) = clip_interior(wcol(i)) ? lambda(i).real() : 0.0;
    }
    grad.col(mode_ == ArchitectureMode::SharedWeights ? 0 : d) = g;
  }

  if (!grad.allFinite()) throw NonFiniteGradient("gradient contains non-finite entries");
  LossGrad out;
  out.value = sq_err / denom;
  out.grad = std::move(grad);
  return out;
}

}  // namespace wpnn
