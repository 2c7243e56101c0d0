#include "wpnn/scattering.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>

namespace wpnn {

ScatteringMatrix::ScatteringMatrix(MatC entries, PortPartition partition, double frequency_hz)
    : entries_(std::move(entries)), partition_(std::move(partition)), frequency_hz_(frequency_hz) {
  if (entries_.rows() != entries_.cols())
    throw DimensionMismatch("scattering matrix must be square");
  if (entries_.rows() != partition_.n_total())
    throw DimensionMismatch("scattering matrix size does not match port partition");
}

MatC ScatteringMatrix::block(const std::vector<int>& rows, const std::vector<int>& cols) const {
  MatC out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = entries_(rows[i], cols[j]);
  return out;
}

ScatteringMatrix ScatteringMatrix::with_zero_pm_coupling() const {
  MatC e = entries_;
  for (int i : partition_.pm())
    for (int j : partition_.pm()) e(i, j) = cxd(0.0, 0.0);
  return ScatteringMatrix(std::move(e), partition_, frequency_hz_);
}

LoadVector::LoadVector(VecC reflections) : reflections_(std::move(reflections)) {
  for (Eigen::Index i = 0; i < reflections_.size(); ++i) {
    if (std::abs(reflections_(i)) > 1.0 + kPassivityTol)
      throw DomainError("load reflection magnitude exceeds unity");
  }
}

PassivityReport validate_passivity(const ScatteringMatrix& s) {
  PassivityReport rep;
  rep.frequency_hz = s.frequency_hz();
  if (s.entries().size() == 0) {
    rep.sigma_max = 0.0;
    rep.passive = true;
    return rep;
  }
  Eigen::BDCSVD<MatC> svd(s.entries());
  rep.sigma_max = svd.singularValues()(0);
  rep.passive = rep.sigma_max <= 1.0 + kPassivityTol;
  return rep;
}

double spectral_radius(const LoadVector& loads, const MatC& s_ss) {
  if (s_ss.rows() != s_ss.cols()) throw DimensionMismatch("s_ss block must be square");
  if (loads.size() != s_ss.rows())
    throw DimensionMismatch("load vector length does not match s_ss block");
  if (s_ss.rows() == 0) return 0.0;
  MatC m = loads.reflections().asDiagonal() * s_ss;
  Eigen::ComplexEigenSolver<MatC> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw EigenFailure("eigensolver did not converge on the load-coupling product");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

ResolventGuard check_resolvent_margin(const LoadVector& loads, const MatC& s_ss) {
  ResolventGuard g;
  const double max_load = loads.size() ? loads.reflections().cwiseAbs().maxCoeff() : 0.0;
  // Geometric mean of the 1-norm and inf-norm bounds the largest singular
  // value, which in turn bounds the spectral radius.
  double n1 = 0.0, ninf = 0.0;
  for (Eigen::Index j = 0; j < s_ss.cols(); ++j) n1 = std::max(n1, s_ss.col(j).cwiseAbs().sum());
  for (Eigen::Index i = 0; i < s_ss.rows(); ++i) ninf = std::max(ninf, s_ss.row(i).cwiseAbs().sum());
  g.radius_bound = max_load * std::sqrt(n1 * ninf);
  if (g.radius_bound >= 1.0 - kNearCriticalBand) {
    g.radius = spectral_radius(loads, s_ss);
    g.near_critical = g.radius < 1.0 - kResolventMargin && 1.0 - g.radius < kNearCriticalBand;
  }
  return g;
}

namespace {

struct Blocks {
  MatC s_rt, s_rs, s_st, s_ss;
};

Blocks split(const ScatteringMatrix& s) { return {s.s_rt(), s.s_rs(), s.s_st(), s.s_ss()}; }

void require_load_size(const ScatteringMatrix& s, const LoadVector& loads) {
  if (loads.size() != s.n_s())
    throw DimensionMismatch("load vector length does not match pm port count");
}

void guard_radius(const LoadVector& loads, const MatC& s_ss) {
  const ResolventGuard g = check_resolvent_margin(loads, s_ss);
  if (g.radius >= 0.0 && g.radius >= 1.0 - kResolventMargin) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "rho(Phi*S_SS) = %.15g", g.radius);
    throw SingularResolvent(std::string("spectral radius reaches unity: ") + buf);
  }
}

}  // namespace

ChannelMatrix end_to_end_channel(const ScatteringMatrix& s, const LoadVector& loads) {
  require_load_size(s, loads);
  const Blocks b = split(s);
  guard_radius(loads, b.s_ss);

  const auto phi = loads.reflections().asDiagonal();
  MatC a = MatC::Identity(s.n_s(), s.n_s()) - phi * b.s_ss;
  Eigen::PartialPivLU<MatC> lu(a);
  // Partial-pivot LU does not expose rank; detect near-singular factors from
  // the spread of the U diagonal.
  const VecR udiag = lu.matrixLU().diagonal().cwiseAbs();
  if (udiag.size() > 0) {
    const double dmax = udiag.maxCoeff();
    if (dmax == 0.0 || udiag.minCoeff() < 1e-14 * dmax)
      throw SingularResolvent("rank-deficient resolvent factor");
  }
  MatC rhs = phi * b.s_st;
  MatC x = lu.solve(rhs);
  ChannelMatrix h;
  h.frequency_hz = s.frequency_hz();
  h.entries = b.s_rt + b.s_rs * x;
  return h;
}

ChannelMatrix neumann_channel(const ScatteringMatrix& s, const LoadVector& loads, int order) {
  if (order < 0) throw DomainError("series order must be non-negative");
  require_load_size(s, loads);
  const Blocks b = split(s);
  guard_radius(loads, b.s_ss);

  const auto phi = loads.reflections().asDiagonal();
  MatC term = phi * b.s_st;  // k = 0 contribution (Phi S_SS)^0 Phi S_ST
  MatC acc = term;
  const MatC step = phi * b.s_ss;
  for (int k = 1; k <= order; ++k) {
    term = step * term;
    acc += term;
  }
  ChannelMatrix h;
  h.frequency_hz = s.frequency_hz();
  h.entries = b.s_rt + b.s_rs * acc;
  return h;
}

}  // namespace wpnn
