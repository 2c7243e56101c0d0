#include "wpnn/timegate.hpp"

#include <Eigen/LU>
#include <cmath>

namespace wpnn {

GateSetting GateSetting::truncate(double tau_seconds) {
  if (!(tau_seconds > 0.0)) throw DomainError("truncation time must be positive");
  return GateSetting(false, tau_seconds);
}

std::string GateSetting::to_string() const {
  if (infinite_) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", tau_);
  return buf;
}

GateSetting GateSetting::from_string(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF") return infinite();
  size_t pos = 0;
  const double tau = std::stod(text, &pos);
  if (pos != text.size()) throw DomainError("cannot parse gate setting '" + text + "'");
  return truncate(tau);
}

const std::vector<double>& standard_gate_sweep_s() {
  static const std::vector<double> sweep = {0.02e-9, 0.05e-9, 0.1e-9, 0.3e-9, 0.8e-9, 2.0e-9};
  return sweep;
}

VecC spectrum_to_delay(const VecC& spectrum) {
  const int n = static_cast<int>(spectrum.size());
  VecC h = VecC::Zero(n);
  const double w0 = -2.0 * M_PI / n;
  for (int m = 0; m < n; ++m) {
    cxd acc(0.0, 0.0);
    for (int k = 0; k < n; ++k) acc += spectrum(k) * std::polar(1.0, w0 * k * m);
    h(m) = acc / static_cast<double>(n);
  }
  return h;
}

VecC delay_to_spectrum(const VecC& delay) {
  const int n = static_cast<int>(delay.size());
  VecC s = VecC::Zero(n);
  const double w0 = 2.0 * M_PI / n;
  for (int k = 0; k < n; ++k) {
    cxd acc(0.0, 0.0);
    for (int m = 0; m < n; ++m) acc += delay(m) * std::polar(1.0, w0 * k * m);
    s(k) = acc;
  }
  return s;
}

GateOperator::GateOperator(const VecR& grid_hz, int operating_index, GateSetting setting)
    : setting_(setting), n_(static_cast<int>(grid_hz.size())), op_(operating_index) {
  if (n_ < 2) throw GridError("gate needs at least two frequency samples");
  if (op_ < 0 || op_ >= n_) throw GridError("operating index out of range");
  const double band = grid_hz(n_ - 1) - grid_hz(0);
  if (band <= 0.0) throw GridError("empty band");
  if (setting_.is_infinite()) {
    keep_ = n_;
    row_ = VecC::Zero(n_);
    row_(op_) = cxd(1.0, 0.0);
    return;
  }
  // Delay sample n sits at t_n = n / B; truncation is inclusive at tau.
  const double bins = setting_.tau_seconds() * band;
  keep_ = static_cast<int>(std::floor(bins * (1.0 + 1e-12))) + 1;
  if (keep_ >= n_) {
    keep_ = n_;
    // Full-range gate: the round trip is the identity on the spectrum.
  }
  row_ = VecC::Zero(n_);
  const double w0 = 2.0 * M_PI / n_;
  for (int k = 0; k < n_; ++k) {
    cxd acc(0.0, 0.0);
    for (int m = 0; m < keep_; ++m) acc += std::polar(1.0, w0 * (op_ - k) * m);
    row_(k) = acc / static_cast<double>(n_);
  }
}

VecC GateOperator::apply_spectrum(const VecC& spectrum) const {
  if (static_cast<int>(spectrum.size()) != n_)
    throw DimensionMismatch("spectrum length does not match gate grid");
  if (setting_.is_infinite() || keep_ == n_) return spectrum;
  VecC h = spectrum_to_delay(spectrum);
  for (int m = keep_; m < n_; ++m) h(m) = cxd(0.0, 0.0);
  return delay_to_spectrum(h);
}

std::vector<MatC> channel_spectrum(const WidebandScattering& ws, const LoadVector& loads) {
  if (loads.size() != ws.n_s())
    throw DimensionMismatch("load vector length does not match pm port count");
  const auto& bv = ws.blocks();
  const int nf = ws.n_freq();
  const int ns = ws.n_s();
  const auto phi = loads.reflections().asDiagonal();
  const double max_load = ns ? loads.reflections().cwiseAbs().maxCoeff() : 0.0;
  std::vector<MatC> out;
  out.reserve(nf);
  MatC a(ns, ns);
  for (int k = 0; k < nf; ++k) {
    // Tight guard: rho(Phi S_SS) <= max|r| * sigma_max(S_SS).
    if (max_load * bv.s_ss_sigma_max[static_cast<size_t>(k)] >= 1.0 - kNearCriticalBand) {
      const double rho = spectral_radius(loads, bv.s_ss[static_cast<size_t>(k)]);
      if (rho >= 1.0 - kResolventMargin)
        throw SingularResolvent("spectral radius reaches unity at frequency sample " +
                                std::to_string(k));
    }
    a.noalias() = -(phi * bv.s_ss[static_cast<size_t>(k)]);
    a.diagonal().array() += 1.0;
    Eigen::PartialPivLU<MatC> lu(a);
    MatC x = lu.solve(phi * bv.s_st[static_cast<size_t>(k)]);
    MatC h = bv.s_rt[static_cast<size_t>(k)];
    h.noalias() += bv.s_rs[static_cast<size_t>(k)] * x;
    out.push_back(std::move(h));
  }
  return out;
}

ChannelMatrix gate_channel(const WidebandScattering& ws, const LoadVector& loads,
                           const GateSetting& setting) {
  if (setting.is_infinite()) return end_to_end_channel(ws.at_operating(), loads);
  const GateOperator gate(ws.grid_hz(), ws.operating_index(), setting);
  const std::vector<MatC> spectrum = channel_spectrum(ws, loads);
  const int nr = ws.n_r();
  const int nt = ws.n_t();
  const int nf = ws.n_freq();
  ChannelMatrix out;
  out.frequency_hz = ws.operating_frequency_hz();
  out.entries.resize(nr, nt);
  VecC entry(nf);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nf; ++k) entry(k) = spectrum[static_cast<size_t>(k)](i, j);
      out.entries(i, j) = gate.at_operating(entry);
    }
  }
  return out;
}

ImpulseResponse impulse_response(const WidebandScattering& ws, const LoadVector& loads) {
  const std::vector<MatC> spectrum = channel_spectrum(ws, loads);
  const int nr = ws.n_r();
  const int nt = ws.n_t();
  const int nf = ws.n_freq();
  ImpulseResponse ir;
  ir.n_r = nr;
  ir.n_t = nt;
  ir.delays_s.resize(nf);
  const double band = ws.band_span_hz();
  for (int m = 0; m < nf; ++m) ir.delays_s(m) = m / band;
  ir.entries.reserve(static_cast<size_t>(nr * nt));
  VecC entry(nf);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nf; ++k) entry(k) = spectrum[static_cast<size_t>(k)](i, j);
      ir.entries.push_back(spectrum_to_delay(entry));
    }
  }
  return ir;
}

}  // namespace wpnn
