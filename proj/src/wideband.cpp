#include "wpnn/wideband.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "wpnn/util.hpp"

namespace wpnn {

using nlohmann::json;

namespace {
constexpr double kGridUniformityTol = 1e-9;  // relative spacing jitter allowed
std::mutex g_block_mutex;
}  // namespace

WidebandScattering::WidebandScattering(VecR grid_hz, std::vector<MatC> matrices,
                                       PortPartition partition, int operating_index)
    : grid_(std::move(grid_hz)),
      matrices_(std::move(matrices)),
      partition_(std::move(partition)),
      operating_index_(operating_index) {
  const int nf = static_cast<int>(grid_.size());
  if (nf < 2) throw GridError("frequency grid needs at least two samples");
  if (static_cast<int>(matrices_.size()) != nf)
    throw DimensionMismatch("matrix count does not match frequency grid length");
  const double d0 = grid_(1) - grid_(0);
  if (d0 <= 0.0) throw GridError("frequency grid must be strictly increasing");
  for (int k = 1; k < nf; ++k) {
    const double d = grid_(k) - grid_(k - 1);
    if (d <= 0.0) throw GridError("frequency grid must be strictly increasing");
    if (std::abs(d - d0) > kGridUniformityTol * d0)
      throw GridError("frequency grid must be uniformly spaced");
  }
  if (operating_index_ < 0 || operating_index_ >= nf)
    throw GridError("operating index out of range");
  const int n = partition_.n_total();
  for (const MatC& m : matrices_) {
    if (m.rows() != n || m.cols() != n)
      throw DimensionMismatch("scattering sample size does not match partition");
  }
}

void WidebandScattering::require_passive() const {
  for (int k = 0; k < n_freq(); ++k) {
    const PassivityReport rep = validate_passivity(at(k));
    if (!rep.passive) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "sigma_max=%.12g at %.6g GHz (sample %d)", rep.sigma_max,
                    grid_(k) / 1e9, k);
      throw PassivityViolation(buf);
    }
  }
}

std::shared_ptr<WidebandScattering> WidebandScattering::with_zero_pm_coupling() const {
  std::vector<MatC> mats = matrices_;
  for (MatC& m : mats)
    for (int i : partition_.pm())
      for (int j : partition_.pm()) m(i, j) = cxd(0.0, 0.0);
  return std::make_shared<WidebandScattering>(grid_, std::move(mats), partition_, operating_index_);
}

const WidebandScattering::BlockView& WidebandScattering::blocks() const {
  std::lock_guard<std::mutex> lock(g_block_mutex);
  if (!blocks_) {
    auto bv = std::make_shared<BlockView>();
    const int nf = n_freq();
    bv->s_rt.reserve(nf);
    bv->s_rs.reserve(nf);
    bv->s_st.reserve(nf);
    bv->s_ss.reserve(nf);
    bv->s_ss_sigma_max.reserve(nf);
    for (int k = 0; k < nf; ++k) {
      const ScatteringMatrix s = at(k);
      bv->s_rt.push_back(s.s_rt());
      bv->s_rs.push_back(s.s_rs());
      bv->s_st.push_back(s.s_st());
      bv->s_ss.push_back(s.s_ss());
      Eigen::BDCSVD<MatC> svd(bv->s_ss.back());
      bv->s_ss_sigma_max.push_back(svd.singularValues().size() ? svd.singularValues()(0) : 0.0);
    }
    blocks_ = bv;
  }
  return *blocks_;
}

std::string to_interchange_json(const WidebandScattering& ws) {
  json doc;
  doc["n_t"] = ws.n_t();
  doc["n_r"] = ws.n_r();
  doc["n_s"] = ws.n_s();
  json freqs = json::array();
  for (int k = 0; k < ws.n_freq(); ++k) freqs.push_back(quantize15(ws.grid_hz()(k)));
  doc["frequencies_hz"] = std::move(freqs);
  const int n = ws.partition().n_total();
  json mats = json::array();
  for (int k = 0; k < ws.n_freq(); ++k) {
    const MatC& m = ws.matrix(k);
    json rows = json::array();
    for (int i = 0; i < n; ++i) {
      json row = json::array();
      for (int j = 0; j < n; ++j)
        row.push_back(json::array({quantize15(m(i, j).real()), quantize15(m(i, j).imag())}));
      rows.push_back(std::move(row));
    }
    mats.push_back(std::move(rows));
  }
  doc["matrices"] = std::move(mats);
  doc["operating_index"] = ws.operating_index();
  return doc.dump();
}

std::shared_ptr<WidebandScattering> from_interchange_json(const std::string& json_text) {
  json doc = json::parse(json_text);
  const int n_t = doc.at("n_t").get<int>();
  const int n_r = doc.at("n_r").get<int>();
  const int n_s = doc.at("n_s").get<int>();
  const auto& freqs = doc.at("frequencies_hz");
  const int nf = static_cast<int>(freqs.size());
  VecR grid(nf);
  for (int k = 0; k < nf; ++k) grid(k) = freqs[k].get<double>();
  const int n = n_t + n_r + n_s;
  const auto& mats = doc.at("matrices");
  if (static_cast<int>(mats.size()) != nf)
    throw DimensionMismatch("interchange matrices count mismatch");
  std::vector<MatC> matrices;
  matrices.reserve(nf);
  for (int k = 0; k < nf; ++k) {
    MatC m(n, n);
    const auto& rows = mats[k];
    if (static_cast<int>(rows.size()) != n) throw DimensionMismatch("interchange row count mismatch");
    for (int i = 0; i < n; ++i) {
      const auto& row = rows[i];
      if (static_cast<int>(row.size()) != n)
        throw DimensionMismatch("interchange column count mismatch");
      for (int j = 0; j < n; ++j)
        m(i, j) = cxd(row[j][0].get<double>(), row[j][1].get<double>());
    }
    matrices.push_back(std::move(m));
  }
  int op_index = -1;
  if (doc.contains("operating_index")) {
    op_index = doc["operating_index"].get<int>();
  } else {
    // Nearest sample to 140 GHz when in band, else mid-grid.
    const double target = 140e9;
    if (grid(0) <= target && target <= grid(nf - 1)) {
      double best = 1e300;
      for (int k = 0; k < nf; ++k) {
        const double d = std::abs(grid(k) - target);
        if (d < best) {
          best = d;
          op_index = k;
        }
      }
    } else {
      op_index = nf / 2;
    }
  }
  auto ws = std::make_shared<WidebandScattering>(std::move(grid), std::move(matrices),
                                                 PortPartition::contiguous(n_t, n_r, n_s), op_index);
  ws->require_passive();
  return ws;
}

void save_interchange(const WidebandScattering& ws, const std::string& path) {
  write_file_atomic(path, to_interchange_json(ws));
}

std::shared_ptr<WidebandScattering> load_interchange(const std::string& path) {
  return from_interchange_json(read_file(path));
}

}  // namespace wpnn
