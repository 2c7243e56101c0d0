#include "wpnn/model.hpp"

#include <json.hpp>

#include "wpnn/util.hpp"

namespace wpnn {

using nlohmann::json;

std::string to_string(ArchitectureMode mode) {
  return mode == ArchitectureMode::SharedWeights ? "shared" : "independent";
}

ArchitectureMode mode_from_string(const std::string& name) {
  if (name == "shared") return ArchitectureMode::SharedWeights;
  if (name == "independent") return ArchitectureMode::IndependentWeights;
  throw ModeError("unknown architecture mode '" + name + "' (expected \"shared\" or \"independent\")");
}

WeightMatrix::WeightMatrix(ArchitectureMode mode, int n_s, int depth) : mode_(mode), depth_(depth) {
  if (depth < 1) throw DomainError("depth must be at least 1");
  if (n_s < 1) throw DimensionMismatch("weight matrix needs at least one row");
  stored_ = MatR::Zero(n_s, mode == ArchitectureMode::SharedWeights ? 1 : depth);
}

WeightMatrix::WeightMatrix(ArchitectureMode mode, int depth, MatR stored)
    : mode_(mode), depth_(depth), stored_(std::move(stored)) {
  if (depth < 1) throw DomainError("depth must be at least 1");
  const int want = mode == ArchitectureMode::SharedWeights ? 1 : depth;
  if (stored_.cols() != want)
    throw DimensionMismatch("stored weight columns do not match architecture mode");
}

MatR WeightMatrix::materialized() const {
  if (mode_ == ArchitectureMode::IndependentWeights) return stored_;
  return stored_.col(0).replicate(1, depth_);
}

WpnnModel::WpnnModel(std::shared_ptr<const WidebandScattering> cavity_, EncodingKind enc,
                     GateSetting g, int depth_, ArchitectureMode mode_)
    : cavity(std::move(cavity_)),
      encoding(enc),
      gate(g),
      depth(depth_),
      mode(mode_),
      weights(mode_, cavity->n_s(), depth_) {
  if (depth < 1) throw DomainError("depth must be at least 1");
  if (cavity->n_t() != cavity->n_r())
    throw DimensionMismatch("layer cascade requires N_T == N_R");
}

ForwardResult forward(const WpnnModel& model, double x, bool keep_intermediates) {
  const int nt = model.cavity->n_t();
  VecC a = VecC::Ones(nt);
  ForwardResult res;
  if (keep_intermediates) res.wavefronts.reserve(static_cast<size_t>(model.depth));

  // Tied weights on one cavity give identical per-layer channels; evaluate once.
  const bool reuse_channel = model.mode == ArchitectureMode::SharedWeights &&
                             model.layer_cavities.empty();
  MatC h_cached;
  for (int ell = 0; ell < model.depth; ++ell) {
    if (!reuse_channel || ell == 0) {
      const LoadVector r = encode(model.encoding, x, model.weights.layer(ell));
      const ChannelMatrix h = gate_channel(model.cavity_for_layer(ell), r, model.gate);
      h_cached = h.entries;
    }
    a = (h_cached * a).eval();
    if (keep_intermediates) res.wavefronts.push_back(a);
  }
  res.readout = a.real().mean();
  return res;
}

VecR batch_forward(const WpnnModel& model, const VecR& xs) {
  VecR out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) out(i) = forward(model, xs(i)).readout;
  return out;
}

double nmse(const VecR& predictions, const VecR& targets) {
  if (predictions.size() != targets.size())
    throw DimensionMismatch("prediction/target length mismatch");
  if (targets.size() == 0) throw DimensionMismatch("nmse needs at least one sample");
  const double denom = targets.squaredNorm();
  if (denom == 0.0) throw DegenerateTarget("target sum of squares is zero");
  return (predictions - targets).squaredNorm() / denom;
}

std::string to_checkpoint_json(const WpnnModel& model, const std::string& cavity_path,
                               uint64_t cavity_hash) {
  json doc;
  doc["encoding"] = to_string(model.encoding);
  doc["mode"] = to_string(model.mode);
  doc["depth"] = model.depth;
  doc["tau_s"] = model.gate.to_string();
  doc["n_s"] = model.weights.n_s();
  doc["cavity_path"] = cavity_path;
  doc["cavity_hash"] = hex64(cavity_hash);
  json rows = json::array();
  const MatR& w = model.weights.stored();
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < w.cols(); ++j) row.push_back(w(i, j));
    rows.push_back(std::move(row));
  }
  doc["weights"] = std::move(rows);
  return doc.dump();
}

WpnnModel from_checkpoint_json(const std::string& json_text,
                               std::shared_ptr<const WidebandScattering> cavity) {
  json doc = json::parse(json_text);
  const EncodingKind enc = encoding_from_string(doc.at("encoding").get<std::string>());
  const ArchitectureMode mode = mode_from_string(doc.at("mode").get<std::string>());
  const int depth = doc.at("depth").get<int>();
  const GateSetting gate = GateSetting::from_string(doc.at("tau_s").get<std::string>());
  WpnnModel model(std::move(cavity), enc, gate, depth, mode);
  const auto& rows = doc.at("weights");
  MatR w(rows.size(), rows[0].size());
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = rows[i][j].get<double>();
  model.weights = WeightMatrix(mode, depth, std::move(w));
  if (model.weights.n_s() != model.cavity->n_s())
    throw DimensionMismatch("checkpoint weight rows do not match cavity pm ports");
  return model;
}

std::string checkpoint_cavity_path(const std::string& json_text) {
  return json::parse(json_text).at("cavity_path").get<std::string>();
}

uint64_t checkpoint_cavity_hash(const std::string& json_text) {
  return std::stoull(json::parse(json_text).at("cavity_hash").get<std::string>(), nullptr, 16);
}

}  // namespace wpnn
