#include "wpnn/encoding.hpp"

#include <cmath>

namespace wpnn {

std::string to_string(EncodingKind kind) {
  return kind == EncodingKind::Phase ? "phase" : "linear";
}

EncodingKind encoding_from_string(const std::string& name) {
  if (name == "phase") return EncodingKind::Phase;
  if (name == "linear") return EncodingKind::Linear;
  throw ModeError("unknown encoding '" + name + "' (expected \"phase\" or \"linear\")");
}

namespace {
void check_input(double x) {
  if (!(x >= -kInputDomainSlack && x <= 1.0 + kInputDomainSlack))
    throw DomainError("input x must lie in [0, 1]");
}
}  // namespace

LoadVector encode(EncodingKind kind, double x, const VecR& weights) {
  check_input(x);
  const Eigen::Index n = weights.size();
  VecC r(n);
  if (kind == EncodingKind::Phase) {
    for (Eigen::Index i = 0; i < n; ++i) r(i) = std::polar(1.0, 2.0 * M_PI * (x + weights(i)));
  } else {
    for (Eigen::Index i = 0; i < n; ++i) r(i) = cxd(x * clip01(weights(i)), 0.0);
  }
  return LoadVector(std::move(r));
}

VecC encode_jacobian(EncodingKind kind, double x, const VecR& weights) {
  check_input(x);
  const Eigen::Index n = weights.size();
  VecC d(n);
  if (kind == EncodingKind::Phase) {
    const cxd j2pi(0.0, 2.0 * M_PI);
    for (Eigen::Index i = 0; i < n; ++i)
      d(i) = j2pi * std::polar(1.0, 2.0 * M_PI * (x + weights(i)));
  } else {
    for (Eigen::Index i = 0; i < n; ++i)
      d(i) = cxd(clip_interior(weights(i)) ? x : 0.0, 0.0);
  }
  return d;
}

}  // namespace wpnn
