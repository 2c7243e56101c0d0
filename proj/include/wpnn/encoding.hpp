#pragma once

#include <string>

#include "wpnn/scattering.hpp"

namespace wpnn {

/// How the input datum and the trainable weights parametrize the load
/// reflection coefficients.
///   Phase:  r_i = exp(j 2 pi (x + w_i)), unit magnitude, weights unconstrained.
///   Linear: r_i = x * clip(w_i, 0, 1), real-valued in [0, x].
enum class EncodingKind { Phase, Linear };

std::string to_string(EncodingKind kind);
EncodingKind encoding_from_string(const std::string& name);

/// Slack allowed on the x in [0,1] precondition.
inline constexpr double kInputDomainSlack = 1e-12;

LoadVector encode(EncodingKind kind, double x, const VecR& weights);

/// Elementwise derivative dr_i/dw_i at (x, weights). For the linear encoding
/// the clip subgradient is 0 on and outside the boundaries.
VecC encode_jacobian(EncodingKind kind, double x, const VecR& weights);

inline double clip01(double w) { return w < 0.0 ? 0.0 : (w > 1.0 ? 1.0 : w); }
inline bool clip_interior(double w) { return w > 0.0 && w < 1.0; }

}  // namespace wpnn
