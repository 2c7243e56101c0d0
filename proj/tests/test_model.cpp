#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"
#include "wpnn/model.hpp"
#include "wpnn/util.hpp"

using namespace wpnn;
using namespace wpnn::testing;

namespace {

std::shared_ptr<WidebandScattering> square_cavity(uint64_t seed, double coupling = 1.0) {
  CavitySpec spec = small_cavity_spec(seed, coupling);
  return synthesize_cavity(spec);
}

WeightMatrix random_weights(const WpnnModel& model, uint64_t seed, double lo, double hi) {
  CounterRng rng(seed);
  MatR w(model.weights.n_s(), model.weights.stored_cols());
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(lo, hi);
  return WeightMatrix(model.mode, model.depth, std::move(w));
}

}  // namespace

TEST_CASE("weight matrix sharing semantics") {
  WeightMatrix shared(ArchitectureMode::SharedWeights, 4, 3);
  CHECK(shared.stored_cols() == 1);  // degrees of freedom capped at N_S
  shared.stored().col(0) << 1, 2, 3, 4;
  const MatR full = shared.materialized();
  CHECK(full.cols() == 3);
  for (int j = 0; j < 3; ++j) CHECK((full.col(j) - shared.stored().col(0)).norm() == 0.0);
  CHECK((shared.layer(2) - shared.layer(0)).norm() == 0.0);

  WeightMatrix indep(ArchitectureMode::IndependentWeights, 4, 3);
  CHECK(indep.stored_cols() == 3);
  CHECK_THROWS_AS(WeightMatrix(ArchitectureMode::SharedWeights, 3, MatR::Zero(4, 3)),
                  DimensionMismatch);
}

TEST_CASE("model construction guards") {
  auto ws = square_cavity(71);
  CHECK_THROWS_AS(WpnnModel(ws, EncodingKind::Phase, GateSetting::infinite(), 0,
                            ArchitectureMode::SharedWeights),
                  DomainError);
  CavitySpec rect = small_cavity_spec(72);
  rect.n_t = 3;
  rect.n_r = 2;
  auto bad = synthesize_cavity(rect);
  CHECK_THROWS_AS(WpnnModel(bad, EncodingKind::Phase, GateSetting::infinite(), 1,
                            ArchitectureMode::SharedWeights),
                  DimensionMismatch);
}

TEST_CASE("zero loads reduce depth one to the direct readout") {
  auto ws = square_cavity(73);
  WpnnModel model(ws, EncodingKind::Linear, GateSetting::infinite(), 1,
                  ArchitectureMode::SharedWeights);
  // x = 0 under the linear encoding gives r = 0 for any weights.
  const double y = forward(model, 0.0).readout;
  const VecC ones = VecC::Ones(ws->n_t());
  const VecC direct = ws->at_operating().s_rt() * ones;
  CHECK(y == doctest::Approx(direct.real().mean()).epsilon(1e-12));
}

TEST_CASE("shared equals independent with tied columns") {
  auto ws = square_cavity(74);
  WpnnModel shared(ws, EncodingKind::Phase, GateSetting::infinite(), 3,
                   ArchitectureMode::SharedWeights);
  shared.weights = random_weights(shared, 75, 0.0, 1.0);

  WpnnModel indep(ws, EncodingKind::Phase, GateSetting::infinite(), 3,
                  ArchitectureMode::IndependentWeights);
  indep.weights = WeightMatrix(ArchitectureMode::IndependentWeights, 3,
                               shared.weights.stored().col(0).replicate(1, 3));
  for (double x : {0.0, 0.21, 0.77, 1.0}) {
    CHECK(forward(shared, x).readout == forward(indep, x).readout);
  }
}

TEST_CASE("two ungated layers compose by matrix product") {
  auto ws = square_cavity(76);
  WpnnModel model(ws, EncodingKind::Phase, GateSetting::infinite(), 2,
                  ArchitectureMode::IndependentWeights);
  model.weights = random_weights(model, 77, -0.5, 0.5);
  const double x = 0.42;

  const ScatteringMatrix s = ws->at_operating();
  const MatC h1 = end_to_end_channel(s, encode(model.encoding, x, model.weights.layer(0))).entries;
  const MatC h2 = end_to_end_channel(s, encode(model.encoding, x, model.weights.layer(1))).entries;
  const VecC b = h2 * (h1 * VecC::Ones(s.n_t()));
  CHECK(forward(model, x).readout == doctest::Approx(b.real().mean()).epsilon(1e-12));

  const ForwardResult full = forward(model, x, /*keep_intermediates=*/true);
  REQUIRE(full.wavefronts.size() == 2);
  CHECK((full.wavefronts[1] - b).norm() < 1e-12 * b.norm());
}

TEST_CASE("wavefront map is linear at fixed configuration") {
  auto ws = square_cavity(78);
  CounterRng rng(79);
  const double x = 0.3;
  VecR w(ws->n_s());
  for (int i = 0; i < ws->n_s(); ++i) w(i) = rng.uniform();
  const MatC h = end_to_end_channel(ws->at_operating(), encode(EncodingKind::Phase, x, w)).entries;
  const VecC a1 = random_complex(ws->n_t(), 1, rng);
  const VecC a2 = random_complex(ws->n_t(), 1, rng);
  const cxd c1(0.7, -1.1), c2(-0.2, 0.5);
  CHECK(((h * (c1 * a1 + c2 * a2)) - (c1 * (h * a1) + c2 * (h * a2))).norm() < 1e-12);
}

TEST_CASE("batch forward matches scalar calls bitwise") {
  auto ws = square_cavity(80);
  WpnnModel model(ws, EncodingKind::Phase, GateSetting::infinite(), 2,
                  ArchitectureMode::SharedWeights);
  model.weights = random_weights(model, 81, 0.0, 1.0);
  CounterRng rng(82);
  VecR xs(40);
  for (int i = 0; i < 40; ++i) xs(i) = rng.uniform();
  const VecR batch = batch_forward(model, xs);
  for (int i = 0; i < 40; ++i) CHECK(batch(i) == forward(model, xs(i)).readout);
  CHECK(batch_forward(model, VecR()).size() == 0);
}

TEST_CASE("nmse contract") {
  VecR y(2), p(2);
  y << 1, 1;
  p << 1, 2;
  CHECK(nmse(y, y) == 0.0);
  CHECK(nmse(VecR::Zero(2), y) == doctest::Approx(1.0));
  CHECK(nmse(p, y) == doctest::Approx(0.5));
  CHECK_THROWS_AS(nmse(p, VecR::Zero(2)), DegenerateTarget);
  CHECK_THROWS_AS(nmse(p, VecR::Zero(3)), DimensionMismatch);
}

TEST_CASE("checkpoints reload exactly") {
  auto ws = square_cavity(83);
  WpnnModel model(ws, EncodingKind::Linear, GateSetting::truncate(2e-10), 2,
                  ArchitectureMode::IndependentWeights);
  model.weights = random_weights(model, 84, -0.2, 1.2);
  const std::string text = to_checkpoint_json(model, "cavity.json", 0x12345678ULL);
  const WpnnModel back = from_checkpoint_json(text, ws);
  CHECK(back.encoding == model.encoding);
  CHECK(back.mode == model.mode);
  CHECK(back.depth == model.depth);
  CHECK(back.gate == model.gate);
  CHECK((back.weights.stored() - model.weights.stored()).norm() == 0.0);
  CHECK(checkpoint_cavity_path(text) == "cavity.json");
  CHECK(checkpoint_cavity_hash(text) == 0x12345678ULL);

  CounterRng rng(85);
  VecR xs(5);
  for (int i = 0; i < 5; ++i) xs(i) = rng.uniform();
  CHECK((batch_forward(back, xs) - batch_forward(model, xs)).norm() == 0.0);
}
