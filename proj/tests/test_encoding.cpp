#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"
#include "wpnn/encoding.hpp"

using namespace wpnn;
using namespace wpnn::testing;

TEST_CASE("phase encoding fixed points") {
  VecR w = VecR::Zero(3);
  const VecC r0 = encode(EncodingKind::Phase, 0.0, w).reflections();
  for (int i = 0; i < 3; ++i) CHECK(std::abs(r0(i) - cxd(1.0, 0.0)) < 1e-15);

  w.setConstant(0.5);
  const VecC r1 = encode(EncodingKind::Phase, 0.5, w).reflections();
  for (int i = 0; i < 3; ++i) CHECK(std::abs(r1(i) - cxd(1.0, 0.0)) < 1e-12);
}

TEST_CASE("phase encoding has unit magnitude and is 1-periodic") {
  CounterRng rng(41);
  for (int t = 0; t < 20; ++t) {
    VecR w(5);
    for (int i = 0; i < 5; ++i) w(i) = rng.uniform(-3.0, 3.0);
    const double x = rng.uniform();
    const VecC r = encode(EncodingKind::Phase, x, w).reflections();
    for (int i = 0; i < 5; ++i) CHECK(std::abs(std::abs(r(i)) - 1.0) < 1e-15);
    VecR w_shift = w;
    w_shift.array() += 1.0;  // same as shifting x by one period
    const VecC r2 = encode(EncodingKind::Phase, x, w_shift).reflections();
    CHECK((r - r2).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("linear encoding clips and scales") {
  VecR w(3);
  w << -0.5, 0.4, 1.7;
  const VecC r = encode(EncodingKind::Linear, 0.3, w).reflections();
  CHECK(r(0) == cxd(0.0, 0.0));
  CHECK(r(1).real() == doctest::Approx(0.12));
  CHECK(r(2).real() == doctest::Approx(0.3));
  for (int i = 0; i < 3; ++i) CHECK(r(i).imag() == 0.0);
}

TEST_CASE("linear encoding stays within the input magnitude") {
  CounterRng rng(42);
  for (int t = 0; t < 50; ++t) {
    VecR w(6);
    for (int i = 0; i < 6; ++i) w(i) = rng.uniform(-2.0, 3.0);
    const double x = rng.uniform();
    const VecC r = encode(EncodingKind::Linear, x, w).reflections();
    for (int i = 0; i < 6; ++i) {
      CHECK(std::abs(r(i)) <= x + 1e-15);
      CHECK(std::abs(r(i)) <= 1.0);
    }
  }
}

TEST_CASE("encoding acts elementwise") {
  CounterRng rng(43);
  VecR w(6);
  for (int i = 0; i < 6; ++i) w(i) = rng.uniform(-1.0, 2.0);
  const double x = 0.37;
  for (EncodingKind kind : {EncodingKind::Phase, EncodingKind::Linear}) {
    const VecC r = encode(kind, x, w).reflections();
    VecR wp(6);
    const int perm[6] = {3, 1, 5, 0, 4, 2};
    for (int i = 0; i < 6; ++i) wp(i) = w(perm[i]);
    const VecC rp = encode(kind, x, wp).reflections();
    for (int i = 0; i < 6; ++i) CHECK(rp(i) == r(perm[i]));
  }
}

TEST_CASE("input domain is guarded") {
  const VecR w = VecR::Zero(2);
  CHECK_THROWS_AS(encode(EncodingKind::Phase, -0.01, w), DomainError);
  CHECK_THROWS_AS(encode(EncodingKind::Linear, 1.01, w), DomainError);
  CHECK_NOTHROW(encode(EncodingKind::Phase, 1.0 + 0.5e-12, w));
}

TEST_CASE("phase jacobian is a rotation by j 2 pi") {
  CounterRng rng(44);
  VecR w(4);
  for (int i = 0; i < 4; ++i) w(i) = rng.uniform(-1.0, 1.0);
  const double x = rng.uniform();
  const VecC d = encode_jacobian(EncodingKind::Phase, x, w);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(d(i)) == doctest::Approx(2.0 * M_PI));
}

TEST_CASE("linear jacobian vanishes in the clipped region") {
  VecR w(3);
  w << 2.0, -0.1, 0.6;
  const VecC d = encode_jacobian(EncodingKind::Linear, 0.8, w);
  CHECK(d(0) == cxd(0.0, 0.0));
  CHECK(d(1) == cxd(0.0, 0.0));
  CHECK(d(2) == cxd(0.8, 0.0));
}

TEST_CASE("jacobian matches central differences") {
  CounterRng rng(45);
  const double h = 1e-6;
  for (EncodingKind kind : {EncodingKind::Phase, EncodingKind::Linear}) {
    VecR w(8);
    for (int i = 0; i < 8; ++i)
      w(i) = kind == EncodingKind::Phase ? rng.uniform(-1.0, 1.0) : rng.uniform(0.1, 0.9);
    const double x = rng.uniform();
    const VecC d = encode_jacobian(kind, x, w);
    for (int i = 0; i < 8; ++i) {
      VecR wp = w, wm = w;
      wp(i) += h;
      wm(i) -= h;
      const cxd fd = (encode(kind, x, wp).reflections()(i) - encode(kind, x, wm).reflections()(i)) /
                     (2.0 * h);
      CHECK(std::abs(fd - d(i)) / std::max(std::abs(d(i)), 1e-12) < 1e-7);
    }
  }
}
