#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "robustelm/interval.hpp"
#include "support.hpp"

using namespace robustelm;
using testing_support::random_box;
using testing_support::random_matrix;
using testing_support::sample_in;

namespace {

double sigmoid_ref(double x) { return 1.0 / (1.0 + std::exp(-x)); }

IntervalVectorD ivec(std::initializer_list<std::pair<double, double>> entries) {
  Eigen::VectorXd lo(static_cast<Eigen::Index>(entries.size())), hi(lo.size());
  Eigen::Index i = 0;
  for (auto [l, h] : entries) {
    lo(i) = l;
    hi(i++) = h;
  }
  return IntervalVectorD(lo, hi);
}

}  // namespace

TEST_CASE("construction rejects bad endpoints") {
  CHECK_THROWS_AS(IntervalD(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(IntervalD(0.0, INFINITY), std::invalid_argument);
  CHECK_THROWS_AS(IntervalD(NAN, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(IntervalVectorD(Eigen::Vector2d(0, 2), Eigen::Vector2d(1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(IntervalVectorD(Eigen::Vector2d(0, 0), Eigen::Vector3d(1, 1, 1)), DimensionError);
  const IntervalD x(-1, 3);
  CHECK(x.center() == 1);
  CHECK(x.radius() == 2);
  CHECK(x.width() == 4);
  CHECK(x.contains(3));
  CHECK_FALSE(x.contains(3.1));
}

TEST_CASE("signed_term_bounds") {
  CHECK(signed_term_bounds(2.0, IntervalD(0, 1)) == IntervalD(0, 2));
  CHECK(signed_term_bounds(-1.0, IntervalD(0, 1)) == IntervalD(-1, 0));
  CHECK(signed_term_bounds(0.0, IntervalD(-5, 7)) == IntervalD(0, 0));
}

TEST_CASE("apply_activation") {
  CHECK(apply_activation(Activation::identity, IntervalD(-1, 1)) == IntervalD(-1, 1));
  CHECK(apply_activation(Activation::relu, IntervalD(-2, 3)) == IntervalD(0, 3));
  const IntervalD s = apply_activation(Activation::sigmoid, IntervalD(-1, 1));
  CHECK(std::abs(s.lo() - 0.26894) <= 1e-5);
  CHECK(std::abs(s.hi() - 0.73106) <= 1e-5);
  const IntervalD t = apply_activation(Activation::tanh, IntervalD(-0.5, 2));
  CHECK(t.lo() == std::tanh(-0.5));
  CHECK(t.hi() == std::tanh(2.0));
}

TEST_CASE("parse_activation") {
  CHECK(parse_activation("sigmoid") == Activation::sigmoid);
  CHECK(parse_activation("linear") == Activation::identity);
  CHECK(activation_name(Activation::relu) == "relu");
  CHECK_THROWS_AS(parse_activation("softmax"), std::invalid_argument);
}

TEST_CASE("interval_affine examples") {
  {
    Eigen::MatrixXd W(1, 2);
    W << 1, -1;
    const auto y = interval_affine(W, Eigen::VectorXd::Zero(1), ivec({{0, 1}, {0, 1}}));
    CHECK(y[0] == IntervalD(-1, 1));
  }
  {
    const auto y = interval_affine(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Ones(2), ivec({{0, 1}, {2, 3}}));
    CHECK(y[0] == IntervalD(1, 2));
    CHECK(y[1] == IntervalD(3, 4));
  }
  {
    // Brute force over the four corners of the input box.
    Eigen::MatrixXd W(1, 2);
    W << 2, -3;
    Eigen::VectorXd b(1);
    b << 1;
    const auto x = ivec({{-1, 1}, {0, 2}});
    double lo = INFINITY, hi = -INFINITY;
    for (double a : {-1.0, 1.0})
      for (double c : {0.0, 2.0}) {
        const double v = 2 * a - 3 * c + 1;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    CHECK(lo == -7);
    CHECK(hi == 3);
    const auto y = interval_affine(W, b, x);
    CHECK(y[0] == IntervalD(lo, hi));
  }
}

TEST_CASE("interval_affine rejects mismatched shapes") {
  CHECK_THROWS_AS(interval_affine(Eigen::MatrixXd::Ones(2, 3), Eigen::VectorXd::Zero(2), ivec({{0, 1}})),
                  DimensionError);
  CHECK_THROWS_AS(interval_affine(Eigen::MatrixXd::Ones(2, 1), Eigen::VectorXd::Zero(3), ivec({{0, 1}})),
                  DimensionError);
}

TEST_CASE("interval_affine is sound on random boxes") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 1 + trial % 6, r = 1 + (trial * 5) % 7;
    const Eigen::MatrixXd W = random_matrix(gen, r, n, 3.0);
    const Eigen::VectorXd b = random_matrix(gen, r, 1);
    const auto x = random_box(gen, n);
    const auto y = interval_affine(W, b, x);
    for (int s = 0; s < 500; ++s) {
      const Eigen::VectorXd v = sample_in(gen, x);
      REQUIRE(y.contains(W * v + b, 1e-12));
    }
  }
}

TEST_CASE("interval_affine endpoints are attained at sign corners") {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 1 + trial % 5, r = 1 + trial % 4;
    const Eigen::MatrixXd W = random_matrix(gen, r, n, 3.0);
    const Eigen::VectorXd b = random_matrix(gen, r, 1);
    const auto x = random_box(gen, n);
    const auto y = interval_affine(W, b, x);
    for (Eigen::Index i = 0; i < r; ++i) {
      const double at_lo = W.row(i).dot(sign_corner(W, i, x, false)) + b(i);
      const double at_hi = W.row(i).dot(sign_corner(W, i, x, true)) + b(i);
      CHECK(std::abs(at_lo - y.lo()(i)) <= 1e-12);
      CHECK(std::abs(at_hi - y.hi()(i)) <= 1e-12);
    }
  }
}

TEST_CASE("monotone widening") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 1 + trial % 5, r = 1 + trial % 3;
    const Eigen::MatrixXd W = random_matrix(gen, r, n, 3.0);
    const Eigen::VectorXd b = random_matrix(gen, r, 1);
    const auto x = random_box(gen, n, 0.5);
    const Eigen::VectorXd grow = (random_matrix(gen, n, 1).array().abs() * 0.5).matrix();
    const IntervalVectorD wider(x.lo() - grow, x.hi() + grow);
    REQUIRE(x.subset_of(wider));
    CHECK(interval_affine(W, b, x).subset_of(interval_affine(W, b, wider)));
    for (auto a : {Activation::sigmoid, Activation::tanh, Activation::relu})
      CHECK(apply_activation(a, interval_affine(W, b, x)).subset_of(apply_activation(a, interval_affine(W, b, wider))));
  }
}

TEST_CASE("activation endpoints match reference formulas") {
  for (double v : {-30.0, -1.0, 0.0, 0.3, 12.0}) {
    CHECK(std::abs(activate(Activation::sigmoid, v) - sigmoid_ref(v)) <= 1e-15);
    CHECK(activate(Activation::relu, v) == std::max(v, 0.0));
  }
}

TEST_CASE("float instantiation") {
  using IF = IntervalVector<float>;
  const IF x(Eigen::Vector2f(0, 2), Eigen::Vector2f(1, 3));
  const auto y = interval_affine(Eigen::Matrix2f::Identity(), Eigen::Vector2f::Ones(), x);
  CHECK(y.lo()(1) == 3.0f);
  CHECK(y.hi()(0) == 2.0f);
}
