#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "robustelm/elm.hpp"
#include "support.hpp"

using namespace robustelm;
using testing_support::random_matrix;

namespace {

double ls_objective(const Eigen::MatrixXd& W2, const Eigen::MatrixXd& H, const Eigen::MatrixXd& Y, double ridge) {
  return (W2 * H - Y.transpose()).squaredNorm() + ridge * W2.squaredNorm();
}

}  // namespace

TEST_CASE("init_random is deterministic per seed") {
  ElmConfig cfg;
  cfg.n_hidden = 6;
  cfg.seed = 42;
  const ShallowNetD a = init_random(cfg, 3, 2);
  const ShallowNetD b = init_random(cfg, 3, 2);
  CHECK(a.W1 == b.W1);
  CHECK(a.b1 == b.b1);
  CHECK(a.W2.isZero(0));
  CHECK(a.is_elm_form());
  CHECK((a.W1.array().abs() <= 1.0).all());

  cfg.seed = 43;
  const ShallowNetD c = init_random(cfg, 3, 2);
  CHECK(c.W1 != a.W1);

  cfg.weight_range = IntervalD(0, 0);
  const ShallowNetD z = init_random(cfg, 3, 2);
  CHECK(z.W1.isZero(0));
  CHECK(z.b1.isZero(0));

  cfg.weight_range = IntervalD(2, 5);
  const ShallowNetD s = init_random(cfg, 3, 2);
  CHECK((s.W1.array() >= 2.0).all());
  CHECK((s.W1.array() < 5.0).all());
}

TEST_CASE("point_features") {
  ShallowNetD net;
  net.W1 = Eigen::MatrixXd::Identity(3, 3);
  net.b1 = Eigen::VectorXd::Zero(3);
  net.W2 = Eigen::MatrixXd::Zero(1, 3);
  net.b2 = Eigen::VectorXd::Zero(1);
  net.hidden_activation = Activation::identity;
  std::mt19937_64 gen(1);
  const Eigen::MatrixXd U = random_matrix(gen, 5, 3);
  CHECK(point_features(net, U) == U.transpose());

  const Eigen::MatrixXd empty = point_features(net, Eigen::MatrixXd(0, 3));
  CHECK(empty.rows() == 3);
  CHECK(empty.cols() == 0);

  ElmConfig cfg;
  cfg.n_hidden = 4;
  const ShallowNetD r = init_random(cfg, 3, 1);
  const auto H = hidden_interval_matrix(r, UncertainDatasetD::uniform(U, Eigen::MatrixXd::Zero(5, 1), 0.0));
  CHECK((point_features(r, U) - H.center()).cwiseAbs().maxCoeff() <= 1e-15);

  CHECK_THROWS_AS(point_features(r, Eigen::MatrixXd::Zero(2, 2)), DimensionError);
}

TEST_CASE("train_least_squares examples") {
  std::mt19937_64 gen(2);
  const Eigen::MatrixXd Y = random_matrix(gen, 4, 2);
  CHECK((train_least_squares(Eigen::MatrixXd::Identity(4, 4), Y, 0.0) - Y.transpose()).norm() <= 1e-12);

  // One feature equal to 1 on both samples: the fit is the target mean.
  Eigen::MatrixXd H(1, 2);
  H << 1, 1;
  Eigen::MatrixXd y(2, 1);
  y << 1, 3;
  const Eigen::MatrixXd W2 = train_least_squares(H, y, 0.0);
  REQUIRE(W2.rows() == 1);
  REQUIRE(W2.cols() == 1);
  CHECK(W2(0, 0) == doctest::Approx(2.0).epsilon(1e-14));

  CHECK(train_least_squares(H, y, 1e12).norm() < 1e-10);
  CHECK_THROWS_AS(train_least_squares(H, Eigen::MatrixXd::Zero(3, 1), 0.0), DimensionError);
  CHECK_THROWS_AS(train_least_squares(H, y, -1.0), std::invalid_argument);
}

TEST_CASE("minimum-norm solution on a rank-deficient system") {
  // Duplicate feature rows: every split w_a + w_b = 2 fits; minimum norm is (1, 1).
  Eigen::MatrixXd H(2, 2);
  H << 1, 1, 1, 1;
  Eigen::MatrixXd y(2, 1);
  y << 1, 3;
  const Eigen::MatrixXd W2 = train_least_squares(H, y, 0.0);
  CHECK(W2(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(W2(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("least-squares optimality under random perturbations") {
  std::mt19937_64 gen(3);
  for (double ridge : {0.0, 1e-3, 1.0}) {
    const Eigen::MatrixXd H = random_matrix(gen, 6, 20);
    const Eigen::MatrixXd Y = random_matrix(gen, 20, 2);
    const Eigen::MatrixXd W2 = train_least_squares(H, Y, ridge);
    const double best = ls_objective(W2, H, Y, ridge);
    for (int k = 0; k < 100; ++k) {
      Eigen::MatrixXd D = random_matrix(gen, 2, 6);
      D /= D.norm();
      CHECK(ls_objective(W2 + 1e-3 * D, H, Y, ridge) >= best);
    }
    // Stationarity of the regularized objective.
    const Eigen::MatrixXd grad = (W2 * H - Y.transpose()) * H.transpose() + ridge * W2;
    CHECK(grad.norm() <= 1e-8 * (1 + Y.norm()));
  }
}

TEST_CASE("residual orthogonality with ridge 0") {
  std::mt19937_64 gen(4);
  const Eigen::MatrixXd H = random_matrix(gen, 8, 30);
  const Eigen::MatrixXd Y = random_matrix(gen, 30, 3);
  const Eigen::MatrixXd W2 = train_least_squares(H, Y, 0.0);
  CHECK(((W2 * H - Y.transpose()) * H.transpose()).norm() <= 1e-8 * Y.norm());
}

TEST_CASE("mse") {
  ShallowNetD net;
  net.W1 = Eigen::MatrixXd::Ones(1, 1);
  net.b1 = Eigen::VectorXd::Zero(1);
  net.W2 = Eigen::MatrixXd::Ones(1, 1);
  net.b2 = Eigen::VectorXd::Zero(1);
  net.hidden_activation = Activation::identity;
  CHECK(mse(net, Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Constant(1, 1, 3.0)) == 4.0);
  CHECK(mse(net, Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1)) == 0.0);

  std::mt19937_64 gen(5);
  ElmConfig cfg;
  cfg.n_hidden = 12;
  const Eigen::MatrixXd U = random_matrix(gen, 40, 2);
  Eigen::MatrixXd Y(40, 2);
  Y.col(0) = U.col(0).array().sin();
  Y.col(1) = U.col(1).array().square();
  const ShallowNetD trained = train_elm(init_random(cfg, 2, 2), U, Y, 1e-10);
  const double e = mse(trained, U, Y);
  CHECK(e >= 0);
  CHECK(e == doctest::Approx((predict(trained, U) - Y.transpose()).squaredNorm() / 80.0).epsilon(1e-14));
  CHECK(e < mse(init_random(cfg, 2, 2), U, Y));
}
