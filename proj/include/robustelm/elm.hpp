#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "robustelm/interval.hpp"
#include "robustelm/reach.hpp"

namespace robustelm {

struct ElmConfig {
  Eigen::Index n_hidden = 10;
  Activation activation = Activation::sigmoid;
  IntervalD weight_range{-1.0, 1.0};
  std::uint64_t seed = 0;
  double ridge = 1e-10;
};

/// Random hidden layer drawn uniformly from cfg.weight_range (W1 row-major,
/// then b1), zero output layer with identity activation.
ShallowNetD init_random(const ElmConfig& cfg, Eigen::Index n_inputs, Eigen::Index n_outputs);

/// n1 x N matrix of hidden features, column i = phi1(W1 u_i + b1).
Eigen::MatrixXd point_features(const ShallowNetD& net, const Eigen::MatrixXd& inputs);

/// Network outputs as an n2 x N matrix.
Eigen::MatrixXd predict(const ShallowNetD& net, const Eigen::MatrixXd& inputs);

/// Output weights W2 (n2 x n1) minimizing ||W2 H - Y^T||_F^2 + ridge ||W2||_F^2.
/// ridge == 0 gives the minimum-norm least-squares solution.
Eigen::MatrixXd train_least_squares(const Eigen::MatrixXd& H, const Eigen::MatrixXd& Y, double ridge);

/// Fits W2 of a copy of `net` on (inputs, targets).
ShallowNetD train_elm(const ShallowNetD& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                      double ridge);

/// Mean over all N * n2 output coordinates of the squared error.
double mse(const ShallowNetD& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets);

}  // namespace robustelm
