#pragma once

#include <Eigen/Dense>

namespace robustelm {

/// Point samples: row i of `inputs` maps to row i of `targets`.
struct Dataset {
  Eigen::MatrixXd inputs;   // N x n0
  Eigen::MatrixXd targets;  // N x n2

  Eigen::Index size() const { return inputs.rows(); }
};

}  // namespace robustelm
