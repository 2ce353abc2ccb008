#pragma once

#include <random>

#include <Eigen/Dense>

#include "robustelm/interval.hpp"
#include "robustelm/reach.hpp"

namespace testing_support {

using robustelm::Activation;
using robustelm::IntervalVectorD;
using robustelm::ShallowNetD;

inline Eigen::MatrixXd random_matrix(std::mt19937_64& gen, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = u(gen);
  return m;
}

inline IntervalVectorD random_box(std::mt19937_64& gen, Eigen::Index n, double max_radius = 1.0) {
  std::uniform_real_distribution<double> c(-1.0, 1.0), r(0.0, max_radius);
  Eigen::VectorXd center(n), radius(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    center(i) = c(gen);
    radius(i) = r(gen);
  }
  return IntervalVectorD::around(center, radius);
}

inline Eigen::VectorXd sample_in(std::mt19937_64& gen, const IntervalVectorD& box) {
  Eigen::VectorXd v(box.size());
  for (Eigen::Index i = 0; i < box.size(); ++i) {
    std::uniform_real_distribution<double> u(box.lo()(i), box.hi()(i));
    v(i) = box.lo()(i) == box.hi()(i) ? box.lo()(i) : u(gen);
  }
  return v;
}

inline ShallowNetD random_net(std::mt19937_64& gen, Eigen::Index n0, Eigen::Index n1, Eigen::Index n2,
                              Activation hidden, Activation output = Activation::identity) {
  ShallowNetD net;
  net.W1 = random_matrix(gen, n1, n0, 2.0);
  net.b1 = random_matrix(gen, n1, 1);
  net.W2 = random_matrix(gen, n2, n1, 2.0);
  net.b2 = random_matrix(gen, n2, 1);
  net.hidden_activation = hidden;
  net.output_activation = output;
  return net;
}

}  // namespace testing_support
