#include "robustelm/elm.hpp"

#include "robustelm/errors.hpp"
#include "robustelm/random.hpp"

namespace robustelm {

ShallowNetD init_random(const ElmConfig& cfg, Eigen::Index n_inputs, Eigen::Index n_outputs) {
  if (cfg.n_hidden < 1 || n_inputs < 1 || n_outputs < 1) throw DimensionError("init_random: dimensions must be >= 1");
  if (cfg.ridge < 0) throw std::invalid_argument("init_random: ridge must be nonnegative");
  Rng rng(cfg.seed);
  const double lo = cfg.weight_range.lo();
  const double hi = cfg.weight_range.hi();

  ShallowNetD net;
  net.W1.resize(cfg.n_hidden, n_inputs);
  for (Eigen::Index r = 0; r < net.W1.rows(); ++r)
    for (Eigen::Index c = 0; c < net.W1.cols(); ++c) net.W1(r, c) = rng.uniform(lo, hi);
  net.b1.resize(cfg.n_hidden);
  for (Eigen::Index r = 0; r < net.b1.size(); ++r) net.b1(r) = rng.uniform(lo, hi);
  net.W2 = Eigen::MatrixXd::Zero(n_outputs, cfg.n_hidden);
  net.b2 = Eigen::VectorXd::Zero(n_outputs);
  net.hidden_activation = cfg.activation;
  net.output_activation = Activation::identity;
  return net;
}

Eigen::MatrixXd point_features(const ShallowNetD& net, const Eigen::MatrixXd& inputs) {
  if (inputs.cols() != net.n_inputs())
    throw_shape("point_features inputs", inputs.rows(), net.n_inputs(), inputs.rows(), inputs.cols());
  Eigen::MatrixXd pre = net.W1 * inputs.transpose();
  pre.colwise() += net.b1;
  return activate(net.hidden_activation, pre);
}

Eigen::MatrixXd predict(const ShallowNetD& net, const Eigen::MatrixXd& inputs) {
  Eigen::MatrixXd out = net.W2 * point_features(net, inputs);
  out.colwise() += net.b2;
  return activate(net.output_activation, out);
}

Eigen::MatrixXd train_least_squares(const Eigen::MatrixXd& H, const Eigen::MatrixXd& Y, double ridge) {
  if (H.cols() == 0 || Y.rows() == 0) throw DataError("train_least_squares: empty data");
  if (Y.rows() != H.cols()) throw_shape("train_least_squares targets", H.cols(), Y.cols(), Y.rows(), Y.cols());
  if (!H.allFinite() || !Y.allFinite()) throw DataError("train_least_squares: non-finite entries");
  if (!(ridge >= 0)) throw std::invalid_argument("train_least_squares: ridge must be nonnegative");

  const Eigen::Index n1 = H.rows();
  const Eigen::Index N = H.cols();
  // Solve H^T W2^T = Y, stacked with sqrt(ridge) I W2^T = 0 when regularized.
  if (ridge == 0) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(H.transpose());
    return cod.solve(Y).transpose();
  }
  Eigen::MatrixXd A(N + n1, n1);
  A.topRows(N) = H.transpose();
  A.bottomRows(n1) = std::sqrt(ridge) * Eigen::MatrixXd::Identity(n1, n1);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N + n1, Y.cols());
  B.topRows(N) = Y;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  return cod.solve(B).transpose();
}

ShallowNetD train_elm(const ShallowNetD& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                      double ridge) {
  ShallowNetD out = net;
  out.W2 = train_least_squares(point_features(net, inputs), targets, ridge);
  out.b2 = Eigen::VectorXd::Zero(out.W2.rows());
  out.output_activation = Activation::identity;
  return out;
}

double mse(const ShallowNetD& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) {
  if (inputs.rows() == 0) throw DataError("mse: empty data");
  if (targets.rows() != inputs.rows() || targets.cols() != net.n_outputs())
    throw_shape("mse targets", inputs.rows(), net.n_outputs(), targets.rows(), targets.cols());
  const Eigen::MatrixXd residual = predict(net, inputs) - targets.transpose();
  return residual.squaredNorm() / static_cast<double>(residual.size());
}

}  // namespace robustelm
