#pragma once

#include <utility>

#include <Eigen/Dense>

#include "robustelm/errors.hpp"
#include "robustelm/interval.hpp"

namespace robustelm {

/// One-hidden-layer feedforward network x2 = phi2(W2 phi1(W1 x0 + b1) + b2).
template <typename Scalar>
struct ShallowNet {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix W1;  // n1 x n0
  Vector b1;  // n1
  Matrix W2;  // n2 x n1
  Vector b2;  // n2
  Activation hidden_activation = Activation::sigmoid;
  Activation output_activation = Activation::identity;

  Eigen::Index n_inputs() const { return W1.cols(); }
  Eigen::Index n_hidden() const { return W1.rows(); }
  Eigen::Index n_outputs() const { return W2.rows(); }

  void validate() const {
    if (W1.rows() < 1 || W1.cols() < 1 || W2.rows() < 1) throw DimensionError("ShallowNet: layer widths must be >= 1");
    if (b1.size() != W1.rows()) throw_size("ShallowNet b1", W1.rows(), b1.size());
    if (W2.cols() != W1.rows()) throw_shape("ShallowNet W2", W2.rows(), W1.rows(), W2.rows(), W2.cols());
    if (b2.size() != W2.rows()) throw_size("ShallowNet b2", W2.rows(), b2.size());
  }

  bool is_elm_form() const {
    return output_activation == Activation::identity && (b2.array() == Scalar(0)).all();
  }

  Vector hidden(const Vector& x0) const {
    if (x0.size() != n_inputs()) throw_size("ShallowNet input", n_inputs(), x0.size());
    return activate(hidden_activation, W1 * x0 + b1);
  }
  Vector forward(const Vector& x0) const { return activate(output_activation, W2 * hidden(x0) + b2); }
};

using ShallowNetD = ShallowNet<double>;

/// Point samples with per-sample, per-coordinate perturbation radii: sample i
/// is the box [u_i - delta_i, u_i + delta_i].
template <typename Scalar>
struct UncertainDataset {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix centers;  // N x n0
  Matrix deltas;   // N x n0, nonnegative
  Matrix targets;  // N x n2

  UncertainDataset() = default;
  UncertainDataset(Matrix u, Matrix d, Matrix y) : centers(std::move(u)), deltas(std::move(d)), targets(std::move(y)) {
    if (deltas.rows() != centers.rows() || deltas.cols() != centers.cols())
      throw_shape("UncertainDataset deltas", centers.rows(), centers.cols(), deltas.rows(), deltas.cols());
    if (targets.rows() != centers.rows())
      throw_shape("UncertainDataset targets", centers.rows(), targets.cols(), targets.rows(), targets.cols());
    if ((deltas.array() < Scalar(0)).any()) throw DataError("UncertainDataset: deltas must be nonnegative");
    if (!centers.allFinite() || !deltas.allFinite() || !targets.allFinite())
      throw DataError("UncertainDataset: non-finite entries");
  }
  /// Same radius on every sample and coordinate.
  static UncertainDataset uniform(Matrix u, Matrix y, Scalar delta) {
    Matrix d = Matrix::Constant(u.rows(), u.cols(), delta);
    return UncertainDataset(std::move(u), std::move(d), std::move(y));
  }

  Eigen::Index size() const { return centers.rows(); }
  IntervalVector<Scalar> box(Eigen::Index i) const {
    return IntervalVector<Scalar>::around(centers.row(i).transpose(), deltas.row(i).transpose());
  }
};

using UncertainDatasetD = UncertainDataset<double>;

/// Interval image of one affine + monotone activation layer. Each endpoint is
/// attained, so the box is the tightest one containing the true reach set.
template <typename DerivedW, typename DerivedB, typename Scalar = typename DerivedW::Scalar>
IntervalVector<Scalar> layer_reach(const Eigen::MatrixBase<DerivedW>& W, const Eigen::MatrixBase<DerivedB>& b,
                                   Activation a, const IntervalVector<Scalar>& x) {
  return apply_activation(a, interval_affine(W, b, x));
}

/// Hidden and output interval sets, propagated layer by layer.
template <typename Scalar>
std::pair<IntervalVector<Scalar>, IntervalVector<Scalar>> network_reach(const ShallowNet<Scalar>& net,
                                                                        const IntervalVector<Scalar>& x0) {
  if (x0.size() != net.n_inputs()) throw_size("network_reach input box", net.n_inputs(), x0.size());
  auto hidden = layer_reach(net.W1, net.b1, net.hidden_activation, x0);
  auto output = layer_reach(net.W2, net.b2, net.output_activation, hidden);
  return {std::move(hidden), std::move(output)};
}

/// n1 x N interval matrix whose column i bounds the hidden features of the
/// perturbed sample i.
template <typename Scalar>
IntervalMatrix<Scalar> hidden_interval_matrix(const ShallowNet<Scalar>& net, const UncertainDataset<Scalar>& data) {
  if (data.centers.cols() != net.n_inputs())
    throw_shape("hidden_interval_matrix centers", data.size(), net.n_inputs(), data.centers.rows(),
                data.centers.cols());
  using M = typename IntervalMatrix<Scalar>::Matrix;
  const Eigen::Index n1 = net.n_hidden();
  const Eigen::Index N = data.size();
  M lo(n1, N), hi(n1, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    const auto h = layer_reach(net.W1, net.b1, net.hidden_activation, data.box(i));
    lo.col(i) = h.lo();
    hi.col(i) = h.hi();
  }
  return IntervalMatrix<Scalar>(std::move(lo), std::move(hi));
}

/// Largest Euclidean norm, over samples, of the output box radius vector.
template <typename Scalar>
Scalar output_radius(const ShallowNet<Scalar>& net, const UncertainDataset<Scalar>& data) {
  Scalar best(0);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const auto out = network_reach(net, data.box(i)).second;
    best = std::max(best, out.radius().norm());
  }
  return best;
}

}  // namespace robustelm
