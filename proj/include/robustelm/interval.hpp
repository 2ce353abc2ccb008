#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

#include <Eigen/Dense>

#include "robustelm/errors.hpp"

namespace robustelm {

/// Closed, finite real interval [lo, hi]. Endpoints use plain floating point
/// (no outward rounding).
template <typename Scalar>
class Interval {
 public:
  Interval() = default;
  Interval(Scalar lo, Scalar hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
      throw std::invalid_argument("Interval: endpoints must be finite");
    if (lo > hi) throw std::invalid_argument("Interval: lo > hi");
  }
  static Interval point(Scalar v) { return Interval(v, v); }

  Scalar lo() const { return lo_; }
  Scalar hi() const { return hi_; }
  Scalar width() const { return hi_ - lo_; }
  Scalar center() const { return (lo_ + hi_) / Scalar(2); }
  Scalar radius() const { return (hi_ - lo_) / Scalar(2); }

  bool contains(Scalar v, Scalar slack = Scalar(0)) const { return v >= lo_ - slack && v <= hi_ + slack; }
  bool subset_of(const Interval& o) const { return lo_ >= o.lo_ && hi_ <= o.hi_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  Scalar lo_{0};
  Scalar hi_{0};
};

using IntervalD = Interval<double>;

/// Box in R^n stored as two endpoint vectors.
template <typename Scalar>
class IntervalVector {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  IntervalVector() = default;
  IntervalVector(Vector lo, Vector hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size()) throw_size("IntervalVector upper bound", lo_.size(), hi_.size());
    if (!lo_.allFinite() || !hi_.allFinite()) throw std::invalid_argument("IntervalVector: endpoints must be finite");
    if ((lo_.array() > hi_.array()).any()) throw std::invalid_argument("IntervalVector: lo > hi");
  }
  static IntervalVector point(const Vector& v) { return IntervalVector(v, v); }
  /// [c - r, c + r] with r >= 0 entrywise.
  static IntervalVector around(const Vector& center, const Vector& radius) {
    if ((radius.array() < Scalar(0)).any()) throw std::invalid_argument("IntervalVector: negative radius");
    return IntervalVector(center - radius, center + radius);
  }

  Eigen::Index size() const { return lo_.size(); }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  Interval<Scalar> operator[](Eigen::Index i) const { return Interval<Scalar>(lo_(i), hi_(i)); }

  Vector center() const { return (lo_ + hi_) / Scalar(2); }
  Vector radius() const { return (hi_ - lo_) / Scalar(2); }

  bool contains(const Vector& v, Scalar slack = Scalar(0)) const {
    return v.size() == size() && (v.array() >= lo_.array() - slack).all() && (v.array() <= hi_.array() + slack).all();
  }
  bool subset_of(const IntervalVector& o) const {
    return size() == o.size() && (lo_.array() >= o.lo_.array()).all() && (hi_.array() <= o.hi_.array()).all();
  }

 private:
  Vector lo_;
  Vector hi_;
};

using IntervalVectorD = IntervalVector<double>;

/// Entrywise-interval matrix. Both endpoint matrices are stored row-major,
/// which fixes the vec() order used by the robust formulation.
template <typename Scalar>
class IntervalMatrix {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  IntervalMatrix() = default;
  IntervalMatrix(Matrix lo, Matrix hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.rows() != hi_.rows() || lo_.cols() != hi_.cols())
      throw_shape("IntervalMatrix upper bound", lo_.rows(), lo_.cols(), hi_.rows(), hi_.cols());
    if (!lo_.allFinite() || !hi_.allFinite()) throw std::invalid_argument("IntervalMatrix: endpoints must be finite");
    if ((lo_.array() > hi_.array()).any()) throw std::invalid_argument("IntervalMatrix: lo > hi");
  }

  Eigen::Index rows() const { return lo_.rows(); }
  Eigen::Index cols() const { return lo_.cols(); }
  const Matrix& lo() const { return lo_; }
  const Matrix& hi() const { return hi_; }
  Interval<Scalar> operator()(Eigen::Index r, Eigen::Index c) const { return Interval<Scalar>(lo_(r, c), hi_(r, c)); }

  Matrix center() const { return (lo_ + hi_) / Scalar(2); }
  Matrix radius() const { return (hi_ - lo_) / Scalar(2); }

 private:
  Matrix lo_;
  Matrix hi_;
};

using IntervalMatrixD = IntervalMatrix<double>;

enum class Activation { sigmoid, tanh, relu, identity };

inline std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::sigmoid: return "sigmoid";
    case Activation::tanh: return "tanh";
    case Activation::relu: return "relu";
    case Activation::identity: return "identity";
  }
  return "identity";
}

inline Activation parse_activation(std::string_view name) {
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "tanh") return Activation::tanh;
  if (name == "relu") return Activation::relu;
  if (name == "identity" || name == "linear") return Activation::identity;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

/// Scalar activation. Every supported kind is monotone nondecreasing.
template <typename Scalar>
  requires std::is_floating_point_v<Scalar>
Scalar activate(Activation a, Scalar x) {
  using std::exp;
  using std::tanh;
  switch (a) {
    case Activation::sigmoid: return Scalar(1) / (Scalar(1) + exp(-x));
    case Activation::tanh: return tanh(x);
    case Activation::relu: return x > Scalar(0) ? x : Scalar(0);
    case Activation::identity: return x;
  }
  return x;
}

template <typename Derived>
auto activate(Activation a, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return x.unaryExpr([a](Scalar v) { return activate(a, v); });
}

/// Bounds of w * x for x in the interval: the sign of w picks which endpoint
/// gives the lower bound.
template <typename Scalar>
Interval<Scalar> signed_term_bounds(Scalar w, const Interval<Scalar>& x) {
  if (w >= Scalar(0)) return Interval<Scalar>(w * x.lo(), w * x.hi());
  return Interval<Scalar>(w * x.hi(), w * x.lo());
}

template <typename Scalar>
Interval<Scalar> apply_activation(Activation a, const Interval<Scalar>& x) {
  return Interval<Scalar>(activate(a, x.lo()), activate(a, x.hi()));
}

template <typename Scalar>
IntervalVector<Scalar> apply_activation(Activation a, const IntervalVector<Scalar>& x) {
  return IntervalVector<Scalar>(activate(a, x.lo()), activate(a, x.hi()));
}

/// Tight box of { W v + b : v in x }. Splitting W into its positive and
/// negative parts reproduces the per-term case analysis of signed_term_bounds.
template <typename DerivedW, typename DerivedB, typename Scalar = typename DerivedW::Scalar>
IntervalVector<Scalar> interval_affine(const Eigen::MatrixBase<DerivedW>& W, const Eigen::MatrixBase<DerivedB>& b,
                                       const IntervalVector<Scalar>& x) {
  if (W.cols() != x.size()) throw_shape("interval_affine weight matrix", W.rows(), x.size(), W.rows(), W.cols());
  if (b.size() != W.rows()) throw_size("interval_affine bias", W.rows(), b.size());
  const auto Wpos = W.cwiseMax(Scalar(0));
  const auto Wneg = W.cwiseMin(Scalar(0));
  typename IntervalVector<Scalar>::Vector lo = Wpos * x.lo() + Wneg * x.hi() + b;
  typename IntervalVector<Scalar>::Vector hi = Wpos * x.hi() + Wneg * x.lo() + b;
  return IntervalVector<Scalar>(std::move(lo), std::move(hi));
}

/// Corner of the box that attains the lower (upper == false) or upper bound of
/// row `row` of W v.
template <typename DerivedW, typename Scalar = typename DerivedW::Scalar>
typename IntervalVector<Scalar>::Vector sign_corner(const Eigen::MatrixBase<DerivedW>& W, Eigen::Index row,
                                                    const IntervalVector<Scalar>& x, bool upper) {
  typename IntervalVector<Scalar>::Vector v(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const bool nonneg = W(row, j) >= Scalar(0);
    v(j) = (nonneg == upper) ? x.hi()(j) : x.lo()(j);
  }
  return v;
}

}  // namespace robustelm
