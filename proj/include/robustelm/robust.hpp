#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "robustelm/interval.hpp"
#include "robustelm/reach.hpp"
#include "robustelm/sdp.hpp"

namespace robustelm {

/// Halfwidth of hidden feature `hidden` on sample `sample`.
struct Deviation {
  Eigen::Index sample;
  Eigen::Index hidden;
  double halfwidth;
};

/// H = H0 + sum_k tau_k * halfwidth_k * E(hidden_k, sample_k), tau in [-1,1]^m.
/// Deviations are ordered by sample, then hidden unit.
struct DeviationDecomposition {
  Eigen::MatrixXd H0;  // n1 x N
  std::vector<Deviation> devs;

  Eigen::Index n_hidden() const { return H0.rows(); }
  Eigen::Index n_samples() const { return H0.cols(); }
  /// H0 + sum_k tau_k dev_k.
  Eigen::MatrixXd at(const Eigen::VectorXd& tau) const;
};

inline constexpr double kHalfwidthCutoff = 1e-14;

DeviationDecomposition decompose(const IntervalMatrixD& H);

/// The decomposition carries no uncertainty, so the robust problem is plain
/// least squares.
class NoUncertaintyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// How the robust LMI is laid out.
///  - monolithic: the single (1 + m + N n2)-dimensional block LMI.
///  - per_sample: the residual norm splits over samples, so the same
///    condition holds iff there are gamma_i with sum_i gamma_i <= gamma and,
///    per sample i, [[gamma_i - sum lambda_(i,.), 0, r_i^T], [0, diag, Z_i^T],
///    [r_i, Z_i, I]] >= 0. Same optimum, N blocks of size 1 + m_i + n2.
enum class LmiForm { per_sample, monolithic };

struct RobustTrainConfig {
  /// One multiplier per hidden unit, shared across samples.
  bool shared_lambda = false;
  LmiForm form = LmiForm::per_sample;
  double lambda_floor = 0.0;
  sdp::SolverOptions solver;
};

/// Assembled robust LMI together with the positions of each decision
/// variable: x = (gamma, lambda..., vec(W2) row-major over active hidden
/// units, [gamma_1 ... gamma_N for the per-sample form]).
struct RobustLmi {
  sdp::LmiProblem problem;
  LmiForm form = LmiForm::monolithic;
  Eigen::Index n_lambda = 0;
  Eigen::Index n_hidden = 0;
  Eigen::Index n_outputs = 0;
  Eigen::Index n_samples = 0;
  /// Hidden units whose W2 column is a decision variable. Units with zero
  /// center features and no deviations get a zero column.
  std::vector<Eigen::Index> active_hidden;
  /// Multiplier index of each deviation.
  std::vector<Eigen::Index> lambda_of_dev;

  static constexpr Eigen::Index gamma_index() { return 0; }
  Eigen::Index lambda_index(Eigen::Index l) const { return 1 + l; }
  Eigen::Index w2_offset() const { return 1 + n_lambda; }
  Eigen::Index sample_gamma_offset() const {
    return w2_offset() + n_outputs * static_cast<Eigen::Index>(active_hidden.size());
  }
  /// Scatter the W2 coordinates of x into an n2 x n1 matrix.
  Eigen::MatrixXd w2_from(const Eigen::VectorXd& x) const;
  /// Decision vector for the given point. sample_gammas is ignored by the
  /// monolithic form.
  Eigen::VectorXd pack(double gamma, const Eigen::VectorXd& lambdas, const Eigen::MatrixXd& W2,
                       const Eigen::VectorXd& sample_gammas = {}) const;
};

/// Block LMI
///   [ gamma - sum(lambda)   0          r0^T ]
///   [ 0                     diag(lam)  Z^T  ]  >= 0,   lambda >= lambda_floor
///   [ r0                    Z          I    ]
/// with r0 = vec(W2 H0 - Y^T) and column k of Z = vec(W2 H_k), laid out per
/// cfg.form. Throws NoUncertaintyError when dec has no deviations.
RobustLmi assemble_lmi(const DeviationDecomposition& dec, const Eigen::MatrixXd& Y, Eigen::Index n_outputs,
                       const RobustTrainConfig& cfg);

/// Strictly feasible starting point: least-squares W2, equal multipliers
/// large enough to dominate ||Z||^2, and gamma with a margin.
Eigen::VectorXd warm_start(const RobustLmi& lmi, const DeviationDecomposition& dec, const Eigen::MatrixXd& Y,
                           const RobustTrainConfig& cfg);

struct RobustResult {
  ShallowNetD net;
  Eigen::MatrixXd W2;
  /// Certified bound on the worst-case squared residual ||vec(W2 H - Y^T)||^2.
  double gamma = 0;
  Eigen::VectorXd lambdas;
  sdp::SdpSolution solver_report;
  /// True when the data had no uncertainty and least squares was used.
  bool least_squares_fallback = false;
};

/// Thrown when the SDP solver does not reach an optimal status.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, sdp::SdpSolution report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const sdp::SdpSolution& report() const { return report_; }

 private:
  sdp::SdpSolution report_;
};

/// Hidden interval matrix -> decomposition -> LMI -> SDP, writing the optimal
/// W2 into a copy of `net` (W1, b1 unchanged, b2 = 0).
RobustResult train_robust(const ShallowNetD& net, const UncertainDatasetD& data, const RobustTrainConfig& cfg);

/// ||vec(W2 H0 - Y^T)||^2.
double center_residual_sq(const Eigen::MatrixXd& W2, const DeviationDecomposition& dec, const Eigen::MatrixXd& Y);

inline constexpr std::size_t kMaxBruteforceDevs = 20;

/// Exact max over tau in {-1,+1}^m of ||vec(W2 (H0 + sum tau_k dev_k) - Y^T)||^2.
/// The objective is convex in tau, so a vertex attains the box maximum.
double worst_case_residual_bruteforce(const Eigen::MatrixXd& W2, const DeviationDecomposition& dec,
                                      const Eigen::MatrixXd& Y);

}  // namespace robustelm
