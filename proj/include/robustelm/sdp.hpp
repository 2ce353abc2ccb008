#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace robustelm::sdp {

/// Upper-triangle entry (row <= col) of a sparse symmetric matrix.
struct SymEntry {
  Eigen::Index row;
  Eigen::Index col;
  double value;
};

/// Sparse symmetric matrix kept as its upper triangle. Repeated positions
/// accumulate.
class SparseSym {
 public:
  SparseSym() = default;
  explicit SparseSym(Eigen::Index dim) : dim_(dim) {}

  /// Adds value at (r, c) and, implicitly, at (c, r).
  void add(Eigen::Index r, Eigen::Index c, double value);
  /// Rejects matrices that are not symmetric to `tol`.
  static SparseSym from_dense(const Eigen::MatrixXd& m, double tol = 1e-12);

  Eigen::Index dim() const { return dim_; }
  const std::vector<SymEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  Eigen::MatrixXd dense() const;
  /// out += scale * this
  void add_to(Eigen::MatrixXd& out, double scale) const;
  /// Merge duplicate positions and drop exact zeros.
  void compress();

 private:
  Eigen::Index dim_ = 0;
  std::vector<SymEntry> entries_;
};

/// minimize cost^T x subject to F(x) = F0 + sum_i x_i F_i >= 0 (PSD).
///
/// block_structure follows the SDPA convention: a positive entry k is a dense
/// k x k diagonal block, a negative entry -k is a k x k diagonal-matrix block.
/// Empty means one dense block of size dim.
struct LmiProblem {
  Eigen::Index dim = 0;
  Eigen::VectorXd cost;
  SparseSym F0;
  std::vector<SparseSym> F;
  std::vector<int> block_structure;

  Eigen::Index nvars() const { return cost.size(); }
  /// Throws DimensionError / std::invalid_argument on inconsistent data.
  void validate() const;
  Eigen::MatrixXd evaluate(const Eigen::VectorXd& x) const;
};

struct SolverOptions {
  double tol_gap = 1e-7;
  double tol_feas = 1e-8;
  int max_iters = 200;
  double step_fraction = 0.98;
};

enum class Status { optimal, max_iters, numerical_failure };

std::string_view status_name(Status s);

struct SdpSolution {
  Eigen::VectorXd x;
  double objective = 0;
  double dual_objective = 0;
  Status status = Status::numerical_failure;
  int iterations = 0;
  /// Smallest eigenvalue of F(x).
  double min_eig = 0;
  /// cost^T x + tr(F0 Z) for the final dual matrix Z.
  double duality_gap = 0;
  double primal_infeasibility = 0;
  double dual_infeasibility = 0;
  /// Primal objective after each iteration.
  std::vector<double> history;
};

/// Infeasible-start primal-dual path-following interior-point method with
/// Nesterov-Todd scaling and a Mehrotra-style centering parameter.
///
/// A warm start with F(warm_start) > 0 is used as the initial primal point.
/// Otherwise (or if the warm start is not strictly feasible) the initial slack
/// is F(x0) shifted by (|min_eig| + 1) I, and the shift is driven to zero as
/// the primal residual.
SdpSolution solve(const LmiProblem& p, const SolverOptions& opts = {},
                  const std::optional<Eigen::VectorXd>& warm_start = std::nullopt);

/// (min_eig(F(x)) >= -slack, min_eig(F(x))).
std::pair<bool, double> check_feasibility(const LmiProblem& p, const Eigen::VectorXd& x, double slack);

/// Sparse triplet text dump:
///   lmi-triplets 1
///   <dim> <nvars>
///   blocks <count> <sizes...>
///   cost <c_1> ... <c_nvars>
///   <matrix-index> <row> <col> <value>     (one line per upper-triangle entry)
/// matrix-index 0 is F0 and i is F_i; rows and columns are 0-based.
void write_triplets(std::ostream& os, const LmiProblem& p);
LmiProblem read_triplets(std::istream& is);

}  // namespace robustelm::sdp
