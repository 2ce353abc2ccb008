#include "robustelm/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "robustelm/errors.hpp"

namespace robustelm::sdp {

void SparseSym::add(Eigen::Index r, Eigen::Index c, double value) {
  if (r < 0 || c < 0 || r >= dim_ || c >= dim_)
    throw DimensionError("SparseSym::add: index (" + std::to_string(r) + "," + std::to_string(c) +
                         ") outside dimension " + std::to_string(dim_));
  if (r > c) std::swap(r, c);
  entries_.push_back({r, c, value});
}

SparseSym SparseSym::from_dense(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) throw_shape("SparseSym::from_dense", m.rows(), m.rows(), m.rows(), m.cols());
  SparseSym out(m.rows());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r <= c; ++r) {
      if (std::abs(m(r, c) - m(c, r)) > tol) throw std::invalid_argument("SparseSym::from_dense: matrix not symmetric");
      if (m(r, c) != 0.0) out.entries_.push_back({r, c, m(r, c)});
    }
  }
  return out;
}

Eigen::MatrixXd SparseSym::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_, dim_);
  add_to(out, 1.0);
  return out;
}

void SparseSym::add_to(Eigen::MatrixXd& out, double scale) const {
  for (const auto& e : entries_) {
    out(e.row, e.col) += scale * e.value;
    if (e.row != e.col) out(e.col, e.row) += scale * e.value;
  }
}

void SparseSym::compress() {
  std::map<std::pair<Eigen::Index, Eigen::Index>, double> merged;
  for (const auto& e : entries_) merged[{e.row, e.col}] += e.value;
  entries_.clear();
  for (const auto& [pos, v] : merged)
    if (v != 0.0) entries_.push_back({pos.first, pos.second, v});
}

std::string_view status_name(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::max_iters: return "max_iters";
    case Status::numerical_failure: return "numerical_failure";
  }
  return "numerical_failure";
}

namespace {

struct BlockInfo {
  Eigen::Index offset;
  Eigen::Index size;
  bool diagonal;
};

std::vector<BlockInfo> make_blocks(const LmiProblem& p) {
  std::vector<BlockInfo> blocks;
  if (p.block_structure.empty()) {
    blocks.push_back({0, p.dim, false});
    return blocks;
  }
  Eigen::Index offset = 0;
  for (int b : p.block_structure) {
    const Eigen::Index size = std::abs(b);
    blocks.push_back({offset, size, b < 0});
    offset += size;
  }
  return blocks;
}

/// Entry of F_i in block-local coordinates, both triangles expanded.
struct LocalEntry {
  int block;
  Eigen::Index r;
  Eigen::Index c;
  double v;
};

/// Block-diagonal symmetric matrix; diagonal blocks hold a k x 1 vector.
struct BlockMat {
  std::vector<Eigen::MatrixXd> b;
};

class Structure {
 public:
  explicit Structure(const LmiProblem& p) : blocks_(make_blocks(p)), block_of_(p.dim) {
    for (int k = 0; k < static_cast<int>(blocks_.size()); ++k)
      for (Eigen::Index t = 0; t < blocks_[k].size; ++t) block_of_[blocks_[k].offset + t] = k;
    f0_ = localize(p.F0);
    fi_.reserve(p.F.size());
    for (const auto& f : p.F) fi_.push_back(localize(f));
  }

  const std::vector<BlockInfo>& blocks() const { return blocks_; }
  const std::vector<LocalEntry>& f0() const { return f0_; }
  const std::vector<LocalEntry>& fi(std::size_t i) const { return fi_[i]; }
  std::size_t nvars() const { return fi_.size(); }

  Eigen::Index total_dim() const {
    Eigen::Index d = 0;
    for (const auto& b : blocks_) d += b.size;
    return d;
  }

  BlockMat zero() const {
    BlockMat m;
    for (const auto& b : blocks_) m.b.push_back(b.diagonal ? Eigen::MatrixXd::Zero(b.size, 1)
                                                            : Eigen::MatrixXd::Zero(b.size, b.size));
    return m;
  }
  BlockMat identity(double scale) const {
    BlockMat m;
    for (const auto& b : blocks_)
      m.b.push_back(b.diagonal ? Eigen::MatrixXd::Constant(b.size, 1, scale)
                               : Eigen::MatrixXd(scale * Eigen::MatrixXd::Identity(b.size, b.size)));
    return m;
  }

  void add(BlockMat& m, const std::vector<LocalEntry>& entries, double scale) const {
    for (const auto& e : entries) {
      if (blocks_[e.block].diagonal)
        m.b[e.block](e.r, 0) += scale * e.v;
      else
        m.b[e.block](e.r, e.c) += scale * e.v;
    }
  }

  BlockMat evaluate(const Eigen::VectorXd& x) const {
    BlockMat m = zero();
    add(m, f0_, 1.0);
    for (std::size_t i = 0; i < fi_.size(); ++i)
      if (x(i) != 0.0) add(m, fi_[i], x(i));
    return m;
  }

  double dot(const std::vector<LocalEntry>& entries, const BlockMat& m) const {
    double s = 0;
    for (const auto& e : entries) s += e.v * (blocks_[e.block].diagonal ? m.b[e.block](e.r, 0) : m.b[e.block](e.r, e.c));
    return s;
  }

 private:
  std::vector<LocalEntry> localize(const SparseSym& s) const {
    std::vector<LocalEntry> out;
    for (const auto& e : s.entries()) {
      const int kb = block_of_[e.row];
      if (block_of_[e.col] != kb) throw std::invalid_argument("LmiProblem: entry crosses block boundary");
      const Eigen::Index r = e.row - blocks_[kb].offset;
      const Eigen::Index c = e.col - blocks_[kb].offset;
      if (blocks_[kb].diagonal && r != c) throw std::invalid_argument("LmiProblem: off-diagonal entry in diagonal block");
      out.push_back({kb, r, c, e.value});
      if (r != c) out.push_back({kb, c, r, e.value});
    }
    return out;
  }

  std::vector<BlockInfo> blocks_;
  std::vector<int> block_of_;
  std::vector<LocalEntry> f0_;
  std::vector<std::vector<LocalEntry>> fi_;
};

double inner(const BlockMat& a, const BlockMat& b) {
  double s = 0;
  for (std::size_t k = 0; k < a.b.size(); ++k) s += a.b[k].cwiseProduct(b.b[k]).sum();
  return s;
}

double frob(const BlockMat& a) { return std::sqrt(inner(a, a)); }

void axpy(BlockMat& y, double alpha, const BlockMat& x) {
  for (std::size_t k = 0; k < y.b.size(); ++k) y.b[k] += alpha * x.b[k];
}

BlockMat minus(const BlockMat& a, const BlockMat& b) {
  BlockMat out = a;
  axpy(out, -1.0, b);
  return out;
}

/// Largest alpha in (0, inf] with M + alpha dM >= 0, for M > 0.
double max_step(const std::vector<BlockInfo>& blocks, const BlockMat& m, const BlockMat& dm) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    double lmin;
    if (blocks[k].diagonal) {
      lmin = (dm.b[k].array() / m.b[k].array()).minCoeff();
    } else {
      Eigen::LLT<Eigen::MatrixXd> llt(m.b[k]);
      if (llt.info() != Eigen::Success) return 0.0;
      Eigen::MatrixXd t = llt.matrixL().solve(dm.b[k]);
      Eigen::MatrixXd u = llt.matrixL().solve(t.transpose());
      u = 0.5 * (u + u.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(u, Eigen::EigenvaluesOnly);
      lmin = es.eigenvalues()(0);
    }
    if (lmin < 0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

/// NT scaling W (W S W = X) and S^{-1}, per block.
bool nt_scaling(const std::vector<BlockInfo>& blocks, const BlockMat& S, const BlockMat& X, BlockMat& W,
                BlockMat& Sinv) {
  W.b.resize(blocks.size());
  Sinv.b.resize(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (blocks[k].diagonal) {
      if ((S.b[k].array() <= 0).any() || (X.b[k].array() <= 0).any()) return false;
      W.b[k] = (X.b[k].array() / S.b[k].array()).sqrt().matrix();
      Sinv.b[k] = S.b[k].cwiseInverse();
      continue;
    }
    const Eigen::Index n = blocks[k].size;
    Eigen::LLT<Eigen::MatrixXd> llt(S.b[k]);
    if (llt.info() != Eigen::Success) return false;
    const Eigen::MatrixXd L = llt.matrixL();
    Eigen::MatrixXd M = L.transpose() * X.b[k] * L;
    M = 0.5 * (M + M.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success || es.eigenvalues()(0) <= 0) return false;
    const Eigen::MatrixXd QD = es.eigenvectors() * es.eigenvalues().array().sqrt().sqrt().matrix().asDiagonal();
    const Eigen::MatrixXd G = L.transpose().triangularView<Eigen::Upper>().solve(QD);
    W.b[k] = G * G.transpose();
    const Eigen::MatrixXd Linv = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
    Sinv.b[k] = Linv.transpose() * Linv;
  }
  return true;
}

/// W A W per block.
BlockMat congruence(const std::vector<BlockInfo>& blocks, const BlockMat& W, const BlockMat& A) {
  BlockMat out;
  out.b.resize(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (blocks[k].diagonal) {
      out.b[k] = W.b[k].cwiseProduct(A.b[k]).cwiseProduct(W.b[k]);
    } else {
      Eigen::MatrixXd t = W.b[k] * A.b[k] * W.b[k];
      out.b[k] = 0.5 * (t + t.transpose());
    }
  }
  return out;
}

/// Schur complement matrix M_ij = tr(F_i W F_j W).
Eigen::MatrixXd schur_matrix(const Structure& st, const BlockMat& W) {
  const auto n = static_cast<Eigen::Index>(st.nvars());
  const auto& blocks = st.blocks();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& fi = st.fi(i);
    for (Eigen::Index j = i; j < n; ++j) {
      const auto& fj = st.fi(j);
      double s = 0;
      for (const auto& e : fi) {
        const Eigen::MatrixXd& w = W.b[e.block];
        if (blocks[e.block].diagonal) {
          for (const auto& f : fj)
            if (f.block == e.block && f.r == e.r) s += e.v * f.v * w(e.r, 0) * w(e.r, 0);
        } else {
          for (const auto& f : fj)
            if (f.block == e.block) s += e.v * f.v * w(e.c, f.r) * w(f.c, e.r);
        }
      }
      M(i, j) = s;
      M(j, i) = s;
    }
  }
  return M;
}

class SchurSolver {
 public:
  bool factor(const Eigen::MatrixXd& M) {
    llt_.compute(M);
    use_ldlt_ = llt_.info() != Eigen::Success;
    if (!use_ldlt_) return true;
    ldlt_.compute(M);
    return ldlt_.info() == Eigen::Success && ldlt_.isPositive();
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    if (use_ldlt_) return ldlt_.solve(rhs);
    return llt_.solve(rhs);
  }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  bool use_ldlt_ = false;
};

double min_eig_dense(const Eigen::MatrixXd& F) {
  if (F.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(F, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double min_eig_blocks(const std::vector<BlockInfo>& blocks, const BlockMat& m) {
  double lmin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (blocks[k].size == 0) continue;
    lmin = std::min(lmin, blocks[k].diagonal ? m.b[k].minCoeff() : min_eig_dense(m.b[k]));
  }
  return lmin;
}

}  // namespace

void LmiProblem::validate() const {
  if (dim < 1) throw DimensionError("LmiProblem: dim must be >= 1");
  if (static_cast<Eigen::Index>(F.size()) != cost.size())
    throw_size("LmiProblem constraint matrices", cost.size(), static_cast<Eigen::Index>(F.size()));
  if (!cost.allFinite()) throw std::invalid_argument("LmiProblem: non-finite cost");
  auto check = [this](const SparseSym& s, const std::string& what) {
    if (s.dim() != dim) throw_shape("LmiProblem " + what, dim, dim, s.dim(), s.dim());
    for (const auto& e : s.entries())
      if (!std::isfinite(e.value)) throw std::invalid_argument("LmiProblem: non-finite entry in " + what);
  };
  check(F0, "F0");
  for (std::size_t i = 0; i < F.size(); ++i) check(F[i], "F" + std::to_string(i + 1));
  if (!block_structure.empty()) {
    Eigen::Index total = 0;
    for (int b : block_structure) {
      if (b == 0) throw std::invalid_argument("LmiProblem: zero block size");
      total += std::abs(b);
    }
    if (total != dim) throw_size("LmiProblem block_structure total", dim, total);
  }
  Structure{*this};  // rejects entries that straddle blocks
}

Eigen::MatrixXd LmiProblem::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != nvars()) throw_size("LmiProblem::evaluate x", nvars(), x.size());
  Eigen::MatrixXd out = F0.dense();
  for (Eigen::Index i = 0; i < nvars(); ++i)
    if (x(i) != 0.0) F[i].add_to(out, x(i));
  return out;
}

std::pair<bool, double> check_feasibility(const LmiProblem& p, const Eigen::VectorXd& x, double slack) {
  const double lmin = min_eig_dense(p.evaluate(x));
  return {lmin >= -slack, lmin};
}

SdpSolution solve(const LmiProblem& p, const SolverOptions& opts, const std::optional<Eigen::VectorXd>& warm_start) {
  p.validate();
  if (!(opts.tol_gap > 0) || !(opts.tol_feas > 0)) throw std::invalid_argument("SolverOptions: tolerances must be > 0");
  if (!(opts.step_fraction > 0 && opts.step_fraction < 1))
    throw std::invalid_argument("SolverOptions: step_fraction must lie in (0,1)");
  if (warm_start && warm_start->size() != p.nvars()) throw_size("solve warm_start", p.nvars(), warm_start->size());

  const Structure st(p);
  const auto& blocks = st.blocks();
  const Eigen::Index n = p.nvars();
  const double dtot = static_cast<double>(st.total_dim());

  Eigen::VectorXd x = warm_start ? *warm_start : Eigen::VectorXd::Zero(n);
  BlockMat S = st.evaluate(x);
  {
    const double lmin = min_eig_blocks(blocks, S);
    if (!(lmin > 0)) axpy(S, 1.0, st.identity(std::abs(lmin) + 1.0));
  }

  double f0_norm = 0;
  {
    BlockMat f0 = st.zero();
    st.add(f0, st.f0(), 1.0);
    f0_norm = frob(f0);
  }
  double xi = std::max(10.0, std::sqrt(dtot));
  for (Eigen::Index i = 0; i < n; ++i) {
    double fn = 0;
    for (const auto& e : st.fi(i)) fn += e.v * e.v;
    xi = std::max(xi, std::sqrt(dtot) * (1.0 + std::abs(p.cost(i))) / (1.0 + std::sqrt(fn)));
  }
  BlockMat X = st.identity(xi);
  const double cost_norm = p.cost.norm();

  SdpSolution sol;
  sol.status = Status::max_iters;
  auto finish = [&](Status status) {
    sol.status = status;
    sol.x = x;
    sol.objective = p.cost.dot(x);
    sol.dual_objective = -st.dot(st.f0(), X);
    sol.duality_gap = sol.objective - sol.dual_objective;
    sol.min_eig = check_feasibility(p, x, 0.0).second;
    return sol;
  };

  for (int it = 0; it <= opts.max_iters; ++it) {
    const BlockMat Fx = st.evaluate(x);
    const BlockMat Rp = minus(Fx, S);
    Eigen::VectorXd rd(n);
    for (Eigen::Index i = 0; i < n; ++i) rd(i) = p.cost(i) - st.dot(st.fi(i), X);
    const double sx = inner(S, X);
    const double mu = sx / dtot;
    const double pobj = p.cost.dot(x);
    const double dobj = -st.dot(st.f0(), X);
    sol.primal_infeasibility = frob(Rp) / (1.0 + f0_norm);
    sol.dual_infeasibility = rd.norm() / (1.0 + cost_norm);
    sol.iterations = it;
    if (it > 0) sol.history.push_back(pobj);

    const double gap_tol = opts.tol_gap * (1.0 + std::abs(pobj));
    if (sol.primal_infeasibility <= opts.tol_feas && sol.dual_infeasibility <= opts.tol_feas &&
        std::abs(pobj - dobj) <= gap_tol && sx <= gap_tol) {
      finish(Status::optimal);
      const double fx_norm = frob(Fx);
      if (sol.min_eig < -opts.tol_feas * (1.0 + fx_norm)) sol.status = Status::numerical_failure;
      return sol;
    }
    if (it == opts.max_iters) break;

    BlockMat W, Sinv;
    if (!nt_scaling(blocks, S, X, W, Sinv)) return finish(Status::numerical_failure);
    SchurSolver schur;
    if (!schur.factor(schur_matrix(st, W))) return finish(Status::numerical_failure);

    const bool primal_feasible = sol.primal_infeasibility == 0.0;
    const BlockMat WRpW = primal_feasible ? st.zero() : congruence(blocks, W, Rp);

    auto direction = [&](const BlockMat& Rc, Eigen::VectorXd& dx, BlockMat& dS, BlockMat& dX) {
      const BlockMat T = minus(Rc, WRpW);
      Eigen::VectorXd rhs(n);
      for (Eigen::Index i = 0; i < n; ++i) rhs(i) = st.dot(st.fi(i), T) - rd(i);
      dx = schur.solve(rhs);
      dS = Rp;
      for (Eigen::Index i = 0; i < n; ++i)
        if (dx(i) != 0.0) st.add(dS, st.fi(i), dx(i));
      dX = minus(Rc, congruence(blocks, W, dS));
    };

    // Predictor (affine scaling).
    BlockMat Rc = X;
    for (auto& b : Rc.b) b = -b;
    Eigen::VectorXd dx;
    BlockMat dS, dX;
    direction(Rc, dx, dS, dX);
    if (!dx.allFinite()) return finish(Status::numerical_failure);
    double ap = std::min(1.0, max_step(blocks, S, dS));
    double ad = std::min(1.0, max_step(blocks, X, dX));
    BlockMat S_aff = S, X_aff = X;
    axpy(S_aff, ap, dS);
    axpy(X_aff, ad, dX);
    const double mu_aff = inner(S_aff, X_aff) / dtot;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector with centering sigma * mu.
    Rc = Sinv;
    for (auto& b : Rc.b) b *= sigma * mu;
    axpy(Rc, -1.0, X);
    direction(Rc, dx, dS, dX);
    if (!dx.allFinite()) return finish(Status::numerical_failure);
    ap = std::min(1.0, opts.step_fraction * max_step(blocks, S, dS));
    ad = std::min(1.0, opts.step_fraction * max_step(blocks, X, dX));
    if (ap < 1e-12 && ad < 1e-12) return finish(Status::numerical_failure);

    x += ap * dx;
    axpy(S, ap, dS);
    axpy(X, ad, dX);
    if (ap == 1.0) S = st.evaluate(x);
  }
  return finish(Status::max_iters);
}

}  // namespace robustelm::sdp
