#include "robustelm/robust.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "robustelm/elm.hpp"
#include "robustelm/errors.hpp"

namespace robustelm {

Eigen::MatrixXd DeviationDecomposition::at(const Eigen::VectorXd& tau) const {
  if (tau.size() != static_cast<Eigen::Index>(devs.size()))
    throw_size("DeviationDecomposition::at tau", static_cast<Eigen::Index>(devs.size()), tau.size());
  Eigen::MatrixXd H = H0;
  for (std::size_t k = 0; k < devs.size(); ++k) H(devs[k].hidden, devs[k].sample) += tau(k) * devs[k].halfwidth;
  return H;
}

DeviationDecomposition decompose(const IntervalMatrixD& H) {
  DeviationDecomposition dec;
  dec.H0 = H.center();
  const Eigen::MatrixXd half = H.radius();
  for (Eigen::Index i = 0; i < H.cols(); ++i)
    for (Eigen::Index j = 0; j < H.rows(); ++j)
      if (half(j, i) >= kHalfwidthCutoff) dec.devs.push_back({i, j, half(j, i)});
  return dec;
}

Eigen::MatrixXd RobustLmi::w2_from(const Eigen::VectorXd& x) const {
  if (x.size() != problem.nvars()) throw_size("RobustLmi::w2_from", problem.nvars(), x.size());
  Eigen::MatrixXd W2 = Eigen::MatrixXd::Zero(n_outputs, n_hidden);
  const auto na = static_cast<Eigen::Index>(active_hidden.size());
  for (Eigen::Index p = 0; p < n_outputs; ++p)
    for (Eigen::Index a = 0; a < na; ++a) W2(p, active_hidden[a]) = x(w2_offset() + p * na + a);
  return W2;
}

Eigen::VectorXd RobustLmi::pack(double gamma, const Eigen::VectorXd& lambdas, const Eigen::MatrixXd& W2,
                                const Eigen::VectorXd& sample_gammas) const {
  if (lambdas.size() != n_lambda) throw_size("RobustLmi::pack lambdas", n_lambda, lambdas.size());
  if (W2.rows() != n_outputs || W2.cols() != n_hidden)
    throw_shape("RobustLmi::pack W2", n_outputs, n_hidden, W2.rows(), W2.cols());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(problem.nvars());
  x(gamma_index()) = gamma;
  x.segment(1, n_lambda) = lambdas;
  const auto na = static_cast<Eigen::Index>(active_hidden.size());
  for (Eigen::Index p = 0; p < n_outputs; ++p)
    for (Eigen::Index a = 0; a < na; ++a) x(w2_offset() + p * na + a) = W2(p, active_hidden[a]);
  if (form == LmiForm::per_sample) {
    if (sample_gammas.size() != n_samples) throw_size("RobustLmi::pack sample_gammas", n_samples, sample_gammas.size());
    x.segment(sample_gamma_offset(), n_samples) = sample_gammas;
  }
  return x;
}

RobustLmi assemble_lmi(const DeviationDecomposition& dec, const Eigen::MatrixXd& Y, Eigen::Index n_outputs,
                       const RobustTrainConfig& cfg) {
  if (dec.devs.empty()) throw NoUncertaintyError("assemble_lmi: no deviations; use train_least_squares instead");
  if (n_outputs < 1) throw DimensionError("assemble_lmi: n_outputs must be >= 1");
  const Eigen::Index n1 = dec.n_hidden();
  const Eigen::Index N = dec.n_samples();
  if (Y.rows() != N || Y.cols() != n_outputs) throw_shape("assemble_lmi targets", N, n_outputs, Y.rows(), Y.cols());
  if (!(cfg.lambda_floor >= 0)) throw std::invalid_argument("assemble_lmi: lambda_floor must be nonnegative");

  RobustLmi out;
  out.form = cfg.form;
  out.n_hidden = n1;
  out.n_outputs = n_outputs;
  out.n_samples = N;
  const auto m = static_cast<Eigen::Index>(dec.devs.size());
  const bool split = cfg.form == LmiForm::per_sample;

  std::vector<bool> has_dev(n1, false);
  std::vector<Eigen::Index> devs_of_sample(N, 0);
  Eigen::Index prev = -1;
  for (const auto& d : dec.devs) {
    if (d.sample < 0 || d.sample >= N || d.hidden < 0 || d.hidden >= n1 || !(d.halfwidth >= 0))
      throw std::invalid_argument("assemble_lmi: malformed deviation");
    const Eigen::Index flat = d.sample * n1 + d.hidden;
    if (flat <= prev) throw std::invalid_argument("assemble_lmi: deviations must be sorted by (sample, hidden)");
    prev = flat;
    has_dev[d.hidden] = true;
    ++devs_of_sample[d.sample];
  }
  std::vector<Eigen::Index> active_pos(n1, -1);
  for (Eigen::Index j = 0; j < n1; ++j) {
    if (has_dev[j] || dec.H0.row(j).any()) {
      active_pos[j] = static_cast<Eigen::Index>(out.active_hidden.size());
      out.active_hidden.push_back(j);
    }
  }

  out.lambda_of_dev.resize(m);
  if (cfg.shared_lambda) {
    std::vector<Eigen::Index> lambda_of_hidden(n1, -1);
    for (Eigen::Index j = 0; j < n1; ++j)
      if (has_dev[j]) lambda_of_hidden[j] = out.n_lambda++;
    for (Eigen::Index k = 0; k < m; ++k) out.lambda_of_dev[k] = lambda_of_hidden[dec.devs[k].hidden];
  } else {
    out.n_lambda = m;
    for (Eigen::Index k = 0; k < m; ++k) out.lambda_of_dev[k] = k;
  }

  // Row layout. In the monolithic form there is one "sample group" sharing
  // row 0; in the per-sample form group i owns its own gamma_i row.
  std::vector<Eigen::Index> head(N), dev_row(m), res_base(N);
  std::vector<int> blocks;
  Eigen::Index row = 0;
  if (split) {
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < N; ++i) {
      head[i] = row++;
      for (Eigen::Index t = 0; t < devs_of_sample[i]; ++t) dev_row[k++] = row++;
      res_base[i] = row;
      row += n_outputs;
      blocks.push_back(static_cast<int>(row - head[i]));
    }
  } else {
    row = 1;
    for (Eigen::Index k = 0; k < m; ++k) dev_row[k] = row++;
    for (Eigen::Index i = 0; i < N; ++i) head[i] = 0;
    blocks.push_back(static_cast<int>(1 + m + N * n_outputs));
  }
  // Monolithic residual rows are ordered (p, i) so the block is vec(.) row-major.
  auto res_row = [&](Eigen::Index p, Eigen::Index i) {
    return split ? res_base[i] + p : 1 + m + p * N + i;
  };
  const Eigen::Index main = split ? row : 1 + m + N * n_outputs;
  const Eigen::Index lp_rows = (split ? 1 : 0) + out.n_lambda;
  const Eigen::Index total_split_row = main;
  auto bound_row = [&](Eigen::Index l) { return main + (split ? 1 : 0) + l; };
  blocks.push_back(-static_cast<int>(lp_rows));

  const auto na = static_cast<Eigen::Index>(out.active_hidden.size());
  const Eigen::Index nvars = 1 + out.n_lambda + n_outputs * na + (split ? N : 0);
  const Eigen::Index dim = main + lp_rows;

  sdp::LmiProblem& lmi = out.problem;
  lmi.dim = dim;
  lmi.cost = Eigen::VectorXd::Zero(nvars);
  lmi.cost(RobustLmi::gamma_index()) = 1.0;
  lmi.block_structure = blocks;
  lmi.F0 = sdp::SparseSym(dim);
  lmi.F.assign(nvars, sdp::SparseSym(dim));

  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index p = 0; p < n_outputs; ++p) {
      if (Y(i, p) != 0.0) lmi.F0.add(head[i], res_row(p, i), -Y(i, p));
      lmi.F0.add(res_row(p, i), res_row(p, i), 1.0);
    }
  for (Eigen::Index l = 0; l < out.n_lambda; ++l)
    if (cfg.lambda_floor != 0.0) lmi.F0.add(bound_row(l), bound_row(l), -cfg.lambda_floor);

  if (split) {
    lmi.F[RobustLmi::gamma_index()].add(total_split_row, total_split_row, 1.0);
    for (Eigen::Index i = 0; i < N; ++i) {
      auto& F = lmi.F[out.sample_gamma_offset() + i];
      F.add(head[i], head[i], 1.0);
      F.add(total_split_row, total_split_row, -1.0);
    }
  } else {
    lmi.F[RobustLmi::gamma_index()].add(0, 0, 1.0);
  }

  for (Eigen::Index k = 0; k < m; ++k) {
    auto& F = lmi.F[out.lambda_index(out.lambda_of_dev[k])];
    F.add(head[dec.devs[k].sample], head[dec.devs[k].sample], -1.0);
    F.add(dev_row[k], dev_row[k], 1.0);
  }
  for (Eigen::Index l = 0; l < out.n_lambda; ++l) lmi.F[out.lambda_index(l)].add(bound_row(l), bound_row(l), 1.0);

  for (Eigen::Index p = 0; p < n_outputs; ++p) {
    for (Eigen::Index a = 0; a < na; ++a) {
      const Eigen::Index q = out.active_hidden[a];
      auto& F = lmi.F[out.w2_offset() + p * na + a];
      for (Eigen::Index i = 0; i < N; ++i)
        if (dec.H0(q, i) != 0.0) F.add(head[i], res_row(p, i), dec.H0(q, i));
    }
  }
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& d = dec.devs[k];
    const Eigen::Index a = active_pos[d.hidden];
    for (Eigen::Index p = 0; p < n_outputs; ++p)
      if (d.halfwidth != 0.0) lmi.F[out.w2_offset() + p * na + a].add(dev_row[k], res_row(p, d.sample), d.halfwidth);
  }
  for (auto& F : lmi.F) F.compress();
  lmi.F0.compress();
  return out;
}

double center_residual_sq(const Eigen::MatrixXd& W2, const DeviationDecomposition& dec, const Eigen::MatrixXd& Y) {
  if (W2.cols() != dec.n_hidden()) throw_shape("center_residual_sq W2", W2.rows(), dec.n_hidden(), W2.rows(), W2.cols());
  if (Y.rows() != dec.n_samples() || Y.cols() != W2.rows())
    throw_shape("center_residual_sq targets", dec.n_samples(), W2.rows(), Y.rows(), Y.cols());
  return (W2 * dec.H0 - Y.transpose()).squaredNorm();
}

double worst_case_residual_bruteforce(const Eigen::MatrixXd& W2, const DeviationDecomposition& dec,
                                      const Eigen::MatrixXd& Y) {
  const double center = center_residual_sq(W2, dec, Y);
  const std::size_t m = dec.devs.size();
  if (m == 0) return center;
  if (m > kMaxBruteforceDevs)
    throw std::invalid_argument("worst_case_residual_bruteforce: " + std::to_string(m) +
                                " deviations exceed the enumeration limit of " + std::to_string(kMaxBruteforceDevs) +
                                "; estimate the maximum by sampling tau instead");
  const Eigen::MatrixXd R0 = W2 * dec.H0 - Y.transpose();
  double best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    Eigen::MatrixXd R = R0;
    for (std::size_t k = 0; k < m; ++k) {
      const double tau = (mask >> k) & 1U ? 1.0 : -1.0;
      R.col(dec.devs[k].sample) += (tau * dec.devs[k].halfwidth) * W2.col(dec.devs[k].hidden);
    }
    best = std::max(best, R.squaredNorm());
  }
  return best;
}

namespace {

constexpr double kWarmRidge = 1e-10;

}  // namespace

Eigen::VectorXd warm_start(const RobustLmi& lmi, const DeviationDecomposition& dec, const Eigen::MatrixXd& Y,
                           const RobustTrainConfig& cfg) {
  const Eigen::MatrixXd W2 = train_least_squares(dec.H0, Y, kWarmRidge);
  double z_sq = 0;
  for (const auto& d : dec.devs) z_sq += d.halfwidth * d.halfwidth * W2.col(d.hidden).squaredNorm();
  // lambda - ||Z||^2 >= ||Z||^2 keeps the Schur complement of the identity
  // block positive definite.
  const double lambda0 = std::max(cfg.lambda_floor, 1e-3) + 2.0 * z_sq;
  const Eigen::VectorXd lambdas = Eigen::VectorXd::Constant(lmi.n_lambda, lambda0);
  if (lmi.form == LmiForm::monolithic) {
    const double omega11 = lambda0 * static_cast<double>(dec.devs.size());
    return lmi.pack(2.0 * (center_residual_sq(W2, dec, Y) + omega11) + 1.0, lambdas, W2);
  }
  // Same bound per sample, and slack 1 on sum(gamma_i) <= gamma.
  const Eigen::MatrixXd R = W2 * dec.H0 - Y.transpose();
  Eigen::VectorXd omega = Eigen::VectorXd::Zero(lmi.n_samples);
  for (const auto& d : dec.devs) omega(d.sample) += lambda0;
  const Eigen::VectorXd sample_gammas = 2.0 * (R.colwise().squaredNorm().transpose() + omega).array() + 1.0;
  return lmi.pack(sample_gammas.sum() + 1.0, lambdas, W2, sample_gammas);
}

RobustResult train_robust(const ShallowNetD& net, const UncertainDatasetD& data, const RobustTrainConfig& cfg) {
  net.validate();
  if (data.size() == 0) throw DataError("train_robust: empty data");
  if (data.targets.cols() != net.n_outputs())
    throw_shape("train_robust targets", data.size(), net.n_outputs(), data.targets.rows(), data.targets.cols());

  const DeviationDecomposition dec = decompose(hidden_interval_matrix(net, data));

  RobustResult result;
  result.net = net;
  result.net.b2 = Eigen::VectorXd::Zero(net.n_outputs());
  result.net.output_activation = Activation::identity;

  if (dec.devs.empty()) {
    result.W2 = train_least_squares(dec.H0, data.targets, 0.0);
    result.gamma = center_residual_sq(result.W2, dec, data.targets);
    result.least_squares_fallback = true;
    result.solver_report.status = sdp::Status::optimal;
    result.solver_report.objective = result.gamma;
    result.solver_report.dual_objective = result.gamma;
    result.net.W2 = result.W2;
    return result;
  }

  const RobustLmi lmi = assemble_lmi(dec, data.targets, net.n_outputs(), cfg);
  sdp::SdpSolution sol = sdp::solve(lmi.problem, cfg.solver, warm_start(lmi, dec, data.targets, cfg));
  if (sol.status != sdp::Status::optimal)
    throw SolverError("train_robust: SDP solver ended with status " + std::string(sdp::status_name(sol.status)) +
                          " after " + std::to_string(sol.iterations) + " iterations",
                      std::move(sol));
  result.W2 = lmi.w2_from(sol.x);
  result.gamma = sol.x(RobustLmi::gamma_index());
  result.lambdas = sol.x.segment(1, lmi.n_lambda);
  result.solver_report = std::move(sol);
  result.net.W2 = result.W2;
  return result;
}

}  // namespace robustelm
