#include "robustelm/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "robustelm/errors.hpp"
#include "robustelm/format.hpp"

namespace robustelm {

std::string_view method_name(Method m) { return m == Method::elm ? "elm" : "robust"; }

Method parse_method(std::string_view name) {
  if (name == "elm") return Method::elm;
  if (name == "robust") return Method::robust;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

UncertainDatasetD make_uncertain(const Dataset& d, double delta, const std::optional<Eigen::VectorXd>& column_delta) {
  if (!(delta >= 0) || !std::isfinite(delta)) throw DataError("delta must be finite and >= 0");
  Eigen::MatrixXd deltas = Eigen::MatrixXd::Constant(d.inputs.rows(), d.inputs.cols(), delta);
  if (column_delta) {
    if (column_delta->size() != d.inputs.cols())
      throw_size("per-column delta", d.inputs.cols(), column_delta->size());
    deltas.rowwise() = column_delta->transpose();
  }
  return UncertainDatasetD(d.inputs, std::move(deltas), d.targets);
}

RunReport evaluate_model(const ShallowNetD& net, const Dataset& d, double delta,
                         const std::optional<Eigen::VectorXd>& column_delta) {
  RunReport r;
  r.radius = output_radius(net, make_uncertain(d, delta, column_delta));
  r.mse = mse(net, d.inputs, d.targets);
  return r;
}

TrainOutcome train_model(const Dataset& d, const TrainOptions& opts) {
  if (d.size() == 0) throw DataError("train_model: empty dataset");
  const auto t0 = std::chrono::steady_clock::now();
  const ShallowNetD init = init_random(opts.elm, d.inputs.cols(), d.targets.cols());

  TrainOutcome out;
  out.model.meta.seed = opts.elm.seed;
  out.model.meta.method = std::string(method_name(opts.method));
  out.model.meta.delta = opts.delta;
  if (opts.method == Method::elm) {
    out.model.net = train_elm(init, d.inputs, d.targets, opts.elm.ridge);
  } else {
    const RobustResult res = train_robust(init, make_uncertain(d, opts.delta, opts.column_delta), opts.robust);
    out.model.net = res.net;
    out.model.meta.gamma = res.gamma;
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  out.report = evaluate_model(out.model.net, d, opts.delta, opts.column_delta);
  out.report.method = out.model.meta.method;
  out.report.gamma = out.model.meta.gamma;
  out.report.wall_time = elapsed;
  auto& cfg = out.report.config;
  cfg.emplace_back("samples", std::to_string(d.size()));
  cfg.emplace_back("hidden", std::to_string(opts.elm.n_hidden));
  cfg.emplace_back("activation", std::string(activation_name(opts.elm.activation)));
  cfg.emplace_back("seed", std::to_string(opts.elm.seed));
  cfg.emplace_back("delta", format_double(opts.delta));
  if (opts.method == Method::robust) {
    cfg.emplace_back("shared_lambda", opts.robust.shared_lambda ? "true" : "false");
    cfg.emplace_back("form", opts.robust.form == LmiForm::per_sample ? "per-sample" : "monolithic");
  }
  return out;
}

}  // namespace robustelm
