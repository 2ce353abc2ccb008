#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "robustelm/dataset.hpp"
#include "robustelm/elm.hpp"
#include "robustelm/io.hpp"
#include "robustelm/robust.hpp"

namespace robustelm {

enum class Method { elm, robust };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);

struct TrainOptions {
  Method method = Method::elm;
  ElmConfig elm;
  /// Uniform radius on every sample and input coordinate.
  double delta = 0.01;
  /// Per-input-column override of delta.
  std::optional<Eigen::VectorXd> column_delta;
  RobustTrainConfig robust;
};

UncertainDatasetD make_uncertain(const Dataset& d, double delta, const std::optional<Eigen::VectorXd>& column_delta);

struct TrainOutcome {
  ModelFile model;
  RunReport report;
};

/// Random hidden layer from opts.elm, then least squares or robust training
/// of the output layer. The report holds the output radius under the training
/// perturbation and the nominal MSE.
TrainOutcome train_model(const Dataset& d, const TrainOptions& opts);

RunReport evaluate_model(const ShallowNetD& net, const Dataset& d, double delta,
                         const std::optional<Eigen::VectorXd>& column_delta);

}  // namespace robustelm
