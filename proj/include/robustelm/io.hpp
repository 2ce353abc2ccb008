#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "robustelm/dataset.hpp"
#include "robustelm/reach.hpp"

namespace robustelm {

/// Raised for unreadable / unwritable paths.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- dataset CSV -----------------------------------------------------------
//
// One header line, then one row per sample. The first n_inputs columns are
// inputs, the rest targets. '.' decimal separator regardless of locale.

void write_dataset_csv(std::ostream& os, const Dataset& d, const std::vector<std::string>& header);
Dataset read_dataset_csv(std::istream& is, Eigen::Index n_inputs);

/// Robot-arm header: theta1,theta2,x,y.
const std::vector<std::string>& arm_csv_header();

/// Per-input-column perturbation radii: one comma-separated line of n0 values.
Eigen::VectorXd read_delta_file(std::istream& is);

// --- model file ------------------------------------------------------------

struct ModelMeta {
  std::uint64_t seed = 0;
  std::string method;
  double delta = 0;
  std::optional<double> gamma;
};

struct ModelFile {
  static constexpr int kFormatVersion = 1;
  ShallowNetD net;
  ModelMeta meta;
};

/// Text format:
///   robustelm-model
///   format_version 1
///   dims <n0> <n1> <n2>
///   hidden_activation <name>
///   output_activation <name>
///   W1 <n1*n0 values, row-major>
///   b1 <n1 values>
///   W2 <n2*n1 values, row-major>
///   b2 <n2 values>
///   meta seed <u64>
///   meta method <name>
///   meta delta <value>
///   [meta gamma <value>]
///   end
/// Values carry 17 significant digits.
void save_model(std::ostream& os, const ModelFile& m);
ModelFile load_model(std::istream& is);

// --- reports and figures ---------------------------------------------------

struct RunReport {
  std::string method;
  double radius = 0;
  double mse = 0;
  std::optional<double> gamma;
  double wall_time = 0;
  std::vector<std::pair<std::string, std::string>> config;
};

/// Aligned human-readable block. Wall time only when requested, so reports
/// stay byte-stable across runs.
std::string format_report(const RunReport& r, bool include_timing);
/// key=value, one per line.
std::string format_report_porcelain(const RunReport& r, bool include_timing);

/// Two-row method comparison table (method, radius, mse, gamma).
std::string format_comparison(const std::vector<RunReport>& rows);

/// center_*, rad_* per output coordinate, one row per sample.
void write_boxes_csv(std::ostream& os, const std::vector<IntervalVectorD>& boxes);

/// Vector figure with targets as dots and output boxes as rectangles (first
/// two output coordinates).
void write_reach_svg(std::ostream& os, const Eigen::MatrixXd& targets, const std::vector<IntervalVectorD>& boxes,
                     const std::string& title);

}  // namespace robustelm
