#include "robustelm/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "robustelm/errors.hpp"
#include "robustelm/format.hpp"
#include "robustelm/io.hpp"
#include "robustelm/pipeline.hpp"
#include "robustelm/robotarm.hpp"

namespace robustelm::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

Dataset load_dataset(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_dataset_csv(in, 2);
}

std::optional<Eigen::VectorXd> load_column_delta(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::istringstream in(read_file(path));
  return read_delta_file(in);
}

const std::vector<std::string> kZones{"normal", "buffering", "forbidden"};
const std::vector<std::string> kActivations{"sigmoid", "tanh", "relu", "identity"};

struct GenArgs {
  std::string zone = "normal";
  Eigen::Index n = 100;
  std::uint64_t seed = 0;
  double l1 = 1.0, l2 = 1.0;
  std::string output;
};

struct TrainArgs {
  std::string data, output, method = "elm", activation = "sigmoid", form = "per-sample";
  std::string delta_file, dump_lmi;
  double delta = 0.01;
  Eigen::Index hidden = 10;
  std::uint64_t seed = 0;
  std::vector<double> weight_range{-1.0, 1.0};
  double ridge = 1e-10;
  double lambda_floor = 0.0;
  bool shared_lambda = false;
  bool porcelain = false;
  bool timing = false;
};

struct ReachArgs {
  std::string model, data, output, svg, delta_file;
  double delta = 0.01;
  bool porcelain = false;
};

struct BenchArgs {
  std::string benchmark, zone = "normal", activation = "sigmoid", output, model_dir;
  Eigen::Index n = 50;
  Eigen::Index hidden = 10;
  std::uint64_t seed = 0;
  double delta = 0.01;
  bool shared_lambda = false;
  bool porcelain = false;
  bool timing = false;
};

void add_common_train(CLI::App* cmd, std::string& activation, Eigen::Index& hidden, std::uint64_t& seed,
                      double& delta, bool& shared_lambda) {
  cmd->add_option("--activation", activation, "Hidden activation")->check(CLI::IsMember(kActivations));
  cmd->add_option("--hidden", hidden, "Hidden units")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", seed, "Seed for the random hidden layer");
  cmd->add_option("--delta", delta, "Uniform input perturbation radius")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--shared-lambda", shared_lambda, "One S-procedure multiplier per hidden unit");
}

TrainOptions to_options(const std::string& method, const std::string& activation, Eigen::Index hidden,
                        std::uint64_t seed, double delta, bool shared_lambda) {
  TrainOptions o;
  o.method = parse_method(method);
  o.elm.n_hidden = hidden;
  o.elm.activation = parse_activation(activation);
  o.elm.seed = seed;
  o.delta = delta;
  o.robust.shared_lambda = shared_lambda;
  return o;
}

std::string model_text(const ModelFile& m) {
  std::ostringstream os;
  save_model(os, m);
  return os.str();
}

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const robotarm::Zone zone = robotarm::parse_zone(a.zone);
  const Dataset d = robotarm::sample_dataset({a.l1, a.l2}, zone, a.n, a.seed);
  std::ostringstream os;
  write_dataset_csv(os, d, arm_csv_header());
  write_file(a.output, os.str());
  out << "wrote " << d.size() << " samples to " << a.output << '\n';
  return kOk;
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const Dataset d = load_dataset(a.data);
  TrainOptions o = to_options(a.method, a.activation, a.hidden, a.seed, a.delta, a.shared_lambda);
  o.elm.ridge = a.ridge;
  o.elm.weight_range = IntervalD(a.weight_range.at(0), a.weight_range.at(1));
  o.robust.lambda_floor = a.lambda_floor;
  o.robust.form = a.form == "monolithic" ? LmiForm::monolithic : LmiForm::per_sample;
  o.column_delta = load_column_delta(a.delta_file);

  if (!a.dump_lmi.empty()) {
    const ShallowNetD init = init_random(o.elm, d.inputs.cols(), d.targets.cols());
    const auto dec = decompose(hidden_interval_matrix(init, make_uncertain(d, o.delta, o.column_delta)));
    if (dec.devs.empty()) throw DataError("--dump-lmi: the perturbation is zero, there is no LMI to dump");
    std::ostringstream os;
    sdp::write_triplets(os, assemble_lmi(dec, d.targets, d.targets.cols(), o.robust).problem);
    write_file(a.dump_lmi, os.str());
  }

  const TrainOutcome res = train_model(d, o);
  write_file(a.output, model_text(res.model));
  out << (a.porcelain ? format_report_porcelain(res.report, a.timing) : format_report(res.report, a.timing));
  return kOk;
}

int cmd_reach(const ReachArgs& a, std::ostream& out) {
  ModelFile m;
  {
    std::istringstream in(read_file(a.model));
    m = load_model(in);
  }
  const Dataset d = load_dataset(a.data);
  if (d.inputs.cols() != m.net.n_inputs() || d.targets.cols() != m.net.n_outputs())
    throw DimensionError("reach: dataset has " + std::to_string(d.inputs.cols()) + " inputs and " +
                         std::to_string(d.targets.cols()) + " targets, model expects " +
                         std::to_string(m.net.n_inputs()) + " and " + std::to_string(m.net.n_outputs()));
  const auto data = make_uncertain(d, a.delta, load_column_delta(a.delta_file));
  std::vector<IntervalVectorD> boxes;
  boxes.reserve(static_cast<std::size_t>(data.size()));
  double radius = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    boxes.push_back(network_reach(m.net, data.box(i)).second);
    radius = std::max(radius, boxes.back().radius().norm());
  }
  if (!a.output.empty()) {
    std::ostringstream os;
    write_boxes_csv(os, boxes);
    write_file(a.output, os.str());
  }
  if (!a.svg.empty()) {
    std::ostringstream os;
    write_reach_svg(os, d.targets, boxes,
                    "Output reachable sets (" + (m.meta.method.empty() ? std::string("model") : m.meta.method) +
                        "), max radius " + format_fixed(radius, 4));
    write_file(a.svg, os.str());
  }
  if (a.porcelain)
    out << "radius=" << format_double(radius) << "\nsamples=" << data.size() << '\n';
  else
    out << "radius  " << format_double(radius) << "\nsamples " << data.size() << '\n';
  return kOk;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  if (a.benchmark != "robot-arm") throw CLI::ValidationError("benchmark", "unknown benchmark '" + a.benchmark + "'");
  const Dataset d = robotarm::sample_dataset({}, robotarm::parse_zone(a.zone), a.n, a.seed);
  std::vector<RunReport> rows;
  for (const char* method : {"elm", "robust"}) {
    const TrainOptions o = to_options(method, a.activation, a.hidden, a.seed, a.delta, a.shared_lambda);
    const TrainOutcome res = train_model(d, o);
    if (a.timing) err << method << " wall_time " << format_fixed(res.report.wall_time, 3) << "s\n";
    if (!a.model_dir.empty()) write_file((std::filesystem::path(a.model_dir) / (std::string(method) + ".model")).string(),
                                         model_text(res.model));
    rows.push_back(res.report);
  }
  std::string table;
  if (a.porcelain) {
    for (const auto& r : rows) table += format_report_porcelain(r, false) + "\n";
  } else {
    table = format_comparison(rows);
  }
  if (!a.output.empty()) write_file(a.output, table);
  out << table;
  return kOk;
}

void print_solver_report(std::ostream& err, const sdp::SdpSolution& s) {
  err << "solver_status=" << sdp::status_name(s.status) << "\niterations=" << s.iterations
      << "\nobjective=" << format_double(s.objective) << "\nduality_gap=" << format_double(s.duality_gap)
      << "\nprimal_infeasibility=" << format_double(s.primal_infeasibility)
      << "\ndual_infeasibility=" << format_double(s.dual_infeasibility) << "\nmin_eig=" << format_double(s.min_eig)
      << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust training of shallow networks against interval input perturbations"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a two-link robot arm dataset (theta1,theta2,x,y)");
  g->add_option("--zone", gen.zone, "normal | buffering | forbidden")->check(CLI::IsMember(kZones));
  g->add_option("--n", gen.n, "Number of samples")->required()->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "Sampling seed");
  g->add_option("--l1", gen.l1, "Link-1 length")->check(CLI::PositiveNumber);
  g->add_option("--l2", gen.l2, "Link-2 length")->check(CLI::PositiveNumber);
  g->add_option("-o,--output", gen.output, "Output CSV")->required();

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train a shallow network (elm or robust)");
  t->add_option("--data", train.data, "Dataset CSV")->required();
  t->add_option("--method", train.method, "elm | robust")->check(CLI::IsMember({"elm", "robust"}));
  add_common_train(t, train.activation, train.hidden, train.seed, train.delta, train.shared_lambda);
  t->add_option("--delta-file", train.delta_file, "Per-input-column perturbation radii (one CSV line)");
  t->add_option("--weight-range", train.weight_range, "Uniform range of hidden weights and biases")->expected(2);
  t->add_option("--ridge", train.ridge, "Ridge penalty for least squares")->check(CLI::NonNegativeNumber);
  t->add_option("--lambda-floor", train.lambda_floor, "Lower bound on S-procedure multipliers")
      ->check(CLI::NonNegativeNumber);
  t->add_option("--form", train.form, "LMI layout: per-sample | monolithic")
      ->check(CLI::IsMember({"per-sample", "monolithic"}));
  t->add_option("--dump-lmi", train.dump_lmi, "Write the robust LMI as sparse triplets");
  t->add_option("-o,--output", train.output, "Model file")->required();
  t->add_flag("--porcelain", train.porcelain, "key=value report lines");
  t->add_flag("--timing", train.timing, "Include wall time in the report");

  ReachArgs reach;
  auto* r = app.add_subcommand("reach", "Output reachable boxes of a trained model");
  r->add_option("--model", reach.model, "Model file")->required();
  r->add_option("--data", reach.data, "Dataset CSV")->required();
  r->add_option("--delta", reach.delta, "Uniform input perturbation radius")->check(CLI::NonNegativeNumber);
  r->add_option("--delta-file", reach.delta_file, "Per-input-column perturbation radii (one CSV line)");
  r->add_option("-o,--output", reach.output, "Boxes CSV (center_x,center_y,rad_x,rad_y)");
  r->add_option("--svg", reach.svg, "SVG figure of targets and boxes");
  r->add_flag("--porcelain", reach.porcelain, "key=value report lines");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Compare elm and robust training on a benchmark");
  b->add_option("benchmark", bench.benchmark, "Benchmark name (robot-arm)")->required()->check(CLI::IsMember({"robot-arm"}));
  b->add_option("--n", bench.n, "Number of samples")->check(CLI::PositiveNumber);
  b->add_option("--zone", bench.zone, "Sampling zone")->check(CLI::IsMember(kZones));
  add_common_train(b, bench.activation, bench.hidden, bench.seed, bench.delta, bench.shared_lambda);
  b->add_option("-o,--output", bench.output, "Also write the table here");
  b->add_option("--model-dir", bench.model_dir, "Write elm.model and robust.model into this directory");
  b->add_flag("--porcelain", bench.porcelain, "key=value blocks instead of a table");
  b->add_flag("--timing", bench.timing, "Print wall times to stderr");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (g->parsed()) return cmd_gen(gen, out);
    if (t->parsed()) return cmd_train(train, out);
    if (r->parsed()) return cmd_reach(reach, out);
    if (b->parsed()) return cmd_bench(bench, out, err);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    print_solver_report(err, e.report());
    return kSolver;
  } catch (const std::invalid_argument& e) {
    // DimensionError, DataError and malformed numeric input.
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace robustelm::cli
