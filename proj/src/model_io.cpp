#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "robustelm/errors.hpp"
#include "robustelm/format.hpp"
#include "robustelm/io.hpp"

namespace robustelm {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
  return s.substr(b);
}

bool next_content_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    line = strip(line);
    if (!line.empty()) return true;
  }
  return false;
}

}  // namespace

const std::vector<std::string>& arm_csv_header() {
  static const std::vector<std::string> header{"theta1", "theta2", "x", "y"};
  return header;
}

void write_dataset_csv(std::ostream& os, const Dataset& d, const std::vector<std::string>& header) {
  const Eigen::Index cols = d.inputs.cols() + d.targets.cols();
  if (static_cast<Eigen::Index>(header.size()) != cols)
    throw_size("write_dataset_csv header", cols, static_cast<Eigen::Index>(header.size()));
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << '\n';
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    for (Eigen::Index c = 0; c < d.inputs.cols(); ++c) os << (c ? "," : "") << format_double(d.inputs(i, c));
    for (Eigen::Index c = 0; c < d.targets.cols(); ++c) os << ',' << format_double(d.targets(i, c));
    os << '\n';
  }
}

Dataset read_dataset_csv(std::istream& is, Eigen::Index n_inputs) {
  std::string line;
  if (!next_content_line(is, line)) throw DataError("dataset: empty file");
  const auto header = split(line, ',');
  const auto cols = static_cast<Eigen::Index>(header.size());
  if (n_inputs < 1 || cols <= n_inputs)
    throw DataError("dataset: header has " + std::to_string(cols) + " columns, need more than " +
                    std::to_string(n_inputs));
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (next_content_line(is, line)) {
    ++lineno;
    const auto fields = split(line, ',');
    if (static_cast<Eigen::Index>(fields.size()) != cols)
      throw DataError("dataset line " + std::to_string(lineno) + ": expected " + std::to_string(cols) + " fields");
    std::vector<double> row;
    for (const auto& f : fields) {
      try {
        row.push_back(parse_double(f));
      } catch (const std::invalid_argument& e) {
        throw DataError("dataset line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("dataset: no samples");
  Dataset d;
  const auto N = static_cast<Eigen::Index>(rows.size());
  d.inputs.resize(N, n_inputs);
  d.targets.resize(N, cols - n_inputs);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (c < n_inputs)
        d.inputs(i, c) = rows[i][c];
      else
        d.targets(i, c - n_inputs) = rows[i][c];
    }
  if (!d.inputs.allFinite() || !d.targets.allFinite()) throw DataError("dataset: non-finite values");
  return d;
}

Eigen::VectorXd read_delta_file(std::istream& is) {
  std::string line;
  if (!next_content_line(is, line)) throw DataError("delta file: empty");
  const auto fields = split(line, ',');
  Eigen::VectorXd d(static_cast<Eigen::Index>(fields.size()));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    try {
      d(static_cast<Eigen::Index>(i)) = parse_double(fields[i]);
    } catch (const std::invalid_argument& e) {
      throw DataError(std::string("delta file: ") + e.what());
    }
  }
  if (!d.allFinite() || (d.array() < 0).any()) throw DataError("delta file: values must be finite and >= 0");
  return d;
}

namespace {

void put_values(std::ostream& os, const char* key, const Eigen::MatrixXd& m) {
  os << key;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << ' ' << format_double(m(r, c));
  os << '\n';
}

Eigen::MatrixXd get_values(std::istream& is, const char* key, Eigen::Index rows, Eigen::Index cols) {
  std::string line;
  if (!next_content_line(is, line)) throw DataError(std::string("model: missing ") + key);
  std::istringstream ss(line);
  std::string tag;
  ss >> tag;
  if (tag != key) throw DataError("model: expected '" + std::string(key) + "', found '" + tag + "'");
  Eigen::MatrixXd m(rows, cols);
  std::string v;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!(ss >> v)) throw DataError(std::string("model: too few values for ") + key);
      try {
        m(r, c) = parse_double(v);
      } catch (const std::invalid_argument& e) {
        throw DataError(std::string("model: ") + e.what());
      }
    }
  if (ss >> v) throw DataError(std::string("model: too many values for ") + key);
  return m;
}

}  // namespace

void save_model(std::ostream& os, const ModelFile& m) {
  m.net.validate();
  os << "robustelm-model\n";
  os << "format_version " << ModelFile::kFormatVersion << '\n';
  os << "dims " << m.net.n_inputs() << ' ' << m.net.n_hidden() << ' ' << m.net.n_outputs() << '\n';
  os << "hidden_activation " << activation_name(m.net.hidden_activation) << '\n';
  os << "output_activation " << activation_name(m.net.output_activation) << '\n';
  put_values(os, "W1", m.net.W1);
  put_values(os, "b1", m.net.b1);
  put_values(os, "W2", m.net.W2);
  put_values(os, "b2", m.net.b2);
  os << "meta seed " << m.meta.seed << '\n';
  os << "meta method " << (m.meta.method.empty() ? "unknown" : m.meta.method) << '\n';
  os << "meta delta " << format_double(m.meta.delta) << '\n';
  if (m.meta.gamma) os << "meta gamma " << format_double(*m.meta.gamma) << '\n';
  os << "end\n";
}

ModelFile load_model(std::istream& is) {
  std::string line;
  if (!next_content_line(is, line) || line != "robustelm-model") throw DataError("model: missing magic line");
  auto keyed = [&](const std::string& key) {
    if (!next_content_line(is, line)) throw DataError("model: missing " + key);
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag != key) throw DataError("model: expected '" + key + "', found '" + tag + "'");
    std::string rest;
    std::getline(ss, rest);
    return strip(rest);
  };
  const std::string version = keyed("format_version");
  if (version != std::to_string(ModelFile::kFormatVersion))
    throw DataError("model: unsupported format_version " + version);

  Eigen::Index n0 = 0, n1 = 0, n2 = 0;
  {
    std::istringstream ss(keyed("dims"));
    if (!(ss >> n0 >> n1 >> n2) || n0 < 1 || n1 < 1 || n2 < 1) throw DataError("model: bad dims");
  }
  ModelFile m;
  try {
    m.net.hidden_activation = parse_activation(keyed("hidden_activation"));
    m.net.output_activation = parse_activation(keyed("output_activation"));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("model: ") + e.what());
  }
  m.net.W1 = get_values(is, "W1", n1, n0);
  m.net.b1 = get_values(is, "b1", n1, 1);
  m.net.W2 = get_values(is, "W2", n2, n1);
  m.net.b2 = get_values(is, "b2", n2, 1);

  while (next_content_line(is, line)) {
    if (line == "end") return m;
    std::istringstream ss(line);
    std::string tag, key, value;
    ss >> tag >> key >> value;
    if (tag != "meta") throw DataError("model: unexpected line '" + line + "'");
    try {
      if (key == "seed")
        m.meta.seed = std::stoull(value);
      else if (key == "method")
        m.meta.method = value;
      else if (key == "delta")
        m.meta.delta = parse_double(value);
      else if (key == "gamma")
        m.meta.gamma = parse_double(value);
      else
        throw DataError("model: unknown meta key '" + key + "'");
    } catch (const std::logic_error& e) {
      throw DataError(std::string("model: bad meta value: ") + e.what());
    }
  }
  throw DataError("model: missing end line");
}

std::string format_report(const RunReport& r, bool include_timing) {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("method", r.method);
  rows.emplace_back("radius", format_double(r.radius));
  rows.emplace_back("mse", format_double(r.mse));
  if (r.gamma) rows.emplace_back("gamma", format_double(*r.gamma));
  if (include_timing) rows.emplace_back("wall_time", format_fixed(r.wall_time, 3));
  for (const auto& kv : r.config) rows.emplace_back(kv);
  std::size_t width = 0;
  for (const auto& kv : rows) width = std::max(width, kv.first.size());
  std::ostringstream os;
  for (const auto& [k, v] : rows) os << k << std::string(width - k.size() + 2, ' ') << v << '\n';
  return os.str();
}

std::string format_report_porcelain(const RunReport& r, bool include_timing) {
  std::ostringstream os;
  os << "method=" << r.method << '\n';
  os << "radius=" << format_double(r.radius) << '\n';
  os << "mse=" << format_double(r.mse) << '\n';
  if (r.gamma) os << "gamma=" << format_double(*r.gamma) << '\n';
  if (include_timing) os << "wall_time=" << format_fixed(r.wall_time, 3) << '\n';
  for (const auto& [k, v] : r.config) os << k << '=' << v << '\n';
  return os.str();
}

std::string format_comparison(const std::vector<RunReport>& rows) {
  const std::vector<std::string> head{"Method", "Radius", "MSE", "gamma"};
  std::vector<std::vector<std::string>> cells{head};
  for (const auto& r : rows)
    cells.push_back({r.method, format_fixed(r.radius, 6), format_fixed(r.mse, 6),
                     r.gamma ? format_fixed(*r.gamma, 6) : std::string("-")});
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream os;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << row[c];
      if (c + 1 < row.size()) os << std::string(width[c] - row[c].size() + 2, ' ');
    }
    os << '\n';
  }
  return os.str();
}

void write_boxes_csv(std::ostream& os, const std::vector<IntervalVectorD>& boxes) {
  const Eigen::Index n = boxes.empty() ? 2 : boxes.front().size();
  auto name = [n](const char* prefix, Eigen::Index c) {
    if (n == 2) return std::string(prefix) + (c == 0 ? "x" : "y");
    return std::string(prefix) + std::to_string(c + 1);
  };
  for (Eigen::Index c = 0; c < n; ++c) os << (c ? "," : "") << name("center_", c);
  for (Eigen::Index c = 0; c < n; ++c) os << ',' << name("rad_", c);
  os << '\n';
  for (const auto& b : boxes) {
    const Eigen::VectorXd center = b.center();
    const Eigen::VectorXd rad = b.radius();
    for (Eigen::Index c = 0; c < n; ++c) os << (c ? "," : "") << format_double(center(c));
    for (Eigen::Index c = 0; c < n; ++c) os << ',' << format_double(rad(c));
    os << '\n';
  }
}

void write_reach_svg(std::ostream& os, const Eigen::MatrixXd& targets, const std::vector<IntervalVectorD>& boxes,
                     const std::string& title) {
  if (targets.cols() < 2) throw DimensionError("write_reach_svg: need at least two output coordinates");
  double xmin = targets.col(0).minCoeff(), xmax = targets.col(0).maxCoeff();
  double ymin = targets.col(1).minCoeff(), ymax = targets.col(1).maxCoeff();
  for (const auto& b : boxes) {
    xmin = std::min(xmin, b.lo()(0));
    xmax = std::max(xmax, b.hi()(0));
    ymin = std::min(ymin, b.lo()(1));
    ymax = std::max(ymax, b.hi()(1));
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
  const double size = 600, margin = 40;
  const double scale = (size - 2 * margin) / span;
  auto px = [&](double x) { return format_fixed(margin + (x - xmin) * scale, 3); };
  auto py = [&](double y) { return format_fixed(size - margin - (y - ymin) * scale, 3); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
     << size << ' ' << size << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << margin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  os << "<g fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\">\n";
  for (const auto& b : boxes) {
    os << "<rect x=\"" << px(b.lo()(0)) << "\" y=\"" << py(b.hi()(1)) << "\" width=\""
       << format_fixed((b.hi()(0) - b.lo()(0)) * scale, 3) << "\" height=\""
       << format_fixed((b.hi()(1) - b.lo()(1)) * scale, 3) << "\"/>\n";
  }
  os << "</g>\n<g fill=\"#d62728\">\n";
  for (Eigen::Index i = 0; i < targets.rows(); ++i)
    os << "<circle cx=\"" << px(targets(i, 0)) << "\" cy=\"" << py(targets(i, 1)) << "\" r=\"2\"/>\n";
  os << "</g>\n</svg>\n";
}

}  // namespace robustelm
