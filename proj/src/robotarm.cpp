#include "robustelm/robotarm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "robustelm/random.hpp"

namespace robustelm::robotarm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNormalLo = 5 * kPi / 12;
constexpr double kNormalHi = 7 * kPi / 12;
constexpr double kBufferLo = kPi / 3;
constexpr double kBufferHi = 2 * kPi / 3;

bool in_normal_band(double t) { return t >= kNormalLo && t <= kNormalHi; }
bool in_working_band(double t) { return t >= kBufferLo && t <= kBufferHi; }

}  // namespace

std::string_view zone_name(Zone z) {
  switch (z) {
    case Zone::normal: return "normal";
    case Zone::buffering: return "buffering";
    case Zone::forbidden: return "forbidden";
  }
  return "forbidden";
}

Zone parse_zone(std::string_view name) {
  if (name == "normal") return Zone::normal;
  if (name == "buffering") return Zone::buffering;
  if (name == "forbidden") return Zone::forbidden;
  throw std::invalid_argument("unknown zone '" + std::string(name) + "' (expected normal, buffering or forbidden)");
}

std::pair<double, double> forward_kinematics(const ArmGeometry& g, double theta1, double theta2) {
  return {g.l1 * std::cos(theta1) + g.l2 * std::cos(theta1 + theta2),
          g.l1 * std::sin(theta1) + g.l2 * std::sin(theta1 + theta2)};
}

Zone classify_zone(double theta1, double theta2) {
  if (in_normal_band(theta1) && in_normal_band(theta2)) return Zone::normal;
  if (in_working_band(theta1) && in_working_band(theta2)) return Zone::buffering;
  return Zone::forbidden;
}

Dataset sample_dataset(const ArmGeometry& g, Zone zone, Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_dataset: N must be >= 1");
  if (!(g.l1 > 0) || !(g.l2 > 0)) throw std::invalid_argument("sample_dataset: link lengths must be positive");
  Rng rng(seed);
  // Draw from the smallest enclosing square and reject outside the zone.
  double lo = 0, hi = 2 * kPi;
  if (zone == Zone::normal) {
    lo = kNormalLo;
    hi = kNormalHi;
  } else if (zone == Zone::buffering) {
    lo = kBufferLo;
    hi = kBufferHi;
  }
  Dataset d;
  d.inputs.resize(n, 2);
  d.targets.resize(n, 2);
  for (Eigen::Index i = 0; i < n;) {
    const double t1 = rng.uniform(lo, hi);
    const double t2 = rng.uniform(lo, hi);
    if (t1 >= 2 * kPi || t2 >= 2 * kPi || classify_zone(t1, t2) != zone) continue;
    const auto [x, y] = forward_kinematics(g, t1, t2);
    d.inputs.row(i) << t1, t2;
    d.targets.row(i) << x, y;
    ++i;
  }
  return d;
}

}  // namespace robustelm::robotarm
