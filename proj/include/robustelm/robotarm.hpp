#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

#include "robustelm/dataset.hpp"

namespace robustelm::robotarm {

struct ArmGeometry {
  double l1 = 1.0;
  double l2 = 1.0;
};

enum class Zone { normal, buffering, forbidden };

std::string_view zone_name(Zone z);
/// Throws std::invalid_argument for unknown names.
Zone parse_zone(std::string_view name);

/// End-effector position of the planar two-link arm.
std::pair<double, double> forward_kinematics(const ArmGeometry& g, double theta1, double theta2);

/// Normal band [5pi/12, 7pi/12], buffer bands [pi/3, 5pi/12] and [7pi/12, 2pi/3],
/// closed, with shared boundaries going to the more permissive zone.
Zone classify_zone(double theta1, double theta2);

/// N joint-angle pairs drawn uniformly from `zone`, with end positions as
/// targets. Deterministic per seed.
Dataset sample_dataset(const ArmGeometry& g, Zone zone, Eigen::Index n, std::uint64_t seed);

}  // namespace robustelm::robotarm
