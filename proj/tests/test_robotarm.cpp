#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "robustelm/io.hpp"
#include "robustelm/robotarm.hpp"

using namespace robustelm;
using namespace robustelm::robotarm;
using std::numbers::pi;

TEST_CASE("forward kinematics") {
  const ArmGeometry g;
  auto [x0, y0] = forward_kinematics(g, 0, 0);
  CHECK(x0 == 2.0);
  CHECK(y0 == 0.0);
  auto [x1, y1] = forward_kinematics(g, pi / 2, pi / 2);
  CHECK(std::abs(x1 - (std::cos(pi / 2) + std::cos(pi))) <= 1e-15);
  CHECK(std::abs(x1 + 1) <= 1e-15);
  CHECK(std::abs(y1 - 1) <= 1e-15);
  for (double t1 : {0.0, 0.4, 2.0, 5.5}) {
    auto [x, y] = forward_kinematics(g, t1, pi);
    CHECK(std::abs(x) <= 1e-15);
    CHECK(std::abs(y) <= 1e-15);
  }
}

TEST_CASE("zone classification") {
  CHECK(classify_zone(pi / 2, pi / 2) == Zone::normal);
  CHECK(classify_zone(pi / 3, pi / 2) == Zone::buffering);
  CHECK(classify_zone(0, pi / 2) == Zone::forbidden);
  CHECK(classify_zone(5 * pi / 12, 7 * pi / 12) == Zone::normal);
  CHECK(classify_zone(2 * pi / 3, 2 * pi / 3) == Zone::buffering);
  CHECK(classify_zone(pi / 2, 2 * pi / 3 + 1e-9) == Zone::forbidden);
  CHECK(parse_zone("buffering") == Zone::buffering);
  CHECK(zone_name(Zone::forbidden) == "forbidden");
  CHECK_THROWS_AS(parse_zone("nowhere"), std::invalid_argument);
}

TEST_CASE("zones partition a 100x100 grid") {
  int counts[3] = {0, 0, 0};
  for (int a = 0; a < 100; ++a)
    for (int b = 0; b < 100; ++b) {
      const double t1 = 2 * pi * a / 100, t2 = 2 * pi * b / 100;
      const Zone z = classify_zone(t1, t2);
      const auto in = [](double t, double lo, double hi) { return t >= lo && t <= hi; };
      const bool normal = in(t1, 5 * pi / 12, 7 * pi / 12) && in(t2, 5 * pi / 12, 7 * pi / 12);
      const bool working = in(t1, pi / 3, 2 * pi / 3) && in(t2, pi / 3, 2 * pi / 3);
      const int expected = normal ? 0 : working ? 1 : 2;
      REQUIRE(static_cast<int>(z) == expected);
      ++counts[static_cast<int>(z)];
    }
  CHECK(counts[0] + counts[1] + counts[2] == 10000);
  CHECK(counts[0] > 0);
  CHECK(counts[1] > 0);
  CHECK(counts[2] > 0);
}

TEST_CASE("kinematics stay in the annulus") {
  for (const ArmGeometry g : {ArmGeometry{1, 1}, ArmGeometry{1.5, 0.5}, ArmGeometry{0.3, 2}}) {
    for (int a = 0; a < 60; ++a)
      for (int b = 0; b < 60; ++b) {
        auto [x, y] = forward_kinematics(g, 0.1 * a, 0.1 * b);
        const double r = std::hypot(x, y);
        CHECK(r <= g.l1 + g.l2 + 1e-12);
        CHECK(r >= std::abs(g.l1 - g.l2) - 1e-12);
      }
  }
}

TEST_CASE("sampled datasets respect the zone and the workspace") {
  const ArmGeometry g{1.2, 0.8};
  for (Zone zone : {Zone::normal, Zone::buffering, Zone::forbidden}) {
    const Dataset d = sample_dataset(g, zone, 300, 9);
    REQUIRE(d.size() == 300);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      const double t1 = d.inputs(i, 0), t2 = d.inputs(i, 1);
      CHECK(t1 >= 0);
      CHECK(t1 < 2 * pi);
      CHECK(classify_zone(t1, t2) == zone);
      auto [x, y] = forward_kinematics(g, t1, t2);
      CHECK(d.targets(i, 0) == x);
      CHECK(d.targets(i, 1) == y);
      CHECK(x * x + y * y <= 4.0 + 1e-12);
    }
  }
}

TEST_CASE("sampling is deterministic per seed") {
  auto csv = [](const Dataset& d) {
    std::ostringstream os;
    write_dataset_csv(os, d, arm_csv_header());
    return os.str();
  };
  const ArmGeometry g;
  CHECK(csv(sample_dataset(g, Zone::normal, 50, 1)) == csv(sample_dataset(g, Zone::normal, 50, 1)));
  CHECK(csv(sample_dataset(g, Zone::normal, 50, 1)) != csv(sample_dataset(g, Zone::normal, 50, 2)));
  CHECK_THROWS_AS(sample_dataset(g, Zone::normal, 0, 1), std::invalid_argument);
}

TEST_CASE("normal zone samples cover the band") {
  const Dataset d = sample_dataset({}, Zone::normal, 2000, 4);
  CHECK(d.inputs.col(0).minCoeff() < 5 * pi / 12 + 0.01);
  CHECK(d.inputs.col(0).maxCoeff() > 7 * pi / 12 - 0.01);
  CHECK(std::abs(d.inputs.col(1).mean() - pi / 2) < 0.02);
}
