// Copyright 2026 The trafficgraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TRAFFICGRAPH__TEST_SUPPORT_HPP_
#define TRAFFICGRAPH__TEST_SUPPORT_HPP_

#include "trafficgraph/geometry.hpp"
#include "trafficgraph/scenario.hpp"
#include "trafficgraph/scenario_io.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace trafficgraph::testing
{

inline std::filesystem::path fixture_dir() { return TRAFFICGRAPH_FIXTURE_DIR; }
inline std::filesystem::path scenario_dir() { return fixture_dir() / "scenarios"; }
inline std::filesystem::path highway_file() { return scenario_dir() / "highway.xml"; }
inline std::filesystem::path intersection_file() { return scenario_dir() / "intersection.xml"; }

inline std::vector<std::filesystem::path> fixture_scenario_files() { return {highway_file(), intersection_file()}; }

inline std::vector<Scenario> fixture_scenarios()
{
  return {load_scenario_file(highway_file()), load_scenario_file(intersection_file())};
}

/// Fresh empty directory removed on destruction.
class TempDir
{
public:
  explicit TempDir(const std::string & tag)
  {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() /
            ("trafficgraph_" + tag + "_" + std::to_string(rng() % 1000000000ULL));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir()
  {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  TempDir(const TempDir &) = delete;
  TempDir & operator=(const TempDir &) = delete;

  const std::filesystem::path & path() const { return path_; }

private:
  std::filesystem::path path_;
};

inline Polyline line(const Point2 & a, const Point2 & b, int n = 2)
{
  std::vector<Point2> points;
  for (int k = 0; k < n; ++k) {
    points.push_back(a + (b - a) * (static_cast<double>(k) / (n - 1)));
  }
  return Polyline(std::move(points));
}

/// Straight lanelet from `a` to `b` (centerline) with the given width.
inline Lanelet straight_lanelet(LaneletId id, const Point2 & a, const Point2 & b, double width = 4.0, int n = 2)
{
  const Vector2 dir = (b - a).normalized();
  const Vector2 left(-dir.y(), dir.x());
  const double h = width / 2.0;
  return Lanelet::from_bounds(id, line(a + left * h, b + left * h, n), line(a - left * h, b - left * h, n));
}

inline VehicleState state_at(Timestep t, const Point2 & p, double theta, const Vector2 & v = Vector2::Zero())
{
  VehicleState s;
  s.timestep = t;
  s.position = p;
  s.orientation = theta;
  s.velocity = v;
  s.acceleration = Vector2::Zero();
  s.yaw_rate = 0.0;
  return s;
}

inline DynamicObstacle obstacle(ObstacleId id, std::vector<VehicleState> states, double length = 4.5, double width = 1.8)
{
  DynamicObstacle o;
  o.id = id;
  o.length = length;
  o.width = width;
  o.trajectory = std::move(states);
  return o;
}

/// Straight road along +x with `count` vehicles spaced 8 m apart, each present for `steps` steps.
inline Scenario road_with_vehicles(std::size_t count, Timestep steps = 3, const std::string & id = "road")
{
  Scenario s;
  s.id = id;
  s.dt = 0.1;
  s.lanelets.emplace(1, straight_lanelet(1, {0.0, 0.0}, {200.0, 0.0}, 4.0, 5));
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<VehicleState> states;
    for (Timestep t = 0; t < steps; ++t) {
      states.push_back(state_at(t, {5.0 + 8.0 * static_cast<double>(i) + t, 0.0}, 0.0, {10.0, 0.0}));
    }
    s.obstacles.emplace(static_cast<ObstacleId>(i + 1), obstacle(static_cast<ObstacleId>(i + 1), states));
  }
  return s;
}

/// Apply x -> R(angle) x + shift to every point, orientation and vector of a scenario.
inline Scenario rigid_transform(const Scenario & in, double angle, const Vector2 & shift)
{
  const Eigen::Rotation2Dd rot(angle);
  const auto point = [&](const Point2 & p) -> Point2 { return rot * p + shift; };
  const auto poly = [&](const Polyline & pl) {
    std::vector<Point2> pts;
    for (const auto & p : pl.points()) {
      pts.push_back(point(p));
    }
    return Polyline(std::move(pts));
  };
  Scenario out = in;
  for (auto & [id, l] : out.lanelets) {
    l.left_bound = poly(l.left_bound);
    l.right_bound = poly(l.right_bound);
    l.center = poly(l.center);
  }
  for (auto & [id, o] : out.obstacles) {
    for (auto & s : o.trajectory) {
      s.position = point(s.position);
      s.orientation = wrap_angle(s.orientation + angle);
      s.velocity = rot * s.velocity;
      if (s.acceleration) {
        s.acceleration = rot * *s.acceleration;
      }
    }
  }
  return out;
}

}  // namespace trafficgraph::testing

#endif  // TRAFFICGRAPH__TEST_SUPPORT_HPP_
