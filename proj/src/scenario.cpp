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

#include "trafficgraph/scenario.hpp"

#include "trafficgraph/errors.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace trafficgraph
{

Lanelet Lanelet::from_bounds(LaneletId id, Polyline left, Polyline right)
{
  if (left.size() != right.size()) {
    throw GeometryError(
      "lanelet " + std::to_string(id) + ": left bound has " + std::to_string(left.size()) +
      " vertices, right bound has " + std::to_string(right.size()));
  }
  std::vector<Point2> center;
  center.reserve(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    center.push_back(0.5 * (left[i] + right[i]));
  }
  return Lanelet{
    .id = id,
    .left_bound = std::move(left),
    .right_bound = std::move(right),
    .center = Polyline(std::move(center)),
    .predecessors = {},
    .successors = {},
    .adjacent_left = std::nullopt,
    .adjacent_right = std::nullopt,
  };
}

std::vector<Point2> Lanelet::polygon() const
{
  std::vector<Point2> ring(left_bound.points());
  const auto & right = right_bound.points();
  ring.insert(ring.end(), right.rbegin(), right.rend());
  return ring;
}

const VehicleState * DynamicObstacle::state_at(Timestep t) const
{
  const auto it = std::lower_bound(
    trajectory.begin(), trajectory.end(), t,
    [](const VehicleState & s, Timestep value) { return s.timestep < value; });
  if (it == trajectory.end() || it->timestep != t) {
    return nullptr;
  }
  return &*it;
}

Timestep Scenario::final_timestep() const
{
  Timestep last = 0;
  for (const auto & [id, obstacle] : obstacles) {
    (void)id;
    if (!obstacle.trajectory.empty()) {
      last = std::max(last, obstacle.trajectory.back().timestep);
    }
  }
  return last;
}

void validate_scenario(const Scenario & scenario)
{
  if (!(scenario.dt > 0.0)) {
    throw ValidationError("scenario " + scenario.id + ": time step size must be positive");
  }
  auto require_lanelet = [&](LaneletId owner, LaneletId ref, const char * relation) {
    if (!scenario.lanelets.contains(ref)) {
      throw ValidationError(
        "lanelet " + std::to_string(owner) + ": " + relation + " references unknown lanelet " +
        std::to_string(ref));
    }
  };
  for (const auto & [id, lanelet] : scenario.lanelets) {
    if (lanelet.id != id) {
      throw ValidationError("lanelet " + std::to_string(id) + ": key/id mismatch");
    }
    if (
      lanelet.left_bound.size() != lanelet.right_bound.size() ||
      lanelet.center.size() != lanelet.left_bound.size()) {
      throw ValidationError(
        "lanelet " + std::to_string(id) + ": bounds and centerline differ in vertex count");
    }
    for (LaneletId ref : lanelet.predecessors) {
      require_lanelet(id, ref, "predecessor");
    }
    for (LaneletId ref : lanelet.successors) {
      require_lanelet(id, ref, "successor");
    }
    if (lanelet.adjacent_left) {
      require_lanelet(id, lanelet.adjacent_left->id, "adjacentLeft");
    }
    if (lanelet.adjacent_right) {
      require_lanelet(id, lanelet.adjacent_right->id, "adjacentRight");
    }
  }
  for (const auto & [id, obstacle] : scenario.obstacles) {
    const std::string name = "obstacle " + std::to_string(id);
    if (obstacle.id != id) {
      throw ValidationError(name + ": key/id mismatch");
    }
    if (!(obstacle.length > 0.0) || !(obstacle.width > 0.0)) {
      throw ValidationError(name + ": shape dimensions must be positive");
    }
    if (obstacle.trajectory.empty()) {
      throw ValidationError(name + ": empty trajectory");
    }
    for (std::size_t i = 1; i < obstacle.trajectory.size(); ++i) {
      if (obstacle.trajectory[i].timestep <= obstacle.trajectory[i - 1].timestep) {
        throw ValidationError(
          name + ": timesteps not strictly increasing at " +
          std::to_string(obstacle.trajectory[i].timestep));
      }
    }
  }
}

DynamicObstacle derive_state_derivatives(DynamicObstacle obstacle, double dt)
{
  if (!(dt > 0.0)) {
    throw ArgumentError("derive_state_derivatives: dt must be positive");
  }
  auto & states = obstacle.trajectory;
  const std::size_t n = states.size();
  if (n == 1) {
    if (!states[0].acceleration) {
      states[0].acceleration = Vector2::Zero();
    }
    if (!states[0].yaw_rate) {
      states[0].yaw_rate = 0.0;
    }
    return obstacle;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    const double elapsed = static_cast<double>(states[hi].timestep - states[lo].timestep) * dt;
    if (!states[i].acceleration) {
      states[i].acceleration = (states[hi].velocity - states[lo].velocity) / elapsed;
    }
    if (!states[i].yaw_rate) {
      states[i].yaw_rate = wrap_angle(states[hi].orientation - states[lo].orientation) / elapsed;
    }
  }
  return obstacle;
}

}  // namespace trafficgraph
