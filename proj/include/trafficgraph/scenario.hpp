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

#ifndef TRAFFICGRAPH__SCENARIO_HPP_
#define TRAFFICGRAPH__SCENARIO_HPP_

#include "trafficgraph/geometry.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace trafficgraph
{

using LaneletId = std::int64_t;
using ObstacleId = std::int64_t;
using Timestep = std::int64_t;

struct LateralAdjacency
{
  LaneletId id{0};
  bool same_direction{true};

  bool operator==(const LateralAdjacency &) const = default;
};

/// Atomic road segment. Bounds and centerline share the same vertex count.
struct Lanelet
{
  LaneletId id{0};
  Polyline left_bound;
  Polyline right_bound;
  Polyline center;
  std::set<LaneletId> predecessors;
  std::set<LaneletId> successors;
  std::optional<LateralAdjacency> adjacent_left;
  std::optional<LateralAdjacency> adjacent_right;

  /// Builds a lanelet whose centerline is the pointwise midpoint of its bounds.
  /// @throws GeometryError on mismatched bound vertex counts.
  static Lanelet from_bounds(LaneletId id, Polyline left, Polyline right);

  double length() const { return center.length(); }

  /// Left bound followed by the reversed right bound (implicitly closed).
  std::vector<Point2> polygon() const;

  bool operator==(const Lanelet &) const = default;
};

/// Kinematic state in the scenario frame. Derivatives missing from the source file stay empty
/// until derive_state_derivatives() fills them.
struct VehicleState
{
  Timestep timestep{0};
  Point2 position{Point2::Zero()};
  double orientation{0.0};
  Vector2 velocity{Vector2::Zero()};
  std::optional<Vector2> acceleration;
  std::optional<double> yaw_rate;

  bool operator==(const VehicleState &) const = default;
};

struct DynamicObstacle
{
  ObstacleId id{0};
  double length{0.0};
  double width{0.0};
  /// Strictly increasing timesteps. Gaps are allowed; the obstacle is absent in between.
  std::vector<VehicleState> trajectory;

  const VehicleState * state_at(Timestep t) const;

  bool operator==(const DynamicObstacle &) const = default;
};

struct Scenario
{
  std::string id;
  double dt{0.1};
  std::map<LaneletId, Lanelet> lanelets;
  std::map<ObstacleId, DynamicObstacle> obstacles;

  /// Last timestep at which any obstacle has a state; 0 without obstacles.
  Timestep final_timestep() const;

  bool operator==(const Scenario &) const = default;
};

/// Checks scenario invariants: dt > 0, resolvable lanelet references, positive obstacle
/// dimensions, strictly increasing trajectories, equal bound/center vertex counts.
/// @throws ValidationError naming the offending id.
void validate_scenario(const Scenario & scenario);

/**
 * @brief Fill missing accelerations and yaw rates by finite differences.
 *
 * Central differences in the interior, one-sided at the ends, divided by the actual elapsed
 * time between the neighbouring states. Orientation differences are wrapped into (-pi, pi]
 * before division. Single-state trajectories get zeros. States that already carry a value keep
 * it.
 * @throws ArgumentError if dt <= 0.
 */
DynamicObstacle derive_state_derivatives(DynamicObstacle obstacle, double dt);

}  // namespace trafficgraph

#endif  // TRAFFICGRAPH__SCENARIO_HPP_
