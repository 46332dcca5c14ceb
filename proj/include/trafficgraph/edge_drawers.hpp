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

#ifndef TRAFFICGRAPH__EDGE_DRAWERS_HPP_
#define TRAFFICGRAPH__EDGE_DRAWERS_HPP_

#include "trafficgraph/scenario.hpp"
#include "trafficgraph/traffic_graph.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace trafficgraph
{

enum class V2VDrawerKind { voronoi, k_nearest, fully_connected, radius };

std::string_view to_string(V2VDrawerKind kind);
std::optional<V2VDrawerKind> v2v_drawer_from_string(std::string_view name);

struct V2VDrawerConfig
{
  V2VDrawerKind kind{V2VDrawerKind::voronoi};
  std::size_t k{3};
  double radius{50.0};
  /// Edges longer than this are dropped, whatever the drawer.
  std::optional<double> max_distance;

  bool operator==(const V2VDrawerConfig &) const = default;
};

/// @throws ArgumentError if k < 1 for k_nearest, radius <= 0 for radius, or max_distance < 0.
void validate(const V2VDrawerConfig & config);

struct VehiclePosition
{
  ObstacleId id{0};
  Point2 position{Point2::Zero()};
};

/// (source vehicle id, target vehicle id)
using DirectedEdge = std::pair<ObstacleId, ObstacleId>;

/**
 * @brief Vehicle-to-vehicle edges at one timestep, sorted by (source id, target id).
 *
 * voronoi: Delaunay neighbours, both directions. k_nearest: each vehicle receives edges from
 * its k nearest others (neighbour -> ego); distance ties go to the smaller id and k is clipped
 * to the available vehicles. fully_connected: every ordered pair. radius: ordered pairs at
 * distance <= radius.
 */
std::vector<DirectedEdge> draw_v2v(const V2VDrawerConfig & config, std::span<const VehiclePosition> vehicles);

struct VTVDrawerConfig
{
  /// Largest timestep difference connected by a temporal edge.
  Timestep max_horizon{4};

  bool operator==(const VTVDrawerConfig &) const = default;
};

/// @throws ArgumentError if max_horizon < 1.
void validate(const VTVDrawerConfig & config);

struct TemporalEdge
{
  std::size_t source{0};
  std::size_t target{0};
  Timestep steps{0};
};

/**
 * @brief Forward-in-time edges between the nodes of one vehicle in a temporal graph.
 *
 * For every pair of vehicle nodes with the same id and 0 < t - t' <= max_horizon, one edge
 * from the older node to the newer one. Sorted by (source index, target index).
 */
std::vector<TemporalEdge> draw_vtv(const VTVDrawerConfig & config, const TrafficGraph & window);

}  // namespace trafficgraph

#endif  // TRAFFICGRAPH__EDGE_DRAWERS_HPP_
