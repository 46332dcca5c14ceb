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

#ifndef TRAFFICGRAPH__GRAPH_BUILDERS_HPP_
#define TRAFFICGRAPH__GRAPH_BUILDERS_HPP_

#include "trafficgraph/scenario.hpp"

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace trafficgraph
{

/// Lanelet relation of an edge L -> L'. The numeric codes are serialized as features.
enum class L2LAdjacencyType : int {
  predecessor = 0,   ///< L continues the driving corridor of L'
  successor = 1,     ///< L' continues the driving corridor of L
  adjacent_left = 2,   ///< L is left-adjacent to L'
  adjacent_right = 3,  ///< L is right-adjacent to L'
  merging = 4,
  diverging = 5,
  conflicting = 6,
};

inline constexpr L2LAdjacencyType kAllL2LTypes[] = {
  L2LAdjacencyType::predecessor,   L2LAdjacencyType::successor, L2LAdjacencyType::adjacent_left,
  L2LAdjacencyType::adjacent_right, L2LAdjacencyType::merging,  L2LAdjacencyType::diverging,
  L2LAdjacencyType::conflicting};

using L2LTypeSet = std::set<L2LAdjacencyType>;

L2LTypeSet all_l2l_types();
std::string_view to_string(L2LAdjacencyType type);
std::optional<L2LAdjacencyType> l2l_type_from_string(std::string_view name);

struct L2LEdgeRecord
{
  LaneletId source{0};
  LaneletId target{0};
  L2LAdjacencyType type{L2LAdjacencyType::successor};
  double s_source{0.0};
  double s_target{0.0};

  bool operator==(const L2LEdgeRecord &) const = default;
};

/**
 * @brief Lanelet-to-lanelet edges of every enabled type, sorted by (source, target, type).
 *
 * Succession is declared by either side (B in A.successors or A in B.predecessors) and yields
 * (A -> B, successor) with s = (|A|, 0) and (B -> A, predecessor) with s = (0, |A|).
 * A.adjacent_left = B yields (B -> A, adjacent_left) and, for the same driving direction,
 * (A -> B, adjacent_right); for opposite directions both lanelets lie on each other's left, so
 * (A -> B, adjacent_left). Right adjacency mirrors this. Adjacent edges carry s = (|L|/2, |L'|/2).
 * Merging (common successor) uses the full lengths, diverging (common predecessor) uses 0.
 * Conflicting pairs have crossing centerlines and none of the other relations (regardless of
 * which types are enabled); s comes from the first crossing along the source.
 */
std::vector<L2LEdgeRecord> build_l2l_edges(
  const std::map<LaneletId, Lanelet> & network, const L2LTypeSet & enabled = all_l2l_types());

enum class V2LAssignmentStrategy { center, shape };

std::string_view to_string(V2LAssignmentStrategy strategy);
std::optional<V2LAssignmentStrategy> v2l_strategy_from_string(std::string_view name);

/// Vehicle pose and rectangle at one timestep.
struct VehicleFootprint
{
  ObstacleId id{0};
  Point2 position{Point2::Zero()};
  double orientation{0.0};
  double length{0.0};
  double width{0.0};
};

using V2LPair = std::pair<ObstacleId, LaneletId>;
using L2VPair = std::pair<LaneletId, ObstacleId>;

/**
 * @brief Vehicle-to-lanelet assignment, sorted by (vehicle id, lanelet id).
 *
 * center: the lanelet polygon contains the vehicle center (boundary inclusive).
 * shape: the vehicle rectangle overlaps the lanelet polygon; always a superset of center.
 */
std::vector<V2LPair> build_v2l_edges(
  std::span<const VehicleFootprint> vehicles, const std::map<LaneletId, Lanelet> & network,
  V2LAssignmentStrategy strategy);

/// Reversed pairs in the same order as the input.
std::vector<L2VPair> build_l2v_edges(std::span<const V2LPair> v2l);

}  // namespace trafficgraph

#endif  // TRAFFICGRAPH__GRAPH_BUILDERS_HPP_
