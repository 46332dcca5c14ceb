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

#include "trafficgraph/graph_builders.hpp"

#include <algorithm>
#include <tuple>

namespace trafficgraph
{
namespace
{

using EdgeKey = std::tuple<LaneletId, LaneletId, int>;
using PairKey = std::pair<LaneletId, LaneletId>;

PairKey unordered(LaneletId a, LaneletId b) { return a < b ? PairKey{a, b} : PairKey{b, a}; }

class EdgeCollector
{
public:
  EdgeCollector(const std::map<LaneletId, Lanelet> & network, const L2LTypeSet & enabled)
  : network_(network), enabled_(enabled)
  {
  }

  void add(LaneletId source, LaneletId target, L2LAdjacencyType type, double s_source, double s_target)
  {
    if (source == target || !enabled_.contains(type)) {
      return;
    }
    edges_.try_emplace(
      EdgeKey{source, target, static_cast<int>(type)},
      L2LEdgeRecord{source, target, type, s_source, s_target});
  }

  double length(LaneletId id) const { return network_.at(id).length(); }

  std::vector<L2LEdgeRecord> finish() const
  {
    std::vector<L2LEdgeRecord> out;
    out.reserve(edges_.size());
    for (const auto & [key, record] : edges_) {
      out.push_back(record);
    }
    return out;
  }

private:
  const std::map<LaneletId, Lanelet> & network_;
  const L2LTypeSet & enabled_;
  std::map<EdgeKey, L2LEdgeRecord> edges_;
};

struct Box
{
  Point2 lo;
  Point2 hi;
};

Box centerline_box(const Lanelet & lanelet)
{
  Box box{lanelet.center.front(), lanelet.center.front()};
  for (const auto & p : lanelet.center.points()) {
    box.lo = box.lo.cwiseMin(p);
    box.hi = box.hi.cwiseMax(p);
  }
  return box;
}

bool boxes_overlap(const Box & a, const Box & b)
{
  const double tol = kPositionTolerance;
  return a.lo.x() <= b.hi.x() + tol && b.lo.x() <= a.hi.x() + tol && a.lo.y() <= b.hi.y() + tol &&
         b.lo.y() <= a.hi.y() + tol;
}

}  // namespace

L2LTypeSet all_l2l_types() { return L2LTypeSet(std::begin(kAllL2LTypes), std::end(kAllL2LTypes)); }

std::string_view to_string(L2LAdjacencyType type)
{
  switch (type) {
    case L2LAdjacencyType::predecessor:
      return "predecessor";
    case L2LAdjacencyType::successor:
      return "successor";
    case L2LAdjacencyType::adjacent_left:
      return "adjacent_left";
    case L2LAdjacencyType::adjacent_right:
      return "adjacent_right";
    case L2LAdjacencyType::merging:
      return "merging";
    case L2LAdjacencyType::diverging:
      return "diverging";
    case L2LAdjacencyType::conflicting:
      return "conflicting";
  }
  return "?";
}

std::optional<L2LAdjacencyType> l2l_type_from_string(std::string_view name)
{
  for (L2LAdjacencyType type : kAllL2LTypes) {
    if (to_string(type) == name) {
      return type;
    }
  }
  return std::nullopt;
}

std::vector<L2LEdgeRecord> build_l2l_edges(
  const std::map<LaneletId, Lanelet> & network, const L2LTypeSet & enabled)
{
  EdgeCollector edges(network, enabled);
  std::set<PairKey> related;

  // Succession may be declared on either side.
  std::map<LaneletId, std::set<LaneletId>> successors;
  std::map<LaneletId, std::set<LaneletId>> predecessors;
  for (const auto & [id, lanelet] : network) {
    for (LaneletId next : lanelet.successors) {
      successors[id].insert(next);
      predecessors[next].insert(id);
    }
    for (LaneletId previous : lanelet.predecessors) {
      successors[previous].insert(id);
      predecessors[id].insert(previous);
    }
  }

  for (const auto & [a, nexts] : successors) {
    for (LaneletId b : nexts) {
      const double length_a = edges.length(a);
      edges.add(a, b, L2LAdjacencyType::successor, length_a, 0.0);
      edges.add(b, a, L2LAdjacencyType::predecessor, 0.0, length_a);
      related.insert(unordered(a, b));
    }
  }

  for (const auto & [a, lanelet] : network) {
    const double half_a = 0.5 * lanelet.length();
    auto lateral = [&](const std::optional<LateralAdjacency> & adjacency, L2LAdjacencyType side,
                       L2LAdjacencyType other_side) {
      if (!adjacency) {
        return;
      }
      const LaneletId b = adjacency->id;
      const double half_b = 0.5 * edges.length(b);
      edges.add(b, a, side, half_b, half_a);
      edges.add(a, b, adjacency->same_direction ? other_side : side, half_a, half_b);
      related.insert(unordered(a, b));
    };
    lateral(lanelet.adjacent_left, L2LAdjacencyType::adjacent_left, L2LAdjacencyType::adjacent_right);
    lateral(lanelet.adjacent_right, L2LAdjacencyType::adjacent_right, L2LAdjacencyType::adjacent_left);
  }

  auto shared = [&](const std::map<LaneletId, std::set<LaneletId>> & parents, L2LAdjacencyType type,
                    bool at_end) {
    for (const auto & [hub, members] : parents) {
      for (LaneletId x : members) {
        for (LaneletId y : members) {
          if (x == y) {
            continue;
          }
          edges.add(
            x, y, type, at_end ? edges.length(x) : 0.0, at_end ? edges.length(y) : 0.0);
          related.insert(unordered(x, y));
        }
      }
    }
  };
  // Lanelets sharing a successor are the predecessors of that successor.
  shared(predecessors, L2LAdjacencyType::merging, true);
  shared(successors, L2LAdjacencyType::diverging, false);

  if (enabled.contains(L2LAdjacencyType::conflicting)) {
    std::vector<std::pair<const Lanelet *, Box>> items;
    for (const auto & [id, lanelet] : network) {
      items.emplace_back(&lanelet, centerline_box(lanelet));
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (std::size_t j = i + 1; j < items.size(); ++j) {
        const Lanelet & a = *items[i].first;
        const Lanelet & b = *items[j].first;
        if (related.contains(unordered(a.id, b.id)) || !boxes_overlap(items[i].second, items[j].second)) {
          continue;
        }
        const auto hits = polyline_intersection(a.center, b.center);
        if (hits.empty()) {
          continue;
        }
        // Hits are sorted along `a`; the reverse edge uses the first crossing along `b`.
        const auto first_on_b = std::min_element(
          hits.begin(), hits.end(),
          [](const auto & x, const auto & y) { return x.arclength_b < y.arclength_b; });
        edges.add(a.id, b.id, L2LAdjacencyType::conflicting, hits.front().arclength_a, hits.front().arclength_b);
        edges.add(b.id, a.id, L2LAdjacencyType::conflicting, first_on_b->arclength_b, first_on_b->arclength_a);
      }
    }
  }
  return edges.finish();
}

std::string_view to_string(V2LAssignmentStrategy strategy)
{
  return strategy == V2LAssignmentStrategy::center ? "center" : "shape";
}

std::optional<V2LAssignmentStrategy> v2l_strategy_from_string(std::string_view name)
{
  if (name == "center") {
    return V2LAssignmentStrategy::center;
  }
  if (name == "shape") {
    return V2LAssignmentStrategy::shape;
  }
  return std::nullopt;
}

std::vector<V2LPair> build_v2l_edges(
  std::span<const VehicleFootprint> vehicles, const std::map<LaneletId, Lanelet> & network,
  V2LAssignmentStrategy strategy)
{
  std::vector<std::pair<LaneletId, std::vector<Point2>>> polygons;
  polygons.reserve(network.size());
  for (const auto & [id, lanelet] : network) {
    polygons.emplace_back(id, lanelet.polygon());
  }

  std::vector<V2LPair> out;
  for (const auto & vehicle : vehicles) {
    const OrientedRectangle body{vehicle.position, vehicle.orientation, vehicle.length, vehicle.width};
    for (const auto & [id, ring] : polygons) {
      bool hit = point_in_polygon(vehicle.position, ring);
      // The center lies inside the body, so the shape test only ever adds lanelets.
      if (!hit && strategy == V2LAssignmentStrategy::shape) {
        hit = rectangle_polygon_overlap(body, ring);
      }
      if (hit) {
        out.emplace_back(vehicle.id, id);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<L2VPair> build_l2v_edges(std::span<const V2LPair> v2l)
{
  std::vector<L2VPair> out;
  out.reserve(v2l.size());
  for (const auto & [vehicle, lanelet] : v2l) {
    out.emplace_back(lanelet, vehicle);
  }
  return out;
}

}  // namespace trafficgraph
