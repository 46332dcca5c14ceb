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

#include "trafficgraph/edge_drawers.hpp"

#include "trafficgraph/delaunay.hpp"
#include "trafficgraph/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace trafficgraph
{

std::string_view to_string(V2VDrawerKind kind)
{
  switch (kind) {
    case V2VDrawerKind::voronoi:
      return "voronoi";
    case V2VDrawerKind::k_nearest:
      return "k_nearest";
    case V2VDrawerKind::fully_connected:
      return "fully_connected";
    case V2VDrawerKind::radius:
      return "radius";
  }
  return "?";
}

std::optional<V2VDrawerKind> v2v_drawer_from_string(std::string_view name)
{
  for (V2VDrawerKind kind :
       {V2VDrawerKind::voronoi, V2VDrawerKind::k_nearest, V2VDrawerKind::fully_connected,
        V2VDrawerKind::radius}) {
    if (to_string(kind) == name) {
      return kind;
    }
  }
  return std::nullopt;
}

void validate(const V2VDrawerConfig & config)
{
  if (config.kind == V2VDrawerKind::k_nearest && config.k < 1) {
    throw ArgumentError("k_nearest drawer requires k >= 1");
  }
  if (config.kind == V2VDrawerKind::radius && !(config.radius > 0.0)) {
    throw ArgumentError("radius drawer requires radius > 0");
  }
  if (config.max_distance && !(*config.max_distance >= 0.0)) {
    throw ArgumentError("max_distance must be non-negative");
  }
}

std::vector<DirectedEdge> draw_v2v(const V2VDrawerConfig & config, std::span<const VehiclePosition> vehicles)
{
  validate(config);
  const std::size_t n = vehicles.size();
  std::vector<DirectedEdge> edges;
  if (n < 2) {
    return edges;
  }
  auto distance = [&vehicles](std::size_t i, std::size_t j) {
    return (vehicles[i].position - vehicles[j].position).norm();
  };
  auto add = [&](std::size_t source, std::size_t target) {
    if (config.max_distance && distance(source, target) > *config.max_distance) {
      return;
    }
    edges.emplace_back(vehicles[source].id, vehicles[target].id);
  };

  switch (config.kind) {
    case V2VDrawerKind::voronoi: {
      std::vector<Point2> points;
      points.reserve(n);
      for (const auto & v : vehicles) {
        points.push_back(v.position);
      }
      for (const auto & [i, j] : delaunay_neighbors(points)) {
        add(i, j);
        add(j, i);
      }
      break;
    }
    case V2VDrawerKind::k_nearest: {
      const std::size_t k = std::min(config.k, n - 1);
      std::vector<std::size_t> others;
      for (std::size_t ego = 0; ego < n; ++ego) {
        others.clear();
        for (std::size_t j = 0; j < n; ++j) {
          if (j != ego) {
            others.push_back(j);
          }
        }
        std::partial_sort(
          others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k), others.end(),
          [&](std::size_t a, std::size_t b) {
            const double da = (vehicles[a].position - vehicles[ego].position).squaredNorm();
            const double db = (vehicles[b].position - vehicles[ego].position).squaredNorm();
            return std::tie(da, vehicles[a].id) < std::tie(db, vehicles[b].id);
          });
        for (std::size_t r = 0; r < k; ++r) {
          add(others[r], ego);
        }
      }
      break;
    }
    case V2VDrawerKind::fully_connected:
    case V2VDrawerKind::radius:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) {
            continue;
          }
          if (config.kind == V2VDrawerKind::radius && distance(i, j) > config.radius) {
            continue;
          }
          add(i, j);
        }
      }
      break;
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

void validate(const VTVDrawerConfig & config)
{
  if (config.max_horizon < 1) {
    throw ArgumentError("temporal edge horizon must be >= 1");
  }
}

std::vector<TemporalEdge> draw_vtv(const VTVDrawerConfig & config, const TrafficGraph & window)
{
  validate(config);
  const NodeStore & v = window.vehicles;
  std::vector<TemporalEdge> edges;
  if (v.timesteps.size() != v.size()) {
    throw ArgumentError("draw_vtv: vehicle nodes carry no timestep tags");
  }
  // Nodes are sorted by (id, timestep), so every vehicle occupies a contiguous run.
  std::size_t begin = 0;
  while (begin < v.size()) {
    std::size_t end = begin;
    while (end < v.size() && v.ids[end] == v.ids[begin]) {
      ++end;
    }
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < end; ++j) {
        const Timestep steps = v.timesteps[j] - v.timesteps[i];
        if (steps > 0 && steps <= config.max_horizon) {
          edges.push_back({i, j, steps});
        }
      }
    }
    begin = end;
  }
  return edges;
}

}  // namespace trafficgraph
