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

#include "trafficgraph/pipeline.hpp"

#include "trafficgraph/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace trafficgraph
{
namespace
{

// Fractions closer than this are treated as the same vertex when equalizing cut polylines.
constexpr double kFractionMergeTolerance = 1e-6;

std::vector<double> vertex_fractions(const Polyline & polyline)
{
  std::vector<double> out;
  for (double s : polyline.arclengths()) {
    out.push_back(s / polyline.length());
  }
  return out;
}

// Cut positions on a bound: projections of the centerline cut points, or proportional
// arclengths when the projections do not increase strictly.
std::vector<double> bound_cuts(const Polyline & bound, const std::vector<Point2> & center_points)
{
  const std::size_t k = center_points.size() - 1;
  std::vector<double> cuts(k + 1);
  cuts.front() = 0.0;
  cuts.back() = bound.length();
  bool increasing = true;
  for (std::size_t i = 1; i < k; ++i) {
    cuts[i] = project_point(bound, center_points[i]).arclength;
    if (!(cuts[i] > cuts[i - 1] + kPositionTolerance)) {
      increasing = false;
    }
  }
  if (!(cuts[k] > cuts[k - 1] + kPositionTolerance)) {
    increasing = false;
  }
  if (!increasing) {
    for (std::size_t i = 1; i < k; ++i) {
      cuts[i] = bound.length() * static_cast<double>(i) / static_cast<double>(k);
    }
  }
  return cuts;
}

struct Pieces
{
  std::vector<LaneletId> ids;
};

// Index of the neighbour piece with the largest overlap of the interval [lo, hi].
std::size_t best_overlap(double lo, double hi, std::size_t count, bool same_direction)
{
  std::size_t best = 0;
  double best_overlap = -1.0;
  for (std::size_t j = 0; j < count; ++j) {
    double a = static_cast<double>(j) / static_cast<double>(count);
    double b = static_cast<double>(j + 1) / static_cast<double>(count);
    if (!same_direction) {
      std::tie(a, b) = std::pair{1.0 - b, 1.0 - a};
    }
    const double overlap = std::min(hi, b) - std::max(lo, a);
    if (overlap > best_overlap + 1e-12) {
      best_overlap = overlap;
      best = j;
    }
  }
  return best;
}

}  // namespace

ScenarioTransform ScenarioTransform::preprocessor(std::string name, PreprocessFn fn)
{
  ScenarioTransform t;
  t.name_ = std::move(name);
  t.kind_ = TransformKind::preprocessor;
  t.preprocess_ = std::move(fn);
  return t;
}

ScenarioTransform ScenarioTransform::filter(std::string name, FilterFn fn)
{
  ScenarioTransform t;
  t.name_ = std::move(name);
  t.kind_ = TransformKind::filter;
  t.filter_ = std::move(fn);
  return t;
}

std::optional<Scenario> ScenarioTransform::operator()(const Scenario & scenario) const
{
  try {
    if (kind_ == TransformKind::filter) {
      return filter_(scenario) ? std::optional<Scenario>(scenario) : std::nullopt;
    }
    return preprocess_(scenario);
  } catch (const std::exception & e) {
    throw PipelineError(name_ + ": " + e.what());
  }
}

std::optional<Scenario> TransformChain::operator()(const Scenario & scenario) const
{
  std::optional<Scenario> current = scenario;
  for (const auto & element : elements_) {
    current = element(*current);
    if (!current) {
      return std::nullopt;
    }
  }
  return current;
}

TransformChain operator>>(const ScenarioTransform & a, const ScenarioTransform & b)
{
  return TransformChain({a, b});
}

TransformChain operator>>(const TransformChain & a, const ScenarioTransform & b)
{
  std::vector<ScenarioTransform> elements = a.elements();
  elements.push_back(b);
  return TransformChain(std::move(elements));
}

TransformChain operator>>(const ScenarioTransform & a, const TransformChain & b)
{
  std::vector<ScenarioTransform> elements{a};
  elements.insert(elements.end(), b.elements().begin(), b.elements().end());
  return TransformChain(std::move(elements));
}

TransformChain operator>>(const TransformChain & a, const TransformChain & b)
{
  std::vector<ScenarioTransform> elements = a.elements();
  elements.insert(elements.end(), b.elements().begin(), b.elements().end());
  return TransformChain(std::move(elements));
}

ScenarioTransform traffic_filter(std::size_t min_vehicles)
{
  return ScenarioTransform::filter(
    fmt::format("TrafficFilter(min={})", min_vehicles),
    [min_vehicles](const Scenario & scenario) { return scenario.obstacles.size() >= min_vehicles; });
}

ScenarioTransform segment_lanelets(double size)
{
  if (!(size > 0.0)) {
    throw ArgumentError("SegmentLanelets: size must be positive");
  }
  return ScenarioTransform::preprocessor(
    fmt::format("SegmentLanelets(size={})", size),
    [size](const Scenario & scenario) { return split_lanelets(scenario, size); });
}

Scenario split_lanelets(const Scenario & scenario, double size)
{
  if (!(size > 0.0)) {
    throw ArgumentError("split_lanelets: size must be positive");
  }
  LaneletId next_id = scenario.lanelets.empty() ? 0 : scenario.lanelets.rbegin()->first + 1;

  std::map<LaneletId, Pieces> pieces;
  std::map<LaneletId, Lanelet> out;
  for (const auto & [id, lanelet] : scenario.lanelets) {
    const double length = lanelet.length();
    if (!(length > size)) {
      pieces[id].ids = {id};
      continue;
    }
    const auto k = static_cast<std::size_t>(std::ceil(length / size));
    std::vector<double> center_cuts(k + 1);
    std::vector<Point2> center_points(k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
      center_cuts[i] = length * static_cast<double>(i) / static_cast<double>(k);
      center_points[i] = point_at_arclength(lanelet.center, center_cuts[i]).position;
    }
    const std::vector<double> left_cuts = bound_cuts(lanelet.left_bound, center_points);
    const std::vector<double> right_cuts = bound_cuts(lanelet.right_bound, center_points);

    for (std::size_t i = 0; i < k; ++i) {
      const Polyline left = sub_polyline(lanelet.left_bound, left_cuts[i], left_cuts[i + 1]);
      const Polyline right = sub_polyline(lanelet.right_bound, right_cuts[i], right_cuts[i + 1]);
      const Polyline center = sub_polyline(lanelet.center, center_cuts[i], center_cuts[i + 1]);

      std::vector<double> fractions;
      for (const Polyline * p : {&left, &right, &center}) {
        const auto f = vertex_fractions(*p);
        fractions.insert(fractions.end(), f.begin(), f.end());
      }
      std::sort(fractions.begin(), fractions.end());
      std::vector<double> merged;
      for (double f : fractions) {
        if (merged.empty() || f - merged.back() > kFractionMergeTolerance) {
          merged.push_back(f);
        }
      }
      merged.front() = 0.0;
      if (1.0 - merged.back() <= kFractionMergeTolerance) {
        merged.back() = 1.0;
      } else {
        merged.push_back(1.0);
      }

      Lanelet piece{
        .id = next_id++,
        .left_bound = resample_at_fractions(left, merged),
        .right_bound = resample_at_fractions(right, merged),
        .center = resample_at_fractions(center, merged),
        .predecessors = {},
        .successors = {},
        .adjacent_left = std::nullopt,
        .adjacent_right = std::nullopt,
      };
      pieces[id].ids.push_back(piece.id);
      out.emplace(piece.id, std::move(piece));
    }
  }

  auto first_piece = [&pieces](LaneletId id) { return pieces.at(id).ids.front(); };
  auto last_piece = [&pieces](LaneletId id) { return pieces.at(id).ids.back(); };

  for (const auto & [id, lanelet] : scenario.lanelets) {
    const std::vector<LaneletId> & ids = pieces.at(id).ids;
    const std::size_t k = ids.size();
    for (std::size_t i = 0; i < k; ++i) {
      Lanelet & piece = k == 1 ? out.emplace(id, lanelet).first->second : out.at(ids[i]);
      piece.predecessors.clear();
      piece.successors.clear();
      if (i == 0) {
        for (LaneletId p : lanelet.predecessors) {
          piece.predecessors.insert(last_piece(p));
        }
      } else {
        piece.predecessors.insert(ids[i - 1]);
      }
      if (i + 1 == k) {
        for (LaneletId s : lanelet.successors) {
          piece.successors.insert(first_piece(s));
        }
      } else {
        piece.successors.insert(ids[i + 1]);
      }

      const double lo = static_cast<double>(i) / static_cast<double>(k);
      const double hi = static_cast<double>(i + 1) / static_cast<double>(k);
      auto remap = [&](const std::optional<LateralAdjacency> & adjacency) -> std::optional<LateralAdjacency> {
        if (!adjacency) {
          return std::nullopt;
        }
        const std::vector<LaneletId> & neighbour = pieces.at(adjacency->id).ids;
        const std::size_t j = best_overlap(lo, hi, neighbour.size(), adjacency->same_direction);
        return LateralAdjacency{neighbour[j], adjacency->same_direction};
      };
      piece.adjacent_left = remap(lanelet.adjacent_left);
      piece.adjacent_right = remap(lanelet.adjacent_right);
    }
  }

  Scenario result;
  result.id = scenario.id;
  result.dt = scenario.dt;
  result.obstacles = scenario.obstacles;
  result.lanelets = std::move(out);
  validate_scenario(result);
  return result;
}

TrafficGraph apply_postprocessors(std::span<const Postprocessor> postprocessors, TrafficGraph graph)
{
  for (const auto & postprocessor : postprocessors) {
    try {
      graph = postprocessor.apply(std::move(graph));
    } catch (const std::exception & e) {
      throw PipelineError("postprocessor '" + postprocessor.name + "': " + e.what());
    }
    const auto problems = validate_graph(graph);
    if (!problems.empty()) {
      throw PipelineError(
        "postprocessor '" + postprocessor.name + "' broke a graph invariant: " + problems.front());
    }
  }
  return graph;
}

Postprocessor traffic_jam_postprocessor(double speed_threshold, std::size_t min_vehicles)
{
  return {"traffic_jam", [speed_threshold, min_vehicles](TrafficGraph graph) {
            const NodeStore & v = graph.vehicles;
            const auto offset = channel_offset(v.channels, "velocity");
            double speed_sum = 0.0;
            std::size_t count = 0;
            for (std::size_t r = 0; r < v.size(); ++r) {
              const Timestep t = v.timesteps.empty() ? graph.timestep : v.timesteps[r];
              if (t != graph.timestep || !offset) {
                continue;
              }
              speed_sum += v.features.row(static_cast<Eigen::Index>(r))
                             .segment(static_cast<Eigen::Index>(*offset), 2)
                             .cast<double>()
                             .norm();
              ++count;
            }
            const bool jam = count >= min_vehicles && count > 0 &&
                             speed_sum / static_cast<double>(count) < speed_threshold;
            graph.globals["traffic_jam"] = {jam ? 1.0F : 0.0F};
            return graph;
          }};
}

Postprocessor remove_offroad_vehicles()
{
  return {"remove_offroad_vehicles", [](TrafficGraph graph) {
            std::vector<bool> keep(graph.vehicles.size(), false);
            if (graph.has_relation(Relation::v2l)) {
              for (std::int64_t s : graph.edge_store(Relation::v2l).sources) {
                keep[static_cast<std::size_t>(s)] = true;
              }
            }
            return remove_vehicle_nodes(graph, keep);
          }};
}

}  // namespace trafficgraph
