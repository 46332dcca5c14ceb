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

#ifndef TRAFFICGRAPH__PIPELINE_HPP_
#define TRAFFICGRAPH__PIPELINE_HPP_

#include "trafficgraph/scenario.hpp"
#include "trafficgraph/traffic_graph.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trafficgraph
{

enum class TransformKind { preprocessor, filter };

/// A named scenario preprocessor (Scenario -> Scenario) or filter (Scenario -> verdict).
class ScenarioTransform
{
public:
  using PreprocessFn = std::function<Scenario(const Scenario &)>;
  using FilterFn = std::function<bool(const Scenario &)>;

  static ScenarioTransform preprocessor(std::string name, PreprocessFn fn);
  static ScenarioTransform filter(std::string name, FilterFn fn);

  const std::string & name() const noexcept { return name_; }
  TransformKind kind() const noexcept { return kind_; }

  /// Transformed scenario, or nullopt when a filter rejects it.
  /// @throws PipelineError carrying the transform name when the element fails.
  std::optional<Scenario> operator()(const Scenario & scenario) const;

private:
  ScenarioTransform() = default;

  std::string name_;
  TransformKind kind_{TransformKind::preprocessor};
  PreprocessFn preprocess_;
  FilterFn filter_;
};

/// Transforms applied left to right; the first rejecting filter stops the chain.
class TransformChain
{
public:
  TransformChain() = default;
  explicit TransformChain(std::vector<ScenarioTransform> elements) : elements_(std::move(elements)) {}

  std::optional<Scenario> operator()(const Scenario & scenario) const;

  const std::vector<ScenarioTransform> & elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }

private:
  std::vector<ScenarioTransform> elements_;
};

TransformChain operator>>(const ScenarioTransform & a, const ScenarioTransform & b);
TransformChain operator>>(const TransformChain & a, const ScenarioTransform & b);
TransformChain operator>>(const ScenarioTransform & a, const TransformChain & b);
TransformChain operator>>(const TransformChain & a, const TransformChain & b);

/// Accepts scenarios with at least `min_vehicles` dynamic obstacles.
ScenarioTransform traffic_filter(std::size_t min_vehicles);

/// Preprocessor wrapping split_lanelets. @throws ArgumentError if size <= 0.
ScenarioTransform segment_lanelets(double size);

/**
 * @brief Split every lanelet longer than `size` into ceil(length / size) pieces of equal
 * centerline arclength.
 *
 * Bounds are cut where the centerline cut points project onto them (falling back to
 * proportional arclength if the projections are not strictly increasing); the three cut
 * polylines are then resampled at the union of their vertex arclength fractions so that they
 * share a vertex count. Pieces receive fresh ids counting up from the largest existing id in
 * (lanelet id, piece) order, are chained by successor links, and inherit the outer
 * predecessor/successor links. A piece's lateral neighbour is the neighbouring piece whose
 * arclength fraction interval overlaps it most (intervals reversed for opposite direction).
 * @throws ArgumentError if size <= 0.
 */
Scenario split_lanelets(const Scenario & scenario, double size);

struct Postprocessor
{
  std::string name;
  std::function<TrafficGraph(TrafficGraph)> apply;
};

/// Applies the postprocessors in order and rescans the graph invariants after each one.
/// @throws PipelineError naming the postprocessor that failed or broke an invariant.
TrafficGraph apply_postprocessors(std::span<const Postprocessor> postprocessors, TrafficGraph graph);

/// Adds the global "traffic_jam" = 1 when at least `min_vehicles` vehicles of the newest
/// timestep move slower than `speed_threshold` on average, else 0.
Postprocessor traffic_jam_postprocessor(double speed_threshold = 2.0, std::size_t min_vehicles = 3);

/// Drops vehicle nodes without any V2L edge.
Postprocessor remove_offroad_vehicles();

}  // namespace trafficgraph

#endif  // TRAFFICGRAPH__PIPELINE_HPP_
