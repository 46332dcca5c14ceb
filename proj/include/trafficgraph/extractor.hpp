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

#ifndef TRAFFICGRAPH__EXTRACTOR_HPP_
#define TRAFFICGRAPH__EXTRACTOR_HPP_

#include "trafficgraph/edge_drawers.hpp"
#include "trafficgraph/features.hpp"
#include "trafficgraph/graph_builders.hpp"
#include "trafficgraph/pipeline.hpp"
#include "trafficgraph/scenario.hpp"
#include "trafficgraph/traffic_graph.hpp"

#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

namespace trafficgraph
{

/// Static replay of the recorded trajectories. Missing derivatives are filled on construction.
class Simulation
{
public:
  explicit Simulation(Scenario scenario);

  const Scenario & scenario() const noexcept { return scenario_; }

  /// Lifetime is [0, final_timestep()]; a scenario without obstacles lives for one step.
  Timestep first_timestep() const noexcept { return 0; }
  Timestep final_timestep() const noexcept { return final_; }
  Timestep lifetime() const noexcept { return final_ + 1; }

  struct PresentVehicle
  {
    const DynamicObstacle * obstacle;
    const VehicleState * state;
  };

  /// Vehicles present at t, sorted by id. @throws std::out_of_range outside the lifetime.
  std::vector<PresentVehicle> vehicles_at(Timestep t) const;

  /// State of one vehicle at t, or nullptr if it is absent.
  const VehicleState * state_of(ObstacleId id, Timestep t) const;

private:
  Scenario scenario_;
  Timestep final_{0};
};

struct ExtractionConfig
{
  V2VDrawerConfig v2v;
  VTVDrawerConfig vtv;
  L2LTypeSet l2l_types{all_l2l_types()};
  V2LAssignmentStrategy v2l_strategy{V2LAssignmentStrategy::center};
  std::size_t n_pad{kDefaultVertexPadding};
  /// Custom extractors run on every single-step graph.
  std::vector<FeatureExtractorFactory> extractors;
  /// Custom extractors run on every merged temporal graph.
  std::vector<FeatureExtractorFactory> temporal_extractors;
  std::vector<Postprocessor> postprocessors;
  std::vector<Postprocessor> temporal_postprocessors;
  /// Number of single-step graphs in a temporal window.
  std::size_t cache_size{5};
};

/// @throws ArgumentError on invalid drawer settings, n_pad < 2, cache_size < 1 or, for
///         temporal extraction, a temporal horizon beyond cache_size - 1.
void validate(const ExtractionConfig & config, bool temporal);

/// Channel layout of the graphs the configuration produces (VTV only when temporal).
ChannelSchema extraction_schema(const ExtractionConfig & config, bool temporal);

/**
 * @brief Single-timestep extraction over one scenario.
 *
 * Lanelet nodes and L2L edges are computed once per scenario. Custom extractors are
 * instantiated per extractor object, so stateful extractors see one scenario each.
 */
class TrafficExtractor
{
public:
  TrafficExtractor(ExtractionConfig config, const Simulation & simulation);

  /// @throws std::out_of_range if t is outside the scenario lifetime.
  TrafficGraph extract(Timestep t);

  const ChannelSchema & schema() const noexcept { return schema_; }
  const ExtractionConfig & config() const noexcept { return config_; }
  const Simulation & simulation() const noexcept { return simulation_; }

private:
  ExtractionConfig config_;
  const Simulation & simulation_;
  FeatureExtractorSet extractors_;
  ChannelSchema schema_;
  NodeStore lanelets_;
  EdgeStore l2l_;
};

/**
 * @brief Temporal extraction keeping the n most recent single-step graphs.
 *
 * Each call extracts the graph at t, pushes it into the cache, merges the cache, draws and
 * featurizes VTV edges, runs the temporal extractors and postprocessors.
 */
class TemporalTrafficExtractor
{
public:
  TemporalTrafficExtractor(ExtractionConfig config, const Simulation & simulation);

  /// @throws UsageError if t does not increase between calls, std::out_of_range outside the
  ///         lifetime.
  TrafficGraph extract(Timestep t);

  const ChannelSchema & schema() const noexcept { return schema_; }
  TrafficExtractor & single() noexcept { return single_; }

private:
  TrafficExtractor single_;
  FeatureExtractorSet extractors_;
  ChannelSchema schema_;
  std::deque<TrafficGraph> cache_;
  std::optional<Timestep> last_;
};

/// One-shot single-step extraction with a fresh extractor.
TrafficGraph extract(const ExtractionConfig & config, const Simulation & simulation, Timestep t);

}  // namespace trafficgraph

#endif  // TRAFFICGRAPH__EXTRACTOR_HPP_
