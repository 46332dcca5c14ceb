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

#include "trafficgraph/extractor.hpp"

#include "trafficgraph/errors.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace trafficgraph
{
namespace
{

ChannelSchema single_base_schema(std::size_t n_pad)
{
  ChannelSchema schema = base_schema(n_pad);
  schema.relations.erase(Relation::vtv);
  return schema;
}

void set_row(FeatureMatrix & matrix, Eigen::Index row, const Eigen::VectorXd & values)
{
  matrix.row(row).head(values.size()) = values.cast<float>().transpose();
}

FeatureMatrix zero_matrix(std::size_t rows, const ChannelList & channels)
{
  return FeatureMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(total_width(channels)));
}

// Widens a store to the channel list of `channels`, which must extend the current one.
void widen(ChannelList & current, FeatureMatrix & features, const ChannelList & channels)
{
  if (current == channels) {
    return;
  }
  if (channels.size() < current.size() || !std::equal(current.begin(), current.end(), channels.begin())) {
    throw ExtractionError("temporal schema does not extend the single-step schema");
  }
  const Eigen::Index old_cols = features.cols();
  FeatureMatrix wider = FeatureMatrix::Zero(features.rows(), static_cast<Eigen::Index>(total_width(channels)));
  wider.leftCols(old_cols) = features;
  features = std::move(wider);
  current = channels;
}

}  // namespace

Simulation::Simulation(Scenario scenario) : scenario_(std::move(scenario))
{
  validate_scenario(scenario_);
  for (auto & [id, obstacle] : scenario_.obstacles) {
    obstacle = derive_state_derivatives(std::move(obstacle), scenario_.dt);
  }
  final_ = scenario_.final_timestep();
}

std::vector<Simulation::PresentVehicle> Simulation::vehicles_at(Timestep t) const
{
  if (t < first_timestep() || t > final_) {
    throw std::out_of_range(
      "timestep " + std::to_string(t) + " outside scenario lifetime [0, " + std::to_string(final_) + "]");
  }
  std::vector<PresentVehicle> out;
  for (const auto & [id, obstacle] : scenario_.obstacles) {
    if (const VehicleState * state = obstacle.state_at(t)) {
      out.push_back({&obstacle, state});
    }
  }
  return out;
}

const VehicleState * Simulation::state_of(ObstacleId id, Timestep t) const
{
  const auto it = scenario_.obstacles.find(id);
  return it == scenario_.obstacles.end() ? nullptr : it->second.state_at(t);
}

void validate(const ExtractionConfig & config, bool temporal)
{
  validate(config.v2v);
  if (config.n_pad < 2) {
    throw ArgumentError("n_pad must be >= 2");
  }
  if (config.cache_size < 1) {
    throw ArgumentError("cache_size must be >= 1");
  }
  if (temporal) {
    validate(config.vtv);
    if (config.vtv.max_horizon > static_cast<Timestep>(config.cache_size) - 1) {
      throw ArgumentError(
        "temporal horizon " + std::to_string(config.vtv.max_horizon) + " exceeds cache_size - 1 = " +
        std::to_string(config.cache_size - 1));
    }
  }
}

ChannelSchema extraction_schema(const ExtractionConfig & config, bool temporal)
{
  ChannelSchema schema = register_custom_extractors(single_base_schema(config.n_pad), instantiate(config.extractors));
  if (temporal) {
    schema.relations[Relation::vtv] = vtv_channels();
    schema = register_custom_extractors(std::move(schema), instantiate(config.temporal_extractors));
  }
  check_schema(schema);
  return schema;
}

TrafficExtractor::TrafficExtractor(ExtractionConfig config, const Simulation & simulation)
: config_(std::move(config)), simulation_(simulation)
{
  validate(config_, false);
  extractors_ = instantiate(config_.extractors);
  schema_ = register_custom_extractors(single_base_schema(config_.n_pad), extractors_);
  check_schema(schema_);

  const auto & lanelets = simulation_.scenario().lanelets;
  lanelets_.type = NodeType::lanelet;
  lanelets_.channels = schema_.lanelet;
  lanelets_.features = zero_matrix(lanelets.size(), schema_.lanelet);
  std::vector<std::int64_t> vertex_count;
  std::map<LaneletId, std::int64_t> row_of;
  for (const auto & [id, lanelet] : lanelets) {
    const auto row = static_cast<Eigen::Index>(lanelets_.ids.size());
    const LaneletFeatures features = lanelet_features(lanelet, config_.n_pad);
    set_row(lanelets_.features, row, features.row);
    vertex_count.push_back(features.vertex_count);
    row_of[id] = row;
    lanelets_.ids.push_back(id);
  }
  lanelets_.int_channels[kVertexCountChannel] = std::move(vertex_count);

  const std::vector<L2LEdgeRecord> records = build_l2l_edges(lanelets, config_.l2l_types);
  l2l_.relation = Relation::l2l;
  l2l_.channels = schema_.channels(Relation::l2l);
  l2l_.features = zero_matrix(records.size(), l2l_.channels);
  for (std::size_t e = 0; e < records.size(); ++e) {
    const L2LEdgeRecord & r = records[e];
    l2l_.sources.push_back(row_of.at(r.source));
    l2l_.targets.push_back(row_of.at(r.target));
    set_row(l2l_.features, static_cast<Eigen::Index>(e), l2l_features(r, lanelets.at(r.source), lanelets.at(r.target)));
  }
  sort_edges(l2l_);
}

TrafficGraph TrafficExtractor::extract(Timestep t)
{
  const Scenario & scenario = simulation_.scenario();
  const std::vector<Simulation::PresentVehicle> present = simulation_.vehicles_at(t);

  TrafficGraph graph = new_graph(scenario.id, t, schema_);
  graph.dt = scenario.dt;

  // Vehicle nodes, ascending id.
  std::map<ObstacleId, std::int64_t> vehicle_row;
  std::vector<VehiclePosition> positions;
  std::vector<VehicleFootprint> footprints;
  NodeStore & vehicles = graph.vehicles;
  vehicles.features = zero_matrix(present.size(), vehicles.channels);
  for (std::size_t i = 0; i < present.size(); ++i) {
    const auto & [obstacle, state] = present[i];
    vehicles.ids.push_back(obstacle->id);
    vehicles.timesteps.push_back(t);
    set_row(vehicles.features, static_cast<Eigen::Index>(i), vehicle_features(*state, {obstacle->length, obstacle->width}));
    vehicle_row[obstacle->id] = static_cast<std::int64_t>(i);
    positions.push_back({obstacle->id, state->position});
    footprints.push_back({obstacle->id, state->position, state->orientation, obstacle->length, obstacle->width});
  }
  auto state_at_row = [&present](std::int64_t row) -> const VehicleState & {
    return *present[static_cast<std::size_t>(row)].state;
  };

  // V2V edges.
  const std::vector<DirectedEdge> v2v = draw_v2v(config_.v2v, positions);
  EdgeStore & v2v_store = graph.edge_store(Relation::v2v);
  v2v_store.features = zero_matrix(v2v.size(), v2v_store.channels);
  for (std::size_t e = 0; e < v2v.size(); ++e) {
    const std::int64_t s = vehicle_row.at(v2v[e].first);
    const std::int64_t d = vehicle_row.at(v2v[e].second);
    v2v_store.sources.push_back(s);
    v2v_store.targets.push_back(d);
    set_row(v2v_store.features, static_cast<Eigen::Index>(e), v2v_features(state_at_row(s), state_at_row(d)));
  }
  sort_edges(v2v_store);

  // Static map: lanelets and L2L edges, then the vehicle-lanelet assignment.
  graph.lanelets = lanelets_;
  graph.edge_store(Relation::l2l) = l2l_;
  std::map<LaneletId, std::int64_t> lanelet_row;
  for (std::size_t i = 0; i < lanelets_.ids.size(); ++i) {
    lanelet_row[lanelets_.ids[i]] = static_cast<std::int64_t>(i);
  }
  const std::vector<V2LPair> v2l = build_v2l_edges(footprints, scenario.lanelets, config_.v2l_strategy);
  EdgeStore & v2l_store = graph.edge_store(Relation::v2l);
  EdgeStore & l2v_store = graph.edge_store(Relation::l2v);
  v2l_store.features = zero_matrix(v2l.size(), v2l_store.channels);
  l2v_store.features = zero_matrix(v2l.size(), l2v_store.channels);
  for (std::size_t e = 0; e < v2l.size(); ++e) {
    const std::int64_t s = vehicle_row.at(v2l[e].first);
    const std::int64_t d = lanelet_row.at(v2l[e].second);
    v2l_store.sources.push_back(s);
    v2l_store.targets.push_back(d);
    const Eigen::VectorXd row = v2l_features(state_at_row(s), scenario.lanelets.at(v2l[e].second));
    set_row(v2l_store.features, static_cast<Eigen::Index>(e), row);
    // Reverse edges mirror the forward features.
    l2v_store.sources.push_back(d);
    l2v_store.targets.push_back(s);
    set_row(l2v_store.features, static_cast<Eigen::Index>(e), row);
  }
  sort_edges(v2l_store);
  sort_edges(l2v_store);

  if (!extractors_.empty()) {
    const TrafficGraph snapshot = graph;
    run_custom_extractors(graph, FeatureContext{scenario, t, snapshot}, extractors_);
  }
  return apply_postprocessors(config_.postprocessors, std::move(graph));
}

TemporalTrafficExtractor::TemporalTrafficExtractor(ExtractionConfig config, const Simulation & simulation)
: single_(config, simulation)
{
  validate(config, true);
  extractors_ = instantiate(config.temporal_extractors);
  schema_ = single_.schema();
  schema_.relations[Relation::vtv] = vtv_channels();
  schema_ = register_custom_extractors(std::move(schema_), extractors_);
  check_schema(schema_);
}

TrafficGraph TemporalTrafficExtractor::extract(Timestep t)
{
  if (last_ && t <= *last_) {
    throw UsageError(
      "temporal extraction requires increasing timesteps: got " + std::to_string(t) + " after " +
      std::to_string(*last_));
  }
  TrafficGraph current = single_.extract(t);
  last_ = t;
  cache_.push_back(std::move(current));
  while (cache_.size() > single_.config().cache_size) {
    cache_.pop_front();
  }
  const std::vector<TrafficGraph> window(cache_.begin(), cache_.end());
  TrafficGraph merged = merge_window(window);

  const Simulation & simulation = single_.simulation();
  const std::vector<TemporalEdge> vtv = draw_vtv(single_.config().vtv, merged);
  EdgeStore & store = merged.edge_store(Relation::vtv);
  store.channels = schema_.channels(Relation::vtv);
  store.features = zero_matrix(vtv.size(), store.channels);
  const NodeStore & v = merged.vehicles;
  for (std::size_t e = 0; e < vtv.size(); ++e) {
    const TemporalEdge & edge = vtv[e];
    const VehicleState * older = simulation.state_of(v.ids[edge.source], v.timesteps[edge.source]);
    const VehicleState * newer = simulation.state_of(v.ids[edge.target], v.timesteps[edge.target]);
    if (older == nullptr || newer == nullptr) {
      throw ExtractionError(
        "temporal edge references vehicle " + std::to_string(v.ids[edge.source]) +
        " at a timestep without a recorded state");
    }
    store.sources.push_back(static_cast<std::int64_t>(edge.source));
    store.targets.push_back(static_cast<std::int64_t>(edge.target));
    set_row(store.features, static_cast<Eigen::Index>(e), vtv_features(*older, *newer, edge.steps, merged.dt));
  }

  if (!extractors_.empty()) {
    widen(merged.vehicles.channels, merged.vehicles.features, schema_.vehicle);
    widen(merged.lanelets.channels, merged.lanelets.features, schema_.lanelet);
    for (auto & [relation, edges] : merged.edges) {
      widen(edges.channels, edges.features, schema_.channels(relation));
    }
    const TrafficGraph snapshot = merged;
    run_custom_extractors(merged, FeatureContext{simulation.scenario(), t, snapshot}, extractors_);
  }
  return apply_postprocessors(single_.config().temporal_postprocessors, std::move(merged));
}

TrafficGraph extract(const ExtractionConfig & config, const Simulation & simulation, Timestep t)
{
  TrafficExtractor extractor(config, simulation);
  return extractor.extract(t);
}

}  // namespace trafficgraph
