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

#ifndef TRAFFICGRAPH__TRAFFIC_GRAPH_HPP_
#define TRAFFICGRAPH__TRAFFIC_GRAPH_HPP_

#include "trafficgraph/scenario.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trafficgraph
{

enum class NodeType { vehicle, lanelet };

enum class Relation { l2l, v2v, v2l, l2v, vtv };

inline constexpr Relation kAllRelations[] = {
  Relation::l2l, Relation::v2v, Relation::v2l, Relation::l2v, Relation::vtv};

std::string_view to_string(NodeType type);
std::string_view to_string(Relation relation);
std::optional<NodeType> node_type_from_string(std::string_view name);
std::optional<Relation> relation_from_string(std::string_view name);

NodeType source_type(Relation relation);
NodeType target_type(Relation relation);

struct ChannelSpec
{
  std::string name;
  std::size_t width{1};
  std::string unit;

  bool operator==(const ChannelSpec &) const = default;
};

using ChannelList = std::vector<ChannelSpec>;

std::size_t total_width(const ChannelList & channels);

/// Column offset of the named channel, if declared.
std::optional<std::size_t> channel_offset(const ChannelList & channels, std::string_view name);

/// Column layout of every store. Missing stores are treated as zero-column.
struct ChannelSchema
{
  ChannelList vehicle;
  ChannelList lanelet;
  std::map<Relation, ChannelList> relations;

  const ChannelList & channels(Relation relation) const;

  bool operator==(const ChannelSchema &) const = default;
};

using FeatureMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Bitwise comparison, so NaN padding compares equal to itself.
bool bitwise_equal(const FeatureMatrix & a, const FeatureMatrix & b);

struct NodeStore
{
  NodeType type{NodeType::vehicle};
  /// Vehicle or lanelet id per row.
  std::vector<std::int64_t> ids;
  /// Vehicle stores: timestep tag per row. Lanelet stores: empty.
  std::vector<std::int64_t> timesteps;
  ChannelList channels;
  FeatureMatrix features;
  /// Integer per-node metadata such as the valid lanelet vertex count.
  std::map<std::string, std::vector<std::int64_t>> int_channels;

  std::size_t size() const noexcept { return ids.size(); }
};

struct EdgeStore
{
  Relation relation{Relation::v2v};
  std::vector<std::int64_t> sources;
  std::vector<std::int64_t> targets;
  ChannelList channels;
  FeatureMatrix features;

  std::size_t size() const noexcept { return sources.size(); }
};

enum class GraphKind { single, temporal };

/**
 * @brief Heterogeneous traffic graph, single-timestep or temporal.
 *
 * Nodes are ordered by ascending external id (then timestep for temporal vehicle nodes) and
 * edges by ascending (source index, target index). A single graph holds the L2L, V2V, V2L and
 * L2V stores; a temporal graph additionally holds VTV. `window` is (t, t) for single graphs.
 */
struct TrafficGraph
{
  GraphKind kind{GraphKind::single};
  std::string scenario_id;
  Timestep timestep{0};
  Timestep window_begin{0};
  Timestep window_end{0};
  double dt{0.1};
  NodeStore vehicles{NodeType::vehicle, {}, {}, {}, {}, {}};
  NodeStore lanelets{NodeType::lanelet, {}, {}, {}, {}, {}};
  std::map<Relation, EdgeStore> edges;
  std::map<std::string, std::vector<float>> globals;

  const NodeStore & nodes(NodeType type) const;
  NodeStore & nodes(NodeType type);
  const EdgeStore & edge_store(Relation relation) const;
  EdgeStore & edge_store(Relation relation);
  bool has_relation(Relation relation) const { return edges.contains(relation); }
  ChannelSchema schema() const;
};

/// Exact equality including bitwise feature comparison.
bool operator==(const TrafficGraph & a, const TrafficGraph & b);

/**
 * @brief Empty single-timestep graph with the declared channels.
 * @throws SchemaError on a duplicate channel name within a store or a zero-width channel.
 */
TrafficGraph new_graph(const std::string & scenario_id, Timestep timestep, const ChannelSchema & schema);

/// @throws SchemaError as new_graph.
void check_schema(const ChannelSchema & schema);

/**
 * @brief Merge a chronological sequence of single graphs into one temporal graph.
 *
 * Vehicle nodes of every graph are tagged with their timestep and sorted by (id, timestep);
 * lanelet nodes, L2L edges and globals come from the newest graph; V2V, V2L and L2V edges are
 * re-indexed. The VTV store is created empty.
 * @throws MergeError on an empty sequence, mixed scenario ids, non-increasing timesteps,
 *         differing schemas or differing lanelet sets.
 */
TrafficGraph merge_window(std::span<const TrafficGraph> sequence);

/// Nodes tagged `t` and the V2V/V2L/L2V edges among them, plus lanelets and L2L edges.
TrafficGraph time_slice(const TrafficGraph & graph, Timestep t);

/// Drops vehicle rows where `keep` is false and every edge touching them; re-indexes the rest.
TrafficGraph remove_vehicle_nodes(const TrafficGraph & graph, const std::vector<bool> & keep);

/// Stable sort of the edges (and their feature rows) by (source index, target index).
void sort_edges(EdgeStore & store);

/// Feature rows at `rows`, in that order.
FeatureMatrix select_rows(const FeatureMatrix & matrix, std::span<const std::size_t> rows);

/// Full invariant scan. Returns one message per violation; empty when the graph is valid.
std::vector<std::string> validate_graph(const TrafficGraph & graph);

}  // namespace trafficgraph

#endif  // TRAFFICGRAPH__TRAFFIC_GRAPH_HPP_
