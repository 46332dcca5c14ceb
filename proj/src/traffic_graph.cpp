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

#include "trafficgraph/traffic_graph.hpp"

#include "trafficgraph/errors.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace trafficgraph
{
namespace
{

const ChannelList kNoChannels{};

EdgeStore empty_edge_store(Relation relation, const ChannelList & channels)
{
  EdgeStore store;
  store.relation = relation;
  store.channels = channels;
  store.features = FeatureMatrix(0, static_cast<Eigen::Index>(total_width(channels)));
  return store;
}

void check_channels(const ChannelList & channels, std::string_view store)
{
  std::set<std::string> names;
  for (const auto & channel : channels) {
    if (channel.width == 0) {
      throw SchemaError(
        "store '" + std::string(store) + "': channel '" + channel.name + "' has zero width");
    }
    if (!names.insert(channel.name).second) {
      throw SchemaError(
        "store '" + std::string(store) + "': duplicate channel name '" + channel.name + "'");
    }
  }
}

// Re-index the vehicle endpoints of an edge store and keep only rows whose endpoints survive.
EdgeStore remap_vehicle_edges(const EdgeStore & store, const std::vector<std::int64_t> & mapping)
{
  const bool source_vehicle = source_type(store.relation) == NodeType::vehicle;
  const bool target_vehicle = target_type(store.relation) == NodeType::vehicle;
  EdgeStore out = empty_edge_store(store.relation, store.channels);
  std::vector<std::size_t> rows;
  for (std::size_t e = 0; e < store.size(); ++e) {
    std::int64_t s = store.sources[e];
    std::int64_t t = store.targets[e];
    if (source_vehicle) {
      s = mapping[static_cast<std::size_t>(s)];
    }
    if (target_vehicle) {
      t = mapping[static_cast<std::size_t>(t)];
    }
    if (s < 0 || t < 0) {
      continue;
    }
    out.sources.push_back(s);
    out.targets.push_back(t);
    rows.push_back(e);
  }
  out.features = select_rows(store.features, rows);
  return out;
}

NodeStore select_nodes(const NodeStore & store, const std::vector<std::size_t> & rows)
{
  NodeStore out;
  out.type = store.type;
  out.channels = store.channels;
  out.features = select_rows(store.features, rows);
  for (std::size_t r : rows) {
    out.ids.push_back(store.ids[r]);
    if (!store.timesteps.empty()) {
      out.timesteps.push_back(store.timesteps[r]);
    }
  }
  for (const auto & [name, values] : store.int_channels) {
    auto & column = out.int_channels[name];
    for (std::size_t r : rows) {
      column.push_back(values[r]);
    }
  }
  return out;
}

bool equal_nodes(const NodeStore & a, const NodeStore & b)
{
  return a.type == b.type && a.ids == b.ids && a.timesteps == b.timesteps &&
         a.channels == b.channels && bitwise_equal(a.features, b.features) &&
         a.int_channels == b.int_channels;
}

bool equal_edges(const EdgeStore & a, const EdgeStore & b)
{
  return a.relation == b.relation && a.sources == b.sources && a.targets == b.targets &&
         a.channels == b.channels && bitwise_equal(a.features, b.features);
}

}  // namespace

std::string_view to_string(NodeType type)
{
  return type == NodeType::vehicle ? "v" : "l";
}

std::string_view to_string(Relation relation)
{
  switch (relation) {
    case Relation::l2l:
      return "l2l";
    case Relation::v2v:
      return "v2v";
    case Relation::v2l:
      return "v2l";
    case Relation::l2v:
      return "l2v";
    case Relation::vtv:
      return "vtv";
  }
  return "?";
}

std::optional<NodeType> node_type_from_string(std::string_view name)
{
  if (name == "v") {
    return NodeType::vehicle;
  }
  if (name == "l") {
    return NodeType::lanelet;
  }
  return std::nullopt;
}

std::optional<Relation> relation_from_string(std::string_view name)
{
  for (Relation relation : kAllRelations) {
    if (to_string(relation) == name) {
      return relation;
    }
  }
  return std::nullopt;
}

NodeType source_type(Relation relation)
{
  return relation == Relation::l2l || relation == Relation::l2v ? NodeType::lanelet
                                                                : NodeType::vehicle;
}

NodeType target_type(Relation relation)
{
  return relation == Relation::l2l || relation == Relation::v2l ? NodeType::lanelet
                                                                : NodeType::vehicle;
}

std::size_t total_width(const ChannelList & channels)
{
  std::size_t width = 0;
  for (const auto & channel : channels) {
    width += channel.width;
  }
  return width;
}

std::optional<std::size_t> channel_offset(const ChannelList & channels, std::string_view name)
{
  std::size_t offset = 0;
  for (const auto & channel : channels) {
    if (channel.name == name) {
      return offset;
    }
    offset += channel.width;
  }
  return std::nullopt;
}

const ChannelList & ChannelSchema::channels(Relation relation) const
{
  const auto it = relations.find(relation);
  return it == relations.end() ? kNoChannels : it->second;
}

bool bitwise_equal(const FeatureMatrix & a, const FeatureMatrix & b)
{
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return false;
  }
  return a.size() == 0 ||
         std::memcmp(a.data(), b.data(), static_cast<std::size_t>(a.size()) * sizeof(float)) == 0;
}

const NodeStore & TrafficGraph::nodes(NodeType type) const
{
  return type == NodeType::vehicle ? vehicles : lanelets;
}

NodeStore & TrafficGraph::nodes(NodeType type)
{
  return type == NodeType::vehicle ? vehicles : lanelets;
}

const EdgeStore & TrafficGraph::edge_store(Relation relation) const
{
  const auto it = edges.find(relation);
  if (it == edges.end()) {
    throw std::out_of_range("graph has no '" + std::string(to_string(relation)) + "' store");
  }
  return it->second;
}

EdgeStore & TrafficGraph::edge_store(Relation relation)
{
  const auto it = edges.find(relation);
  if (it == edges.end()) {
    throw std::out_of_range("graph has no '" + std::string(to_string(relation)) + "' store");
  }
  return it->second;
}

ChannelSchema TrafficGraph::schema() const
{
  ChannelSchema schema;
  schema.vehicle = vehicles.channels;
  schema.lanelet = lanelets.channels;
  for (const auto & [relation, store] : edges) {
    schema.relations[relation] = store.channels;
  }
  return schema;
}

bool operator==(const TrafficGraph & a, const TrafficGraph & b)
{
  if (
    a.kind != b.kind || a.scenario_id != b.scenario_id || a.timestep != b.timestep ||
    a.window_begin != b.window_begin || a.window_end != b.window_end || a.dt != b.dt ||
    a.globals != b.globals || a.edges.size() != b.edges.size()) {
    return false;
  }
  if (!equal_nodes(a.vehicles, b.vehicles) || !equal_nodes(a.lanelets, b.lanelets)) {
    return false;
  }
  for (const auto & [relation, store] : a.edges) {
    const auto it = b.edges.find(relation);
    if (it == b.edges.end() || !equal_edges(store, it->second)) {
      return false;
    }
  }
  return true;
}

void check_schema(const ChannelSchema & schema)
{
  check_channels(schema.vehicle, "v");
  check_channels(schema.lanelet, "l");
  for (const auto & [relation, channels] : schema.relations) {
    check_channels(channels, to_string(relation));
  }
}

TrafficGraph new_graph(const std::string & scenario_id, Timestep timestep, const ChannelSchema & schema)
{
  check_schema(schema);
  TrafficGraph graph;
  graph.scenario_id = scenario_id;
  graph.timestep = timestep;
  graph.window_begin = timestep;
  graph.window_end = timestep;
  graph.vehicles.channels = schema.vehicle;
  graph.vehicles.features = FeatureMatrix(0, static_cast<Eigen::Index>(total_width(schema.vehicle)));
  graph.lanelets.channels = schema.lanelet;
  graph.lanelets.features = FeatureMatrix(0, static_cast<Eigen::Index>(total_width(schema.lanelet)));
  for (Relation relation : {Relation::l2l, Relation::v2v, Relation::v2l, Relation::l2v}) {
    graph.edges[relation] = empty_edge_store(relation, schema.channels(relation));
  }
  return graph;
}

FeatureMatrix select_rows(const FeatureMatrix & matrix, std::span<const std::size_t> rows)
{
  FeatureMatrix out(static_cast<Eigen::Index>(rows.size()), matrix.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = matrix.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

void sort_edges(EdgeStore & store)
{
  std::vector<std::size_t> order(store.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&store](std::size_t a, std::size_t b) {
    return std::tie(store.sources[a], store.targets[a]) <
           std::tie(store.sources[b], store.targets[b]);
  });
  std::vector<std::int64_t> sources;
  std::vector<std::int64_t> targets;
  sources.reserve(order.size());
  targets.reserve(order.size());
  for (std::size_t e : order) {
    sources.push_back(store.sources[e]);
    targets.push_back(store.targets[e]);
  }
  store.sources = std::move(sources);
  store.targets = std::move(targets);
  store.features = select_rows(store.features, order);
}

TrafficGraph merge_window(std::span<const TrafficGraph> sequence)
{
  if (sequence.empty()) {
    throw MergeError("merge_window: empty sequence");
  }
  const TrafficGraph & newest = sequence.back();
  const ChannelSchema schema = newest.schema();
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    const TrafficGraph & g = sequence[k];
    if (g.kind != GraphKind::single) {
      throw MergeError("merge_window: input " + std::to_string(k) + " is already temporal");
    }
    if (g.scenario_id != newest.scenario_id) {
      throw MergeError(
        "merge_window: mixed scenario ids '" + g.scenario_id + "' and '" + newest.scenario_id + "'");
    }
    if (k > 0 && g.timestep <= sequence[k - 1].timestep) {
      throw MergeError(
        "merge_window: timesteps not strictly increasing at " + std::to_string(g.timestep));
    }
    if (!(g.schema() == schema)) {
      throw MergeError("merge_window: channel schemas differ at t=" + std::to_string(g.timestep));
    }
    if (g.lanelets.ids != newest.lanelets.ids) {
      throw MergeError("merge_window: lanelet sets differ at t=" + std::to_string(g.timestep));
    }
  }

  struct Row
  {
    std::int64_t id;
    Timestep t;
    std::size_t graph;
    std::size_t row;
  };
  std::vector<Row> rows;
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    const auto & v = sequence[k].vehicles;
    for (std::size_t r = 0; r < v.size(); ++r) {
      rows.push_back({v.ids[r], sequence[k].timestep, k, r});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row & a, const Row & b) {
    return std::tie(a.id, a.t) < std::tie(b.id, b.t);
  });

  TrafficGraph merged;
  merged.kind = GraphKind::temporal;
  merged.scenario_id = newest.scenario_id;
  merged.timestep = newest.timestep;
  merged.window_begin = sequence.front().timestep;
  merged.window_end = newest.timestep;
  merged.dt = newest.dt;
  merged.lanelets = newest.lanelets;
  merged.globals = newest.globals;
  merged.vehicles.channels = newest.vehicles.channels;
  merged.vehicles.features =
    FeatureMatrix(static_cast<Eigen::Index>(rows.size()), newest.vehicles.features.cols());

  std::vector<std::vector<std::int64_t>> index(sequence.size());
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    index[k].assign(sequence[k].vehicles.size(), -1);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row & row = rows[i];
    const NodeStore & source = sequence[row.graph].vehicles;
    merged.vehicles.ids.push_back(row.id);
    merged.vehicles.timesteps.push_back(row.t);
    merged.vehicles.features.row(static_cast<Eigen::Index>(i)) =
      source.features.row(static_cast<Eigen::Index>(row.row));
    for (const auto & [name, values] : source.int_channels) {
      merged.vehicles.int_channels[name].push_back(values[row.row]);
    }
    index[row.graph][row.row] = static_cast<std::int64_t>(i);
  }

  merged.edges[Relation::l2l] = newest.edge_store(Relation::l2l);
  for (Relation relation : {Relation::v2v, Relation::v2l, Relation::l2v}) {
    EdgeStore store = empty_edge_store(relation, schema.channels(relation));
    std::vector<FeatureMatrix> parts;
    Eigen::Index total = 0;
    for (std::size_t k = 0; k < sequence.size(); ++k) {
      EdgeStore part = remap_vehicle_edges(sequence[k].edge_store(relation), index[k]);
      store.sources.insert(store.sources.end(), part.sources.begin(), part.sources.end());
      store.targets.insert(store.targets.end(), part.targets.begin(), part.targets.end());
      total += part.features.rows();
      parts.push_back(std::move(part.features));
    }
    store.features = FeatureMatrix(total, static_cast<Eigen::Index>(total_width(store.channels)));
    Eigen::Index offset = 0;
    for (const auto & part : parts) {
      store.features.middleRows(offset, part.rows()) = part;
      offset += part.rows();
    }
    sort_edges(store);
    merged.edges[relation] = std::move(store);
  }
  merged.edges[Relation::vtv] = empty_edge_store(Relation::vtv, {});
  return merged;
}

TrafficGraph time_slice(const TrafficGraph & graph, Timestep t)
{
  if (t < graph.window_begin || t > graph.window_end) {
    throw std::out_of_range(
      "time_slice: t=" + std::to_string(t) + " outside window [" +
      std::to_string(graph.window_begin) + ", " + std::to_string(graph.window_end) + "]");
  }
  std::vector<std::size_t> rows;
  std::vector<std::int64_t> mapping(graph.vehicles.size(), -1);
  for (std::size_t r = 0; r < graph.vehicles.size(); ++r) {
    const Timestep tag = graph.vehicles.timesteps.empty() ? graph.timestep
                                                          : graph.vehicles.timesteps[r];
    if (tag == t) {
      mapping[r] = static_cast<std::int64_t>(rows.size());
      rows.push_back(r);
    }
  }
  TrafficGraph slice;
  slice.kind = GraphKind::single;
  slice.scenario_id = graph.scenario_id;
  slice.timestep = t;
  slice.window_begin = t;
  slice.window_end = t;
  slice.dt = graph.dt;
  slice.vehicles = select_nodes(graph.vehicles, rows);
  slice.lanelets = graph.lanelets;
  if (t == graph.window_end) {
    slice.globals = graph.globals;
  }
  slice.edges[Relation::l2l] = graph.edge_store(Relation::l2l);
  for (Relation relation : {Relation::v2v, Relation::v2l, Relation::l2v}) {
    slice.edges[relation] = remap_vehicle_edges(graph.edge_store(relation), mapping);
  }
  return slice;
}

TrafficGraph remove_vehicle_nodes(const TrafficGraph & graph, const std::vector<bool> & keep)
{
  if (keep.size() != graph.vehicles.size()) {
    throw ArgumentError(
      "remove_vehicle_nodes: mask has " + std::to_string(keep.size()) + " entries for " +
      std::to_string(graph.vehicles.size()) + " vehicle nodes");
  }
  std::vector<std::size_t> rows;
  std::vector<std::int64_t> mapping(keep.size(), -1);
  for (std::size_t r = 0; r < keep.size(); ++r) {
    if (keep[r]) {
      mapping[r] = static_cast<std::int64_t>(rows.size());
      rows.push_back(r);
    }
  }
  TrafficGraph out = graph;
  out.vehicles = select_nodes(graph.vehicles, rows);
  for (auto & [relation, store] : out.edges) {
    if (source_type(relation) == NodeType::vehicle || target_type(relation) == NodeType::vehicle) {
      store = remap_vehicle_edges(graph.edge_store(relation), mapping);
    }
  }
  return out;
}

std::vector<std::string> validate_graph(const TrafficGraph & graph)
{
  std::vector<std::string> problems;
  auto report = [&problems](std::string message) { problems.push_back(std::move(message)); };

  auto check_nodes = [&](const NodeStore & store, NodeType expected) {
    const std::string name(to_string(expected));
    if (store.type != expected) {
      report("node store '" + name + "' has the wrong node type");
    }
    const auto n = static_cast<Eigen::Index>(store.size());
    if (store.features.rows() != n) {
      report("node store '" + name + "': feature rows differ from id count");
    }
    if (store.features.cols() != static_cast<Eigen::Index>(total_width(store.channels))) {
      report("node store '" + name + "': feature width differs from channel schema");
    }
    for (const auto & [channel, values] : store.int_channels) {
      if (values.size() != store.size()) {
        report("node store '" + name + "': metadata '" + channel + "' has the wrong length");
      }
    }
    if (expected == NodeType::lanelet) {
      if (!store.timesteps.empty()) {
        report("lanelet store carries timestep tags");
      }
      for (std::size_t i = 1; i < store.size(); ++i) {
        if (store.ids[i] <= store.ids[i - 1]) {
          report("lanelet ids not strictly increasing at row " + std::to_string(i));
        }
      }
      return;
    }
    if (store.timesteps.size() != store.size()) {
      report("vehicle store: timestep tags differ from id count");
      return;
    }
    for (std::size_t i = 0; i < store.size(); ++i) {
      const Timestep t = store.timesteps[i];
      if (t < graph.window_begin || t > graph.window_end) {
        report("vehicle row " + std::to_string(i) + ": timestep outside window");
      }
      if (graph.kind == GraphKind::single && t != graph.timestep) {
        report("vehicle row " + std::to_string(i) + ": timestep differs from graph timestep");
      }
      if (
        i > 0 && std::tie(store.ids[i - 1], store.timesteps[i - 1]) >=
                   std::tie(store.ids[i], store.timesteps[i])) {
        report("vehicle nodes not strictly ordered by (id, timestep) at row " + std::to_string(i));
      }
    }
  };
  check_nodes(graph.vehicles, NodeType::vehicle);
  check_nodes(graph.lanelets, NodeType::lanelet);

  if (graph.window_begin > graph.window_end || graph.timestep != graph.window_end) {
    report("inconsistent window");
  }
  if (graph.kind == GraphKind::single && graph.window_begin != graph.window_end) {
    report("single graph with a multi-step window");
  }
  for (Relation relation : kAllRelations) {
    const bool expected = relation != Relation::vtv || graph.kind == GraphKind::temporal;
    if (graph.has_relation(relation) != expected) {
      report(
        std::string(expected ? "missing" : "unexpected") + " edge store '" +
        std::string(to_string(relation)) + "'");
    }
  }

  for (const auto & [relation, store] : graph.edges) {
    const std::string name(to_string(relation));
    if (store.relation != relation) {
      report("edge store '" + name + "' has the wrong relation tag");
    }
    if (store.targets.size() != store.sources.size()) {
      report("edge store '" + name + "': source and target counts differ");
      continue;
    }
    if (store.features.rows() != static_cast<Eigen::Index>(store.size())) {
      report("edge store '" + name + "': feature rows differ from edge count");
    }
    if (store.features.cols() != static_cast<Eigen::Index>(total_width(store.channels))) {
      report("edge store '" + name + "': feature width differs from channel schema");
    }
    const NodeStore & from = graph.nodes(source_type(relation));
    const NodeStore & to = graph.nodes(target_type(relation));
    for (std::size_t e = 0; e < store.size(); ++e) {
      const std::int64_t s = store.sources[e];
      const std::int64_t t = store.targets[e];
      const std::string edge = "edge store '" + name + "' edge " + std::to_string(e);
      if (s < 0 || s >= static_cast<std::int64_t>(from.size())) {
        report(edge + ": source index out of range");
        continue;
      }
      if (t < 0 || t >= static_cast<std::int64_t>(to.size())) {
        report(edge + ": target index out of range");
        continue;
      }
      if (e > 0 && std::tie(store.sources[e - 1], store.targets[e - 1]) > std::tie(s, t)) {
        report(edge + ": edges not sorted by (source, target)");
      }
      const auto si = static_cast<std::size_t>(s);
      const auto ti = static_cast<std::size_t>(t);
      if ((relation == Relation::l2l || relation == Relation::v2v) && s == t) {
        report(edge + ": self-loop");
      }
      if (relation == Relation::v2v && from.timesteps.size() == from.size()) {
        if (from.timesteps[si] != to.timesteps[ti]) {
          report(edge + ": endpoints at different timesteps");
        }
      }
      if (relation == Relation::vtv && from.timesteps.size() == from.size()) {
        if (from.ids[si] != to.ids[ti]) {
          report(edge + ": endpoints belong to different vehicles");
        }
        if (to.timesteps[ti] <= from.timesteps[si]) {
          report(edge + ": not forward in time");
        }
      }
    }
  }
  return problems;
}

}  // namespace trafficgraph
