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

#include "trafficgraph/features.hpp"

#include "trafficgraph/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <utility>

namespace trafficgraph
{
namespace
{

void put(Eigen::VectorXd & row, Eigen::Index at, const Vector2 & v)
{
  row[at] = v.x();
  row[at + 1] = v.y();
}

void write_vertices(
  Eigen::VectorXd & row, Eigen::Index at, const Polyline & bound, const LocalFrame & frame,
  std::size_t n_pad)
{
  const Polyline & points = bound.size() > n_pad ? resample_uniform(bound, n_pad) : bound;
  for (std::size_t i = 0; i < points.size(); ++i) {
    put(row, at + 2 * static_cast<Eigen::Index>(i), frame.to_local(points[i]));
  }
}

class VehicleSpeed : public FeatureExtractor
{
public:
  std::string name() const override { return "vehicle_speed"; }
  std::string store() const override { return "v"; }
  ChannelList channels() const override { return {{"speed", 1, "m/s"}}; }

  FeatureMatrix compute(const FeatureContext & context) override
  {
    const NodeStore & v = context.graph.vehicles;
    FeatureMatrix out(static_cast<Eigen::Index>(v.size()), 1);
    const auto offset = channel_offset(v.channels, "velocity");
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      out(r, 0) = offset ? v.features.row(r).segment(static_cast<Eigen::Index>(*offset), 2).norm()
                         : 0.0F;
    }
    return out;
  }
};

class StepsSinceStart : public FeatureExtractor
{
public:
  std::string name() const override { return "steps_since_start"; }
  std::string store() const override { return "v"; }
  ChannelList channels() const override { return {{"steps_since_start", 1, "steps"}}; }

  FeatureMatrix compute(const FeatureContext & context) override
  {
    FeatureMatrix out(static_cast<Eigen::Index>(context.graph.vehicles.size()), 1);
    out.setConstant(static_cast<float>(calls_));
    ++calls_;
    return out;
  }

private:
  std::int64_t calls_{0};
};

}  // namespace

ChannelList vehicle_channels()
{
  return {
    {"position", 2, "m"},         {"orientation", 1, "rad"}, {"yaw_rate", 1, "rad/s"},
    {"velocity", 2, "m/s"},       {"acceleration", 2, "m/s^2"}, {"width", 1, "m"},
    {"length", 1, "m"},
  };
}

ChannelList lanelet_channels(std::size_t n_pad)
{
  return {
    {"position", 2, "m"},
    {"length", 1, "m"},
    {"orientation", 1, "rad"},
    {"left_vertices", 2 * n_pad, "m"},
    {"right_vertices", 2 * n_pad, "m"},
  };
}

ChannelList l2l_channels()
{
  return {
    {"distance", 1, "m"},         {"relative_position", 2, "m"}, {"relative_orientation", 1, "rad"},
    {"source_arclength", 1, "m"}, {"target_arclength", 1, "m"},  {"adjacency_type", 1, "code"},
  };
}

ChannelList v2v_channels()
{
  return {
    {"distance", 1, "m"},
    {"relative_position", 2, "m"},
    {"relative_orientation", 1, "rad"},
    {"relative_velocity", 2, "m/s"},
    {"relative_acceleration", 2, "m/s^2"},
  };
}

ChannelList vtv_channels()
{
  ChannelList channels = v2v_channels();
  channels.push_back({"delta_time", 1, "s"});
  return channels;
}

ChannelList v2l_channels()
{
  return {
    {"left_distance", 1, "m"}, {"right_distance", 1, "m"}, {"lateral_offset", 1, "m"},
    {"heading_error", 1, "rad"}, {"arclength", 1, "m"},    {"arclength_normalized", 1, "1"},
  };
}

ChannelSchema base_schema(std::size_t n_pad)
{
  ChannelSchema schema;
  schema.vehicle = vehicle_channels();
  schema.lanelet = lanelet_channels(n_pad);
  schema.relations[Relation::l2l] = l2l_channels();
  schema.relations[Relation::v2v] = v2v_channels();
  schema.relations[Relation::v2l] = v2l_channels();
  schema.relations[Relation::l2v] = v2l_channels();
  schema.relations[Relation::vtv] = vtv_channels();
  return schema;
}

Eigen::VectorXd vehicle_features(const VehicleState & state, const VehicleShape & shape)
{
  Eigen::VectorXd row(static_cast<Eigen::Index>(kVehicleFeatureWidth));
  put(row, 0, state.position);
  row[2] = state.orientation;
  row[3] = state.yaw_rate.value_or(0.0);
  put(row, 4, state.velocity);
  put(row, 6, state.acceleration.value_or(Vector2::Zero()));
  row[8] = shape.width;
  row[9] = shape.length;
  return row;
}

LocalFrame lanelet_frame(const Lanelet & lanelet)
{
  const Vector2 direction = lanelet.center[1] - lanelet.center[0];
  return LocalFrame{lanelet.center.front(), std::atan2(direction.y(), direction.x())};
}

LaneletFeatures lanelet_features(const Lanelet & lanelet, std::size_t n_pad)
{
  if (n_pad < 2) {
    throw ArgumentError("lanelet vertex padding must be >= 2");
  }
  const LocalFrame frame = lanelet_frame(lanelet);
  LaneletFeatures out;
  out.row = Eigen::VectorXd::Constant(
    static_cast<Eigen::Index>(lanelet_feature_width(n_pad)), std::numeric_limits<double>::quiet_NaN());
  put(out.row, 0, frame.origin);
  out.row[2] = lanelet.length();
  out.row[3] = frame.orientation;
  write_vertices(out.row, 4, lanelet.left_bound, frame, n_pad);
  write_vertices(out.row, 4 + 2 * static_cast<Eigen::Index>(n_pad), lanelet.right_bound, frame, n_pad);
  out.vertex_count = static_cast<std::int64_t>(std::min(lanelet.left_bound.size(), n_pad));
  return out;
}

Eigen::VectorXd l2l_features(const L2LEdgeRecord & edge, const Lanelet & source, const Lanelet & target)
{
  const LocalFrame from = lanelet_frame(source);
  const LocalFrame to = lanelet_frame(target);
  Eigen::VectorXd row(static_cast<Eigen::Index>(kL2LFeatureWidth));
  row[0] = (to.origin - from.origin).norm();
  put(row, 1, from.to_local(to.origin));
  row[3] = wrap_angle(to.orientation - from.orientation);
  row[4] = edge.s_source;
  row[5] = edge.s_target;
  row[6] = static_cast<double>(static_cast<int>(edge.type));
  return row;
}

Eigen::VectorXd v2v_features(const VehicleState & source, const VehicleState & target)
{
  const LocalFrame frame{source.position, source.orientation};
  const Vector2 zero = Vector2::Zero();
  Eigen::VectorXd row(static_cast<Eigen::Index>(kV2VFeatureWidth));
  row[0] = (target.position - source.position).norm();
  put(row, 1, frame.to_local(target.position));
  row[3] = wrap_angle(target.orientation - source.orientation);
  put(row, 4, frame.rotate_to_local(target.velocity - source.velocity));
  put(row, 6, frame.rotate_to_local(target.acceleration.value_or(zero) - source.acceleration.value_or(zero)));
  return row;
}

Eigen::VectorXd vtv_features(const VehicleState & older, const VehicleState & newer, Timestep steps, double dt)
{
  Eigen::VectorXd row(static_cast<Eigen::Index>(kVTVFeatureWidth));
  row.head(static_cast<Eigen::Index>(kV2VFeatureWidth)) = v2v_features(older, newer);
  row[8] = static_cast<double>(steps) * dt;
  return row;
}

Eigen::VectorXd v2l_features(const VehicleState & vehicle, const Lanelet & lanelet)
{
  const ArclengthProjection left = project_point(lanelet.left_bound, vehicle.position);
  const ArclengthProjection right = project_point(lanelet.right_bound, vehicle.position);
  const ArclengthProjection center = project_point(lanelet.center, vehicle.position);
  const double d_left = std::abs(left.signed_lateral);
  const double d_right = std::abs(right.signed_lateral);
  const double length = lanelet.length();
  Eigen::VectorXd row(static_cast<Eigen::Index>(kV2LFeatureWidth));
  row[0] = d_left;
  row[1] = d_right;
  row[2] = (d_left - d_right) / 2.0;
  row[3] = wrap_angle(center.tangent_orientation - vehicle.orientation);
  row[4] = std::clamp(center.arclength, 0.0, length);
  row[5] = std::clamp(row[4] / length, 0.0, 1.0);
  return row;
}

bool is_store_name(std::string_view store)
{
  return node_type_from_string(store).has_value() || relation_from_string(store).has_value();
}

ChannelList & store_channels(ChannelSchema & schema, std::string_view store)
{
  if (const auto type = node_type_from_string(store)) {
    return *type == NodeType::vehicle ? schema.vehicle : schema.lanelet;
  }
  if (const auto relation = relation_from_string(store)) {
    return schema.relations[*relation];
  }
  throw SchemaError("unknown store '" + std::string(store) + "'");
}

const ChannelList & store_channels(const ChannelSchema & schema, std::string_view store)
{
  if (const auto type = node_type_from_string(store)) {
    return *type == NodeType::vehicle ? schema.vehicle : schema.lanelet;
  }
  if (const auto relation = relation_from_string(store)) {
    return schema.channels(*relation);
  }
  throw SchemaError("unknown store '" + std::string(store) + "'");
}

FeatureMatrix & store_features(TrafficGraph & graph, std::string_view store)
{
  if (const auto type = node_type_from_string(store)) {
    return graph.nodes(*type).features;
  }
  if (const auto relation = relation_from_string(store)) {
    return graph.edge_store(*relation).features;
  }
  throw SchemaError("unknown store '" + std::string(store) + "'");
}

std::size_t store_size(const TrafficGraph & graph, std::string_view store)
{
  if (const auto type = node_type_from_string(store)) {
    return graph.nodes(*type).size();
  }
  if (const auto relation = relation_from_string(store)) {
    return graph.edge_store(*relation).size();
  }
  throw SchemaError("unknown store '" + std::string(store) + "'");
}

FeatureExtractorSet instantiate(std::span<const FeatureExtractorFactory> factories)
{
  FeatureExtractorSet out;
  out.reserve(factories.size());
  for (const auto & factory : factories) {
    out.push_back(factory());
  }
  return out;
}

ChannelSchema register_custom_extractors(ChannelSchema schema, const FeatureExtractorSet & extractors)
{
  for (const auto & extractor : extractors) {
    const std::string store = extractor->store();
    if (!is_store_name(store)) {
      throw SchemaError("extractor '" + extractor->name() + "' targets unknown store '" + store + "'");
    }
    ChannelList & channels = store_channels(schema, store);
    for (const auto & channel : extractor->channels()) {
      if (channel_offset(channels, channel.name)) {
        throw SchemaError(
          "extractor '" + extractor->name() + "': channel '" + channel.name +
          "' already exists in store '" + store + "'");
      }
      if (channel.width == 0) {
        throw SchemaError(
          "extractor '" + extractor->name() + "': channel '" + channel.name + "' has zero width");
      }
      channels.push_back(channel);
    }
  }
  return schema;
}

void run_custom_extractors(TrafficGraph & graph, const FeatureContext & context, FeatureExtractorSet & extractors)
{
  std::vector<FeatureMatrix> results;
  results.reserve(extractors.size());
  for (auto & extractor : extractors) {
    const std::string store = extractor->store();
    const ChannelList declared = extractor->channels();
    FeatureMatrix block = extractor->compute(context);
    const auto rows = static_cast<Eigen::Index>(store_size(graph, store));
    const auto width = static_cast<Eigen::Index>(total_width(declared));
    if (block.rows() != rows || block.cols() != width) {
      throw ExtractionError(
        "extractor '" + extractor->name() + "' produced a " + std::to_string(block.rows()) + "x" +
        std::to_string(block.cols()) + " block for store '" + store + "', expected " +
        std::to_string(rows) + "x" + std::to_string(width));
    }
    results.push_back(std::move(block));
  }
  const ChannelSchema schema = graph.schema();
  for (std::size_t i = 0; i < extractors.size(); ++i) {
    const ChannelList declared = extractors[i]->channels();
    if (declared.empty()) {
      continue;
    }
    const std::string store = extractors[i]->store();
    const auto offset = channel_offset(store_channels(schema, store), declared.front().name);
    if (!offset) {
      throw ExtractionError(
        "extractor '" + extractors[i]->name() + "' is not registered in the graph schema");
    }
    store_features(graph, store).middleCols(static_cast<Eigen::Index>(*offset), results[i].cols()) =
      results[i];
  }
}

std::optional<FeatureExtractorFactory> builtin_extractor(std::string_view name)
{
  if (name == "vehicle_speed") {
    return FeatureExtractorFactory([] { return std::make_unique<VehicleSpeed>(); });
  }
  if (name == "steps_since_start") {
    return FeatureExtractorFactory([] { return std::make_unique<StepsSinceStart>(); });
  }
  return std::nullopt;
}

std::vector<std::string> builtin_extractor_names() { return {"steps_since_start", "vehicle_speed"}; }

std::vector<std::string> validate_features(const TrafficGraph & graph)
{
  std::vector<std::string> problems;
  const auto pi = static_cast<float>(std::numbers::pi);

  auto check_angles = [&](const ChannelList & channels, const FeatureMatrix & x, const char * channel,
                          std::string_view store) {
    const auto offset = channel_offset(channels, channel);
    if (!offset) {
      return;
    }
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      const float value = x(r, static_cast<Eigen::Index>(*offset));
      if (!(value >= -pi && value <= pi)) {
        problems.push_back(
          "store '" + std::string(store) + "' row " + std::to_string(r) + ": " + channel +
          " outside [-pi, pi]");
      }
    }
  };
  check_angles(graph.vehicles.channels, graph.vehicles.features, "orientation", "v");
  check_angles(graph.lanelets.channels, graph.lanelets.features, "orientation", "l");
  for (const auto & [relation, store] : graph.edges) {
    check_angles(store.channels, store.features, "relative_orientation", to_string(relation));
    check_angles(store.channels, store.features, "heading_error", to_string(relation));
  }

  // Arclengths are bounded by the length feature of the lanelet they refer to.
  const auto length_offset = channel_offset(graph.lanelets.channels, "length");
  auto lanelet_length = [&](std::int64_t index) {
    return graph.lanelets.features(index, static_cast<Eigen::Index>(*length_offset));
  };
  auto within = [](float s, float length) {
    return s >= 0.0F && s <= length * (1.0F + 1e-6F) + 1e-5F;
  };
  for (const auto & [relation, store] : graph.edges) {
    const std::string name(to_string(relation));
    const FeatureMatrix & x = store.features;
    auto check_arclength = [&](const char * channel, bool use_source) {
      const auto offset = channel_offset(store.channels, channel);
      if (!offset || !length_offset) {
        return;
      }
      for (std::size_t e = 0; e < store.size(); ++e) {
        const std::int64_t lanelet = use_source ? store.sources[e] : store.targets[e];
        if (lanelet < 0 || lanelet >= static_cast<std::int64_t>(graph.lanelets.size())) {
          continue;
        }
        if (!within(x(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(*offset)), lanelet_length(lanelet))) {
          problems.push_back(
            "store '" + name + "' edge " + std::to_string(e) + ": " + channel +
            " outside [0, lanelet length]");
        }
      }
    };
    if (relation == Relation::l2l) {
      check_arclength("source_arclength", true);
      check_arclength("target_arclength", false);
    } else if (relation == Relation::v2l) {
      check_arclength("arclength", false);
    } else if (relation == Relation::l2v) {
      check_arclength("arclength", true);
    }
    if (const auto offset = channel_offset(store.channels, "arclength_normalized")) {
      for (Eigen::Index r = 0; r < x.rows(); ++r) {
        const float value = x(r, static_cast<Eigen::Index>(*offset));
        if (!(value >= 0.0F && value <= 1.0F)) {
          problems.push_back("store '" + name + "' edge " + std::to_string(r) + ": normalized arclength outside [0, 1]");
        }
      }
    }
    if (relation == Relation::vtv) {
      if (const auto offset = channel_offset(store.channels, "delta_time")) {
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
          if (!(x(r, static_cast<Eigen::Index>(*offset)) > 0.0F)) {
            problems.push_back("store 'vtv' edge " + std::to_string(r) + ": delta_time is not positive");
          }
        }
      }
    }
  }
  return problems;
}

}  // namespace trafficgraph
