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

#ifndef TRAFFICGRAPH__FEATURES_HPP_
#define TRAFFICGRAPH__FEATURES_HPP_

#include "trafficgraph/graph_builders.hpp"
#include "trafficgraph/scenario.hpp"
#include "trafficgraph/traffic_graph.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trafficgraph
{

inline constexpr std::size_t kVehicleFeatureWidth = 10;
inline constexpr std::size_t kL2LFeatureWidth = 7;
inline constexpr std::size_t kV2VFeatureWidth = 8;
inline constexpr std::size_t kVTVFeatureWidth = 9;
inline constexpr std::size_t kV2LFeatureWidth = 6;
inline constexpr std::size_t kDefaultVertexPadding = 20;

/// Name of the lanelet metadata channel holding the number of valid (unpadded) vertices.
inline constexpr const char * kVertexCountChannel = "vertex_count";

constexpr std::size_t lanelet_feature_width(std::size_t n_pad) { return 4 + 4 * n_pad; }

ChannelList vehicle_channels();
ChannelList lanelet_channels(std::size_t n_pad);
ChannelList l2l_channels();
ChannelList v2v_channels();
ChannelList vtv_channels();
ChannelList v2l_channels();

/// Base channels of every store; L2V mirrors V2L. VTV is included.
ChannelSchema base_schema(std::size_t n_pad = kDefaultVertexPadding);

/// Physical size of a vehicle; the state supplies everything else.
struct VehicleShape
{
  double length{0.0};
  double width{0.0};
};

/// [position(2), orientation, yaw rate, velocity(2), acceleration(2), width, length].
/// Missing derivatives count as zero.
Eigen::VectorXd vehicle_features(const VehicleState & state, const VehicleShape & shape);

/// Position and orientation of a lanelet frame: first centerline vertex and direction of the
/// first centerline segment.
LocalFrame lanelet_frame(const Lanelet & lanelet);

struct LaneletFeatures
{
  Eigen::VectorXd row;
  std::int64_t vertex_count{0};
};

/**
 * @brief [position(2), length, orientation, left vertices(2 n_pad), right vertices(2 n_pad)].
 *
 * Bound vertices are expressed in the lanelet frame and stored as interleaved (x, y) pairs.
 * Bounds with more than n_pad vertices are resampled to n_pad points at uniform arclength;
 * unused slots hold NaN.
 * @throws ArgumentError if n_pad < 2.
 */
LaneletFeatures lanelet_features(const Lanelet & lanelet, std::size_t n_pad);

/// [distance, relative position(2), relative orientation, s source, s target, type code],
/// measured from the source lanelet frame.
Eigen::VectorXd l2l_features(const L2LEdgeRecord & edge, const Lanelet & source, const Lanelet & target);

/// [distance, relative position(2), relative orientation, relative velocity(2),
/// relative acceleration(2)], differences rotated into the source vehicle frame.
Eigen::VectorXd v2v_features(const VehicleState & source, const VehicleState & target);

/// V2V row between an older and a newer state of one vehicle followed by steps * dt.
Eigen::VectorXd vtv_features(
  const VehicleState & older, const VehicleState & newer, Timestep steps, double dt);

/**
 * @brief [d_left, d_right, (d_left - d_right) / 2, heading error, s, s / length].
 *
 * d_left and d_right are distances to the projections on the bounds; s is the centerline
 * projection arclength and the heading error is the centerline tangent there minus the vehicle
 * orientation, wrapped.
 */
Eigen::VectorXd v2l_features(const VehicleState & vehicle, const Lanelet & lanelet);

/// Store names used in schemas and sample files: "v", "l", "l2l", "v2v", "v2l", "l2v", "vtv".
bool is_store_name(std::string_view store);
ChannelList & store_channels(ChannelSchema & schema, std::string_view store);
const ChannelList & store_channels(const ChannelSchema & schema, std::string_view store);
FeatureMatrix & store_features(TrafficGraph & graph, std::string_view store);
std::size_t store_size(const TrafficGraph & graph, std::string_view store);

/// What a custom extractor sees: the scenario, the timestep and the graph with its edges and
/// base features in place.
struct FeatureContext
{
  const Scenario & scenario;
  Timestep timestep;
  const TrafficGraph & graph;
};

/**
 * @brief User feature extractor appending channels to one store.
 *
 * One instance serves one scenario and may keep state across timesteps. compute() returns one
 * row per node or edge of the target store, with exactly the declared width.
 */
class FeatureExtractor
{
public:
  virtual ~FeatureExtractor() = default;
  virtual std::string name() const = 0;
  virtual std::string store() const = 0;
  virtual ChannelList channels() const = 0;
  virtual FeatureMatrix compute(const FeatureContext & context) = 0;
};

using FeatureExtractorFactory = std::function<std::unique_ptr<FeatureExtractor>()>;
using FeatureExtractorSet = std::vector<std::unique_ptr<FeatureExtractor>>;

FeatureExtractorSet instantiate(std::span<const FeatureExtractorFactory> factories);

/// Appends the extractors' channels after the base channels, in declaration order.
/// @throws SchemaError on an unknown store or a channel name already present in the store.
ChannelSchema register_custom_extractors(ChannelSchema schema, const FeatureExtractorSet & extractors);

/// Runs every extractor and writes its columns. @throws ExtractionError naming the extractor
/// when the produced shape differs from the declaration.
void run_custom_extractors(TrafficGraph & graph, const FeatureContext & context, FeatureExtractorSet & extractors);

/// Built-in optional extractors: "vehicle_speed" (v, |velocity|) and "steps_since_start"
/// (v, number of earlier invocations on the scenario).
std::optional<FeatureExtractorFactory> builtin_extractor(std::string_view name);
std::vector<std::string> builtin_extractor_names();

/// Feature-level invariants: angle channels in [-pi, pi], arclengths within the lanelet,
/// normalized arclength in [0, 1], temporal deltas > 0. One message per violation.
std::vector<std::string> validate_features(const TrafficGraph & graph);

}  // namespace trafficgraph

#endif  // TRAFFICGRAPH__FEATURES_HPP_
