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

#include "trafficgraph/errors.hpp"
#include "trafficgraph/extractor.hpp"
#include "trafficgraph/features.hpp"

#include "feature_rows.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

namespace trafficgraph
{
namespace
{

using testing::state_at;
using testing::straight_lanelet;

TEST(Features, TableWidths)
{
  EXPECT_EQ(total_width(vehicle_channels()), 10U);
  EXPECT_EQ(total_width(l2l_channels()), 7U);
  EXPECT_EQ(total_width(v2v_channels()), 8U);
  EXPECT_EQ(total_width(vtv_channels()), 9U);
  EXPECT_EQ(total_width(v2l_channels()), 6U);
  EXPECT_EQ(total_width(lanelet_channels(20)), 84U);
  EXPECT_EQ(total_width(lanelet_channels(3)), lanelet_feature_width(3));
  const ChannelSchema s = base_schema(5);
  EXPECT_EQ(s.channels(Relation::l2v), s.channels(Relation::v2l));
  EXPECT_EQ(total_width(s.channels(Relation::vtv)), 9U);
}

TEST(Features, VehicleRowLayout)
{
  VehicleState st = state_at(0, {1, 2}, 0.5, {3, 4});
  st.yaw_rate = 0.25;
  st.acceleration = Vector2(-1, 0.5);
  const Eigen::VectorXd row = vehicle_features(st, {4.5, 1.8});
  Eigen::VectorXd expected(10);
  expected << 1, 2, 0.5, 0.25, 3, 4, -1, 0.5, 1.8, 4.5;
  EXPECT_EQ(row, expected);
  st.acceleration.reset();
  st.yaw_rate.reset();
  const Eigen::VectorXd missing = vehicle_features(st, {4.5, 1.8});
  EXPECT_EQ(missing[3], 0.0);
  EXPECT_EQ(missing[6], 0.0);
}

TEST(Features, LaneletRowInLocalFrame)
{
  const Lanelet l = straight_lanelet(1, {10, 5}, {10, 15}, 4.0, 3);
  const LaneletFeatures f = lanelet_features(l, 4);
  ASSERT_EQ(f.row.size(), 20);
  EXPECT_EQ(f.vertex_count, 3);
  EXPECT_DOUBLE_EQ(f.row[0], 10.0);
  EXPECT_DOUBLE_EQ(f.row[1], 5.0);
  EXPECT_DOUBLE_EQ(f.row[2], 10.0);
  EXPECT_DOUBLE_EQ(f.row[3], M_PI / 2);
  // Left bound x = 8 lies at local (along, left) = (k * 5, 2).
  const double left[] = {0, 2, 5, 2, 10, 2};
  const double right[] = {0, -2, 5, -2, 10, -2};
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(f.row[4 + i], left[i], 1e-12) << i;
    EXPECT_NEAR(f.row[12 + i], right[i], 1e-12) << i;
  }
  EXPECT_TRUE(std::isnan(f.row[10]) && std::isnan(f.row[11]));
  EXPECT_TRUE(std::isnan(f.row[18]) && std::isnan(f.row[19]));
}

TEST(Features, LaneletRowResamplesLongBounds)
{
  const Lanelet l = straight_lanelet(1, {0, 0}, {18, 0}, 4.0, 10);
  const LaneletFeatures f = lanelet_features(l, 4);
  EXPECT_EQ(f.vertex_count, 4);
  EXPECT_FALSE(f.row.hasNaN());
  EXPECT_NEAR(f.row[4 + 6], 18.0, 1e-12);
  EXPECT_NEAR(f.row[4 + 2], 6.0, 1e-12);
  EXPECT_THROW(lanelet_features(l, 1), ArgumentError);
}

TEST(Features, V2LMidLaneAligned)
{
  const Lanelet l = straight_lanelet(1, {0, 0}, {20, 0}, 4.0);
  const Eigen::VectorXd row = v2l_features(state_at(0, {10, 0}, 0.0), l);
  Eigen::VectorXd expected(6);
  expected << 2, 2, 0, 0, 10, 0.5;
  EXPECT_EQ(row, expected);
}

TEST(Features, V2LOffsetSign)
{
  // Width 3: the vehicle sits 2 m from the left bound and 1 m from the right bound.
  const Lanelet l = straight_lanelet(1, {0, 0}, {20, 0}, 3.0);
  const Eigen::VectorXd row = v2l_features(state_at(0, {10, -0.5}, 0.0), l);
  EXPECT_EQ(row[0], 2.0);
  EXPECT_EQ(row[1], 1.0);
  EXPECT_EQ(row[2], 0.5);
  // Left of center flips the sign.
  EXPECT_EQ(v2l_features(state_at(0, {10, 0.5}, 0.0), l)[2], -0.5);
}

TEST(Features, V2LHeadingAndClamping)
{
  const Lanelet l = straight_lanelet(1, {0, 0}, {20, 0}, 4.0);
  EXPECT_NEAR(v2l_features(state_at(0, {5, 0}, 0.1), l)[3], -0.1, 1e-15);
  const Eigen::VectorXd past = v2l_features(state_at(0, {25, 0}, 0.0), l);
  EXPECT_EQ(past[4], 20.0);
  EXPECT_EQ(past[5], 1.0);
}

TEST(Features, V2VInSourceFrame)
{
  VehicleState a = state_at(0, {1, 1}, M_PI / 2, {0, 10});
  VehicleState b = state_at(0, {1, 6}, M_PI / 2 + 0.2, {0, 12});
  b.acceleration = Vector2(1, 0);
  const Eigen::VectorXd row = v2v_features(a, b);
  EXPECT_NEAR(row[0], 5.0, 1e-12);
  EXPECT_NEAR(row[1], 5.0, 1e-12);
  EXPECT_NEAR(row[2], 0.0, 1e-12);
  EXPECT_NEAR(row[3], 0.2, 1e-12);
  EXPECT_NEAR(row[4], 2.0, 1e-12);
  EXPECT_NEAR(row[5], 0.0, 1e-12);
  EXPECT_NEAR(row[6], 0.0, 1e-12);
  EXPECT_NEAR(row[7], -1.0, 1e-12);
  const Eigen::VectorXd vtv = vtv_features(a, b, 3, 0.2);
  EXPECT_EQ(vtv.head(8), row);
  EXPECT_DOUBLE_EQ(vtv[8], 3 * 0.2);
}

TEST(Features, L2LFromSourceFrame)
{
  const Lanelet a = straight_lanelet(1, {0, 0}, {10, 0});
  const Lanelet b = straight_lanelet(2, {10, 0}, {10, 10});
  const L2LEdgeRecord e{1, 2, L2LAdjacencyType::successor, 10.0, 0.0};
  const Eigen::VectorXd row = l2l_features(e, a, b);
  Eigen::VectorXd expected(7);
  expected << 10, 10, 0, M_PI / 2, 10, 0, 1;
  EXPECT_TRUE(row.isApprox(expected, 1e-12)) << row.transpose();
}

class ConstantExtractor : public FeatureExtractor
{
public:
  ConstantExtractor(std::string store, std::string channel, std::size_t width, Eigen::Index rows_delta = 0)
  : store_(std::move(store)), channel_(std::move(channel)), width_(width), rows_delta_(rows_delta)
  {
  }
  std::string name() const override { return "constant_" + channel_; }
  std::string store() const override { return store_; }
  ChannelList channels() const override { return {{channel_, width_, ""}}; }
  FeatureMatrix compute(const FeatureContext & context) override
  {
    const auto rows = static_cast<Eigen::Index>(store_size(context.graph, store_)) + rows_delta_;
    return FeatureMatrix::Constant(rows, static_cast<Eigen::Index>(width_), 7.0f);
  }

private:
  std::string store_;
  std::string channel_;
  std::size_t width_;
  Eigen::Index rows_delta_;
};

ExtractionConfig config_with(std::vector<FeatureExtractorFactory> factories)
{
  ExtractionConfig c;
  c.extractors = std::move(factories);
  return c;
}

TEST(CustomExtractors, AppendColumnsAfterBaseChannels)
{
  const Simulation sim(testing::road_with_vehicles(3));
  const ExtractionConfig c = config_with(
    {[] { return std::make_unique<ConstantExtractor>("v2v", "seven", 2); }, *builtin_extractor("vehicle_speed")});
  TrafficExtractor extractor(c, sim);
  const TrafficGraph g = extractor.extract(1);
  const EdgeStore & v2v = g.edge_store(Relation::v2v);
  ASSERT_EQ(v2v.features.cols(), 10);
  EXPECT_EQ(v2v.channels.back().name, "seven");
  EXPECT_EQ(v2v.features(0, 9), 7.0f);
  ASSERT_EQ(g.vehicles.features.cols(), 11);
  EXPECT_FLOAT_EQ(g.vehicles.features(0, 10), 10.0f);
}

TEST(CustomExtractors, ShapeMismatchNamesExtractor)
{
  const Simulation sim(testing::road_with_vehicles(3));
  TrafficExtractor extractor(
    config_with({[] { return std::make_unique<ConstantExtractor>("v", "bad", 1, 1); }}), sim);
  try {
    extractor.extract(0);
    FAIL() << "expected ExtractionError";
  } catch (const ExtractionError & e) {
    EXPECT_NE(std::string(e.what()).find("constant_bad"), std::string::npos);
  }
}

TEST(CustomExtractors, SchemaCollisionsAndUnknownStores)
{
  const Simulation sim(testing::road_with_vehicles(2));
  EXPECT_THROW(
    TrafficExtractor(config_with({[] { return std::make_unique<ConstantExtractor>("v", "position", 1); }}), sim),
    SchemaError);
  EXPECT_THROW(
    TrafficExtractor(config_with({[] { return std::make_unique<ConstantExtractor>("q", "x", 1); }}), sim),
    SchemaError);
}

TEST(CustomExtractors, StatefulBuiltinCountsPerScenario)
{
  const Simulation sim(testing::road_with_vehicles(1, 4));
  TrafficExtractor extractor(config_with({*builtin_extractor("steps_since_start")}), sim);
  EXPECT_EQ(extractor.extract(0).vehicles.features(0, 10), 0.0f);
  EXPECT_EQ(extractor.extract(1).vehicles.features(0, 10), 1.0f);
  TrafficExtractor fresh(extractor.config(), sim);
  EXPECT_EQ(fresh.extract(2).vehicles.features(0, 10), 0.0f);
  EXPECT_FALSE(builtin_extractor("nope").has_value());
  EXPECT_EQ(builtin_extractor_names().size(), 2U);
}

TEST(ValidateFeatures, FlagsBadValues)
{
  const Simulation sim(load_scenario_file(testing::intersection_file()));
  ExtractionConfig c;
  TemporalTrafficExtractor extractor(c, sim);
  extractor.extract(0);
  TrafficGraph g = extractor.extract(1);
  EXPECT_TRUE(validate_features(g).empty());
  ASSERT_GT(g.edge_store(Relation::vtv).size(), 0U);
  g.edge_store(Relation::vtv).features(0, 8) = 0.0f;
  g.edge_store(Relation::v2l).features(0, 5) = 1.5f;
  g.edge_store(Relation::l2l).features(0, 3) = 4.0f;
  EXPECT_EQ(validate_features(g).size(), 3U);
}

TEST(RigidMotion, RelativeFeaturesInvariant)
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  std::uniform_real_distribution<double> shift(-500.0, 500.0);
  for (const Scenario & s : testing::fixture_scenarios()) {
    for (int trial = 0; trial < 3; ++trial) {
      const Scenario moved = testing::rigid_transform(s, angle(rng), {shift(rng), shift(rng)});
      for (Timestep t : {0, 5, 9}) {
        const auto a = testing::relative_feature_rows(s, t);
        const auto b = testing::relative_feature_rows(moved, t);
        EXPECT_GT(a.size(), 0U);
        EXPECT_LE(testing::max_row_difference(a, b), 1e-6) << s.id << " t=" << t;
      }
    }
  }
}

// Stored rows are float32, so the graph-level comparison is relative to float resolution.
TEST(RigidMotion, StoredGraphFeaturesInvariantToFloatPrecision)
{
  const Scenario s = load_scenario_file(testing::highway_file());
  const Scenario moved = testing::rigid_transform(s, 2.1, {-750.0, 420.0});
  const Simulation a(s);
  const Simulation b(moved);
  for (Timestep t : {0, 8, 15}) {
    const TrafficGraph ga = extract(ExtractionConfig{}, a, t);
    const TrafficGraph gb = extract(ExtractionConfig{}, b, t);
    for (Relation r : {Relation::v2v, Relation::v2l, Relation::l2v, Relation::l2l}) {
      const EdgeStore & x = ga.edge_store(r);
      const EdgeStore & y = gb.edge_store(r);
      ASSERT_EQ(x.sources, y.sources) << to_string(r);
      ASSERT_EQ(x.targets, y.targets) << to_string(r);
      for (Eigen::Index i = 0; i < x.features.rows(); ++i) {
        for (Eigen::Index c = 0; c < x.features.cols(); ++c) {
          const double u = x.features(i, c);
          const double v = y.features(i, c);
          const double diff = c == 3 ? std::abs(wrap_angle(u - v)) : std::abs(u - v);
          EXPECT_LE(diff, 1e-5 * (1.0 + std::abs(u))) << to_string(r) << " row " << i << " col " << c;
        }
      }
    }
  }
}

}  // namespace
}  // namespace trafficgraph
