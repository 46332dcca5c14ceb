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
#include "trafficgraph/pipeline.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

namespace trafficgraph
{
namespace
{

using testing::straight_lanelet;

TEST(TrafficFilter, BoundaryIsInclusive)
{
  const ScenarioTransform filter = traffic_filter(10);
  EXPECT_EQ(filter.kind(), TransformKind::filter);
  EXPECT_FALSE(filter(testing::road_with_vehicles(9)).has_value());
  const auto kept = filter(testing::road_with_vehicles(10));
  ASSERT_TRUE(kept.has_value());
  EXPECT_EQ(*kept, testing::road_with_vehicles(10));
}

// 1 -> 2 -> 3 along x with 4 to the left of 2; 2 and 4 are 50 m long.
Scenario segmentation_network()
{
  Scenario s;
  s.id = "seg";
  s.lanelets.emplace(1, straight_lanelet(1, {-10, 0}, {0, 0}));
  s.lanelets.emplace(2, straight_lanelet(2, {0, 0}, {50, 0}));
  s.lanelets.emplace(3, straight_lanelet(3, {50, 0}, {70, 0}));
  s.lanelets.emplace(4, straight_lanelet(4, {0, 4}, {50, 4}));
  s.lanelets.at(1).successors = {2};
  s.lanelets.at(2).predecessors = {1};
  s.lanelets.at(2).successors = {3};
  s.lanelets.at(3).predecessors = {2};
  s.lanelets.at(2).adjacent_left = LateralAdjacency{4, true};
  s.lanelets.at(4).adjacent_right = LateralAdjacency{2, true};
  return s;
}

TEST(SegmentLanelets, SplitsLongLaneletsIntoEqualPieces)
{
  const Scenario out = split_lanelets(segmentation_network(), 20.0);
  // 3 (20 m) is not longer than the size and stays whole.
  EXPECT_EQ(out.lanelets.size(), 2U + 3U + 3U);
  EXPECT_TRUE(out.lanelets.count(1) && out.lanelets.count(3));
  EXPECT_FALSE(out.lanelets.count(2) || out.lanelets.count(4));
  double total = 0.0;
  for (LaneletId id : {5, 6, 7}) {
    const Lanelet & piece = out.lanelets.at(id);
    EXPECT_LE(piece.length(), 20.0 + 1e-9);
    EXPECT_NEAR(piece.length(), 50.0 / 3.0, 1e-9);
    EXPECT_EQ(piece.left_bound.size(), piece.right_bound.size());
    EXPECT_EQ(piece.center.size(), piece.left_bound.size());
    total += piece.length();
  }
  EXPECT_NEAR(total, 50.0, 1e-9);
  EXPECT_NEAR(out.lanelets.at(5).center.points().front().x(), 0.0, 1e-12);
  EXPECT_NEAR(out.lanelets.at(7).center.points().back().x(), 50.0, 1e-12);
}

TEST(SegmentLanelets, KeepsConnectivity)
{
  const Scenario out = split_lanelets(segmentation_network(), 20.0);
  const auto & l = out.lanelets;
  EXPECT_EQ(l.at(1).successors, (std::set<LaneletId>{5}));
  EXPECT_EQ(l.at(5).predecessors, (std::set<LaneletId>{1}));
  EXPECT_EQ(l.at(5).successors, (std::set<LaneletId>{6}));
  EXPECT_EQ(l.at(6).successors, (std::set<LaneletId>{7}));
  EXPECT_EQ(l.at(7).successors, (std::set<LaneletId>{3}));
  EXPECT_EQ(l.at(3).predecessors, (std::set<LaneletId>{7}));
  EXPECT_EQ(l.at(8).successors, (std::set<LaneletId>{9}));
  EXPECT_EQ(l.at(5).adjacent_left, (LateralAdjacency{8, true}));
  EXPECT_EQ(l.at(7).adjacent_left, (LateralAdjacency{10, true}));
  EXPECT_EQ(l.at(9).adjacent_right, (LateralAdjacency{6, true}));
  EXPECT_NO_THROW(validate_scenario(out));
}

TEST(SegmentLanelets, FixturePiecesNeverExceedSize)
{
  for (const Scenario & s : testing::fixture_scenarios()) {
    double before = 0.0;
    for (const auto & [id, l] : s.lanelets) {
      before += l.length();
    }
    const Scenario out = split_lanelets(s, 20.0);
    double after = 0.0;
    for (const auto & [id, l] : out.lanelets) {
      EXPECT_LE(l.length(), 20.0 + 1e-6) << s.id << " " << id;
      after += l.length();
    }
    EXPECT_NEAR(after, before, 1e-6 * before) << s.id;
    EXPECT_NO_THROW(validate_scenario(out));
  }
  EXPECT_THROW(segment_lanelets(0.0), ArgumentError);
}

TEST(TransformChain, ComposesInOrderAndStopsAtRejection)
{
  std::vector<std::string> calls;
  const auto rename = [&calls](const std::string & suffix) {
    return ScenarioTransform::preprocessor("rename" + suffix, [&calls, suffix](const Scenario & s) {
      calls.push_back(suffix);
      Scenario out = s;
      out.id += suffix;
      return out;
    });
  };
  const TransformChain chain = rename("_a") >> rename("_b") >> traffic_filter(1) >> rename("_c");
  EXPECT_EQ(chain.size(), 4U);
  const auto out = chain(testing::road_with_vehicles(1));
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(out->id, "road_a_b_c");
  calls.clear();
  EXPECT_FALSE(chain(testing::road_with_vehicles(0)).has_value());
  EXPECT_EQ(calls, (std::vector<std::string>{"_a", "_b"}));
  EXPECT_EQ(TransformChain()(testing::road_with_vehicles(0)), testing::road_with_vehicles(0));
}

TEST(TransformChain, FailureNamesTheElement)
{
  const ScenarioTransform broken =
    ScenarioTransform::preprocessor("Broken", [](const Scenario &) -> Scenario { throw std::runtime_error("boom"); });
  const TransformChain chain = traffic_filter(0) >> broken;
  try {
    chain(testing::road_with_vehicles(1));
    FAIL() << "expected PipelineError";
  } catch (const PipelineError & e) {
    EXPECT_EQ(std::string(e.what()), "Broken: boom");
  }
}

TrafficGraph graph_of(const Scenario & s, Timestep t = 0)
{
  const Simulation sim(s);
  return extract(ExtractionConfig{}, sim, t);
}

TEST(Postprocessors, TrafficJamFlag)
{
  Scenario slow = testing::road_with_vehicles(3);
  for (auto & [id, o] : slow.obstacles) {
    for (auto & st : o.trajectory) {
      st.velocity = Vector2(1.0, 0.0);
    }
  }
  const Postprocessor jam = traffic_jam_postprocessor();
  EXPECT_EQ(jam.apply(graph_of(slow)).globals.at("traffic_jam"), std::vector<float>{1.0F});
  EXPECT_EQ(jam.apply(graph_of(testing::road_with_vehicles(3))).globals.at("traffic_jam"), std::vector<float>{0.0F});
  Scenario two = slow;
  two.obstacles.erase(3);
  EXPECT_EQ(jam.apply(graph_of(two)).globals.at("traffic_jam"), std::vector<float>{0.0F});
}

TEST(Postprocessors, RemoveOffroadVehicles)
{
  Scenario s = testing::road_with_vehicles(2);
  s.obstacles.emplace(
    9, testing::obstacle(9, {testing::state_at(0, {20, 40}, 0.0), testing::state_at(1, {21, 40}, 0.0)}));
  const TrafficGraph g = graph_of(s);
  ASSERT_EQ(g.vehicles.size(), 3U);
  const std::vector<Postprocessor> chain{remove_offroad_vehicles()};
  const TrafficGraph out = apply_postprocessors(chain, g);
  EXPECT_EQ(out.vehicles.ids, (std::vector<std::int64_t>{1, 2}));
  EXPECT_TRUE(validate_graph(out).empty());
}

TEST(Postprocessors, FailuresAreReportedByName)
{
  const std::vector<Postprocessor> throwing{
    {"explode", [](TrafficGraph) -> TrafficGraph { throw std::runtime_error("no"); }}};
  const TrafficGraph g = graph_of(testing::road_with_vehicles(2));
  EXPECT_THROW(apply_postprocessors(throwing, g), PipelineError);
  const std::vector<Postprocessor> corrupting{{"corrupt", [](TrafficGraph graph) {
                                                 graph.edge_store(Relation::v2v).sources.push_back(99);
                                                 return graph;
                                               }}};
  try {
    apply_postprocessors(corrupting, g);
    FAIL() << "expected PipelineError";
  } catch (const PipelineError & e) {
    EXPECT_NE(std::string(e.what()).find("corrupt"), std::string::npos);
  }
}

}  // namespace
}  // namespace trafficgraph
