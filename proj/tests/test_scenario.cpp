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
#include "trafficgraph/scenario.hpp"
#include "trafficgraph/scenario_io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

namespace trafficgraph
{
namespace
{

const char * kMinimal = R"(<?xml version="1.0"?>
<commonRoad timeStepSize="0.1" benchmarkID="MINI-1">
  <lanelet id="1">
    <leftBound><point><x>0</x><y>2</y></point><point><x>10</x><y>2</y></point></leftBound>
    <rightBound><point><x>0</x><y>-2</y></point><point><x>10</x><y>-2</y></point></rightBound>
  </lanelet>
  <dynamicObstacle id="5">
    <type>car</type>
    <shape><rectangle><length>4</length><width>2</width></rectangle></shape>
    <initialState>
      <position><point><x>1</x><y>0</y></point></position>
      <orientation><intervalStart>0.1</intervalStart><intervalEnd>0.3</intervalEnd></orientation>
      <time><exact>0</exact></time>
      <velocity><exact>10</exact></velocity>
    </initialState>
  </dynamicObstacle>
</commonRoad>
)";

TEST(ScenarioIo, ParsesMinimalDocument)
{
  const Scenario s = parse_scenario(kMinimal);
  EXPECT_EQ(s.id, "MINI-1");
  EXPECT_DOUBLE_EQ(s.dt, 0.1);
  ASSERT_EQ(s.lanelets.size(), 1U);
  const Lanelet & l = s.lanelets.at(1);
  EXPECT_TRUE(l.center[0].isApprox(Point2(0, 0)));
  EXPECT_DOUBLE_EQ(l.length(), 10.0);
  ASSERT_EQ(s.obstacles.size(), 1U);
  const VehicleState & st = s.obstacles.at(5).trajectory.at(0);
  EXPECT_NEAR(st.orientation, 0.2, 1e-12);
  EXPECT_NEAR(st.velocity.x(), 10 * std::cos(0.2), 1e-12);
  EXPECT_NEAR(st.velocity.y(), 10 * std::sin(0.2), 1e-12);
  EXPECT_FALSE(st.acceleration.has_value());
}

TEST(ScenarioIo, ParsesFixtures)
{
  const Scenario highway = load_scenario_file(testing::highway_file());
  EXPECT_EQ(highway.id, "DEU_Highway-1_1_T-1");
  EXPECT_DOUBLE_EQ(highway.dt, 0.2);
  EXPECT_EQ(highway.lanelets.size(), 6U);
  EXPECT_EQ(highway.obstacles.size(), 11U);
  EXPECT_EQ(highway.final_timestep(), 19);
  // Vehicle 8 is absent at t = 7 and 8.
  EXPECT_EQ(highway.obstacles.at(8).state_at(7), nullptr);
  EXPECT_NE(highway.obstacles.at(8).state_at(9), nullptr);
  EXPECT_EQ(highway.lanelets.at(100).adjacent_left, (LateralAdjacency{110, true}));

  const Scenario crossing = load_scenario_file(testing::intersection_file());
  EXPECT_EQ(crossing.lanelets.size(), 10U);
  EXPECT_EQ(crossing.obstacles.size(), 4U);
  EXPECT_EQ(crossing.lanelets.at(10).adjacent_left, (LateralAdjacency{20, false}));
  EXPECT_EQ(crossing.lanelets.at(10).successors, (std::set<LaneletId>{11, 13}));
}

TEST(ScenarioIo, WriteThenParseIsIdentity)
{
  for (const Scenario & s : testing::fixture_scenarios()) {
    const Scenario again = parse_scenario(write_scenario(s));
    EXPECT_EQ(again, s) << s.id;
  }
}

TEST(ScenarioIo, FallbackIdFromFileName)
{
  std::string doc = kMinimal;
  doc.replace(doc.find(" benchmarkID=\"MINI-1\""), std::string(" benchmarkID=\"MINI-1\"").size(), "");
  EXPECT_EQ(parse_scenario(doc, "from_file").id, "from_file");
}

TEST(ScenarioIo, MalformedXmlReportsLine)
{
  try {
    parse_scenario("<commonRoad timeStepSize=\"0.1\">\n<lanelet id=\"1\">\n</commonRoad>");
    FAIL() << "expected ParseError";
  } catch (const ParseError & e) {
    EXPECT_GT(e.line(), 0);
  }
}

TEST(ScenarioIo, MissingTimeStepSizeIsParseError)
{
  EXPECT_THROW(parse_scenario("<commonRoad benchmarkID=\"x\"/>"), ParseError);
  EXPECT_THROW(parse_scenario("<other timeStepSize=\"0.1\"/>"), ParseError);
}

TEST(ScenarioIo, DanglingReferenceIsValidationError)
{
  std::string doc = kMinimal;
  doc.replace(doc.find("</lanelet>"), 10, "<successor ref=\"99\"/></lanelet>");
  EXPECT_THROW(parse_scenario(doc), ValidationError);
}

TEST(ScenarioIo, NonRectangleObstacleIsSkipped)
{
  std::string doc = kMinimal;
  doc.replace(doc.find("<rectangle>"), std::string("<rectangle><length>4</length><width>2</width></rectangle>").size(),
              "<circle><radius>1</radius></circle>");
  EXPECT_TRUE(parse_scenario(doc).obstacles.empty());
}

TEST(ScenarioIo, BadNumberIsParseError)
{
  std::string doc = kMinimal;
  doc.replace(doc.find("<x>10</x>"), 9, "<x>ten</x>");
  EXPECT_THROW(parse_scenario(doc), ParseError);
}

TEST(Scenario, ValidateRejectsBadInvariants)
{
  Scenario s = testing::road_with_vehicles(2);
  EXPECT_NO_THROW(validate_scenario(s));
  Scenario bad_dt = s;
  bad_dt.dt = 0.0;
  EXPECT_THROW(validate_scenario(bad_dt), ValidationError);
  Scenario bad_size = s;
  bad_size.obstacles.at(1).width = 0.0;
  EXPECT_THROW(validate_scenario(bad_size), ValidationError);
  Scenario bad_time = s;
  bad_time.obstacles.at(1).trajectory[1].timestep = 0;
  EXPECT_THROW(validate_scenario(bad_time), ValidationError);
}

TEST(Scenario, DerivativesByFiniteDifferences)
{
  DynamicObstacle o = testing::obstacle(
    1, {testing::state_at(0, {0, 0}, 0.0, {1, 0}), testing::state_at(1, {0.1, 0}, 0.2, {2, 0}),
        testing::state_at(3, {0.3, 0}, 0.6, {4, 0})});
  for (auto & st : o.trajectory) {
    st.acceleration.reset();
    st.yaw_rate.reset();
  }
  const DynamicObstacle d = derive_state_derivatives(o, 0.5);
  // One-sided at the start, central (over the actual 2-step and 1-step spans) inside.
  EXPECT_NEAR(d.trajectory[0].acceleration->x(), (2.0 - 1.0) / 0.5, 1e-12);
  EXPECT_NEAR(d.trajectory[1].acceleration->x(), (4.0 - 1.0) / 1.5, 1e-12);
  EXPECT_NEAR(d.trajectory[2].acceleration->x(), (4.0 - 2.0) / 1.0, 1e-12);
  EXPECT_NEAR(*d.trajectory[0].yaw_rate, 0.2 / 0.5, 1e-12);
  EXPECT_NEAR(*d.trajectory[1].yaw_rate, 0.6 / 1.5, 1e-12);

  // Existing values are kept; a single state gets zeros.
  DynamicObstacle single = testing::obstacle(2, {testing::state_at(4, {0, 0}, 0.0)});
  single.trajectory[0].acceleration.reset();
  single.trajectory[0].yaw_rate.reset();
  const DynamicObstacle ds = derive_state_derivatives(single, 0.1);
  EXPECT_TRUE(ds.trajectory[0].acceleration->isZero());
  EXPECT_EQ(*ds.trajectory[0].yaw_rate, 0.0);
  EXPECT_THROW(derive_state_derivatives(single, 0.0), ArgumentError);
}

TEST(Scenario, YawRateWrapsAcrossPi)
{
  DynamicObstacle o = testing::obstacle(
    1, {testing::state_at(0, {0, 0}, M_PI - 0.05), testing::state_at(1, {1, 0}, -M_PI + 0.05)});
  for (auto & st : o.trajectory) {
    st.yaw_rate.reset();
  }
  const DynamicObstacle d = derive_state_derivatives(o, 0.1);
  EXPECT_NEAR(*d.trajectory[0].yaw_rate, 1.0, 1e-9);
}

}  // namespace
}  // namespace trafficgraph
