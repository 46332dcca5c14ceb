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
#include "trafficgraph/serialization.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>
#include <stdexcept>
#include <vector>

namespace trafficgraph
{
namespace
{

TEST(Simulation, LifetimeAndPresence)
{
  const Simulation sim(load_scenario_file(testing::highway_file()));
  EXPECT_EQ(sim.lifetime(), 20);
  EXPECT_THROW(sim.vehicles_at(20), std::out_of_range);
  EXPECT_THROW(sim.vehicles_at(-1), std::out_of_range);
  // Vehicle 8 is missing at t = 7 and 8, vehicle 9 enters at t = 3.
  EXPECT_EQ(sim.state_of(8, 7), nullptr);
  EXPECT_NE(sim.state_of(8, 9), nullptr);
  EXPECT_EQ(sim.state_of(9, 2), nullptr);
  const auto present = sim.vehicles_at(0);
  for (std::size_t i = 1; i < present.size(); ++i) {
    EXPECT_LT(present[i - 1].obstacle->id, present[i].obstacle->id);
  }
  const Simulation empty(Scenario{});
  EXPECT_EQ(empty.lifetime(), 1);
}

TEST(TrafficExtractor, SingleGraphShape)
{
  const Simulation sim(load_scenario_file(testing::highway_file()));
  TrafficExtractor extractor(ExtractionConfig{}, sim);
  const TrafficGraph g = extractor.extract(7);
  EXPECT_EQ(g.kind, GraphKind::single);
  EXPECT_EQ(g.timestep, 7);
  EXPECT_EQ(g.vehicles.size(), sim.vehicles_at(7).size());
  EXPECT_EQ(g.lanelets.size(), sim.scenario().lanelets.size());
  EXPECT_FALSE(g.has_relation(Relation::vtv));
  EXPECT_TRUE(validate_graph(g).empty());
  EXPECT_TRUE(validate_features(g).empty());
  EXPECT_EQ(g.vehicles.features.cols(), 10);
  EXPECT_EQ(g.lanelets.features.cols(), 84);
  EXPECT_THROW(extractor.extract(20), std::out_of_range);
  // L2V mirrors V2L.
  const EdgeStore & v2l = g.edge_store(Relation::v2l);
  const EdgeStore & l2v = g.edge_store(Relation::l2v);
  ASSERT_EQ(v2l.size(), l2v.size());
  std::multiset<std::pair<std::int64_t, std::int64_t>> forward, backward;
  for (std::size_t e = 0; e < v2l.size(); ++e) {
    forward.insert({v2l.sources[e], v2l.targets[e]});
    backward.insert({l2v.targets[e], l2v.sources[e]});
  }
  EXPECT_EQ(forward, backward);
}

TEST(TrafficExtractor, DeterministicAcrossInstances)
{
  const Simulation sim(load_scenario_file(testing::intersection_file()));
  TrafficExtractor a(ExtractionConfig{}, sim);
  TrafficExtractor b(ExtractionConfig{}, sim);
  for (Timestep t = 0; t < sim.lifetime(); ++t) {
    EXPECT_EQ(serialize(a.extract(t)), serialize(b.extract(t)));
  }
  EXPECT_EQ(serialize(a.extract(3)), serialize(extract(ExtractionConfig{}, sim, 3)));
}

TEST(TemporalExtractor, NewestSliceEqualsSingleGraph)
{
  for (const Scenario & s : testing::fixture_scenarios()) {
    const Simulation sim(s);
    TemporalTrafficExtractor temporal(ExtractionConfig{}, sim);
    TrafficExtractor single(ExtractionConfig{}, sim);
    for (Timestep t = 0; t < sim.lifetime(); ++t) {
      const TrafficGraph w = temporal.extract(t);
      EXPECT_EQ(w.kind, GraphKind::temporal);
      EXPECT_EQ(w.window_end, t);
      EXPECT_EQ(w.window_begin, std::max<Timestep>(0, t - 4));
      EXPECT_TRUE(validate_graph(w).empty()) << s.id << " t=" << t;
      EXPECT_TRUE(validate_features(w).empty()) << s.id << " t=" << t;
      EXPECT_EQ(time_slice(w, t), single.extract(t)) << s.id << " t=" << t;
    }
  }
}

TEST(TemporalExtractor, VtvClosedFormForOneVehicle)
{
  Scenario s = testing::road_with_vehicles(1, 6);
  s.dt = 0.2;
  const Simulation sim(s);
  ExtractionConfig c;
  c.vtv.max_horizon = 4;
  c.cache_size = 5;
  TemporalTrafficExtractor extractor(c, sim);
  TrafficGraph w;
  for (Timestep t = 0; t <= 4; ++t) {
    w = extractor.extract(t);
  }
  const EdgeStore & vtv = w.edge_store(Relation::vtv);
  ASSERT_EQ(vtv.size(), 10U);
  const auto dt_column = static_cast<Eigen::Index>(*channel_offset(vtv.channels, "delta_time"));
  std::multiset<long> tenths;
  for (std::size_t e = 0; e < vtv.size(); ++e) {
    const Timestep steps = w.vehicles.timesteps[vtv.targets[e]] - w.vehicles.timesteps[vtv.sources[e]];
    EXPECT_GT(steps, 0);
    const float dt = vtv.features(static_cast<Eigen::Index>(e), dt_column);
    EXPECT_FLOAT_EQ(dt, static_cast<float>(0.2 * static_cast<double>(steps)));
    tenths.insert(std::lround(dt * 10.0F));
  }
  EXPECT_EQ(tenths, (std::multiset<long>{2, 2, 2, 2, 4, 4, 4, 6, 6, 8}));
}

TEST(TemporalExtractor, RejectsNonIncreasingTimesteps)
{
  const Simulation sim(testing::road_with_vehicles(2, 5));
  TemporalTrafficExtractor extractor(ExtractionConfig{}, sim);
  extractor.extract(2);
  EXPECT_THROW(extractor.extract(2), UsageError);
  EXPECT_THROW(extractor.extract(1), UsageError);
  EXPECT_NO_THROW(extractor.extract(3));
  EXPECT_THROW(extractor.extract(10), std::out_of_range);
}

TEST(TemporalExtractor, ConfigValidation)
{
  const Simulation sim(testing::road_with_vehicles(1));
  ExtractionConfig c;
  c.cache_size = 0;
  EXPECT_THROW(TemporalTrafficExtractor(c, sim), ArgumentError);
  c = {};
  c.n_pad = 1;
  EXPECT_THROW(TrafficExtractor(c, sim), ArgumentError);
}

TEST(TemporalExtractor, PostprocessorsRunPerStage)
{
  const Simulation sim(testing::road_with_vehicles(3, 4));
  ExtractionConfig c;
  c.postprocessors.push_back(traffic_jam_postprocessor());
  c.temporal_postprocessors.push_back(
    {"mark", [](TrafficGraph g) {
       g.globals["window_size"] = {static_cast<float>(g.window_end - g.window_begin + 1)};
       return g;
     }});
  TemporalTrafficExtractor extractor(c, sim);
  extractor.extract(0);
  const TrafficGraph w = extractor.extract(1);
  EXPECT_EQ(w.globals.at("window_size"), std::vector<float>{2.0F});
  EXPECT_TRUE(w.globals.count("traffic_jam"));
}

}  // namespace
}  // namespace trafficgraph
