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
#include "trafficgraph/run_config.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <string>
#include <vector>

namespace trafficgraph
{
namespace
{

using Json = nlohmann::json;

std::string config_error(const std::string & text)
{
  try {
    parse_run_configuration(text);
  } catch (const ConfigError & e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string & haystack, const std::string & needle)
{
  return haystack.find(needle) != std::string::npos;
}

TEST(RunConfiguration, Defaults)
{
  const RunConfiguration c = parse_run_configuration(R"({"input": "a.xml"})", "/base");
  EXPECT_EQ(c.inputs, (std::vector<std::filesystem::path>{"/base/a.xml"}));
  EXPECT_EQ(c.v2v.kind, V2VDrawerKind::voronoi);
  EXPECT_FALSE(c.v2v.max_distance.has_value());
  EXPECT_EQ(c.vtv.max_horizon, 4);
  EXPECT_EQ(c.l2l_types, all_l2l_types());
  EXPECT_EQ(c.v2l_strategy, V2LAssignmentStrategy::center);
  EXPECT_EQ(c.n_pad, 20U);
  EXPECT_EQ(c.collector, CollectorConfig{});
  EXPECT_EQ(c.cache_size, 5U);
  EXPECT_EQ(c.error_policy, ErrorPolicy::abort_run);
  EXPECT_EQ(c.workers, 1U);
  EXPECT_FALSE(c.overwrite);
  EXPECT_EQ(make_transform_chain(c).size(), 0U);
}

TEST(RunConfiguration, ToyConfigLoads)
{
  const RunConfiguration c = load_run_configuration(testing::fixture_dir() / "toy_config.json");
  EXPECT_EQ(c.inputs, (std::vector<std::filesystem::path>{testing::scenario_dir().lexically_normal()}));
  EXPECT_EQ(c.output, (testing::fixture_dir() / "toy_dataset").lexically_normal());
  ASSERT_EQ(c.transforms.size(), 2U);
  EXPECT_EQ(c.transforms[0], (ComponentSpec{"TrafficFilter", {{"min", 10.0}}}));
  EXPECT_EQ(c.transforms[1], (ComponentSpec{"SegmentLanelets", {{"size", 20.0}}}));
  EXPECT_EQ(c.v2v.max_distance, 60.0);
  EXPECT_EQ(c.workers, 2U);
  EXPECT_EQ(scenario_files(c), testing::fixture_scenario_files());
  const ExtractionConfig e = make_extraction_config(c);
  EXPECT_EQ(e.extractors.size(), 1U);
  EXPECT_EQ(e.postprocessors.size(), 1U);
  const TransformChain chain = make_transform_chain(c);
  ASSERT_EQ(chain.size(), 2U);
  EXPECT_EQ(chain.elements()[0].kind(), TransformKind::filter);
}

TEST(RunConfiguration, ProblemsAreReportedTogether)
{
  const std::string message = config_error(R"({
    "input": "x", "colour": 1,
    "v2v": {"drawer": "voronoi", "kk": 3},
    "collector": {"stride": -1},
    "transforms": [{"name": "Rotate"}],
    "error_policy": "ignore"
  })");
  EXPECT_TRUE(contains(message, "invalid configuration")) << message;
  EXPECT_TRUE(contains(message, "colour: unknown key")) << message;
  EXPECT_TRUE(contains(message, "v2v.kk: unknown key")) << message;
  EXPECT_TRUE(contains(message, "collector.stride: expected a non-negative integer")) << message;
  EXPECT_TRUE(contains(message, "transforms[0].name: unknown component \"Rotate\"")) << message;
  EXPECT_TRUE(contains(message, "error_policy")) << message;
}

TEST(RunConfiguration, UnknownDrawerNamesTheField)
{
  EXPECT_TRUE(contains(config_error(R"({"input": "x", "v2v": {"drawer": "foo"}})"), "v2v.drawer: unknown drawer \"foo\""));
}

TEST(RunConfiguration, RangeAndConsistencyChecks)
{
  EXPECT_TRUE(contains(config_error(R"({"input": "x", "v2v": {"drawer": "k_nearest", "k": 0}})"), "v2v"));
  EXPECT_TRUE(contains(
    config_error(R"({"input": "x", "vtv": {"max_horizon": 6}, "collector": {"temporal": true, "cache_size": 5}})"),
    "collector.cache_size"));
  EXPECT_TRUE(contains(config_error(R"({"input": "x", "features": {"n_pad": 1}})"), "n_pad"));
  EXPECT_TRUE(contains(config_error(R"({"input": "x", "features": {"custom": ["nope"]}})"), "features.custom"));
  EXPECT_TRUE(contains(config_error(R"({"input": "x", "transforms": [{"name": "TrafficFilter", "min": 2.5}]})"), "min"));
  EXPECT_TRUE(contains(config_error(R"({"input": "x", "transforms": [{"name": "SegmentLanelets", "size": 0}]})"), "size"));
  EXPECT_TRUE(contains(config_error(R"({"input": "x", "workers": 0})"), "workers"));
  EXPECT_TRUE(contains(config_error(R"({"output": "y"})"), "input: required"));
  EXPECT_TRUE(contains(config_error("[1, 2]"), "JSON object"));
  EXPECT_TRUE(contains(config_error("{"), "not valid JSON"));
}

TEST(RunConfiguration, FingerprintTracksExtractionSettingsOnly)
{
  const Json base = {{"input", "in"}, {"output", "out"}};
  const std::string reference = config_fingerprint(parse_run_configuration(base.dump(), "/b"));
  EXPECT_EQ(reference.size(), 64U);

  const std::vector<Json> changed{
    {{"input", "other"}},
    {{"transforms", Json::array({"TrafficFilter"})}},
    {{"v2v", {{"drawer", "k_nearest"}}}},
    {{"v2v", {{"max_distance", 30}}}},
    {{"vtv", {{"max_horizon", 2}}}},
    {{"l2l_types", Json::array({"successor"})}},
    {{"v2l_strategy", "shape"}},
    {{"features", {{"n_pad", 8}}}},
    {{"features", {{"custom", Json::array({"vehicle_speed"})}}}},
    {{"postprocessors", Json::array({"traffic_jam"})}},
    {{"collector", {{"stride", 2}}}},
    {{"collector", {{"temporal", true}}}},
    {{"collector", {{"timesteps", 3}}}},
    {{"error_policy", "skip"}},
  };
  for (const Json & patch : changed) {
    Json j = base;
    j.merge_patch(patch);
    EXPECT_NE(config_fingerprint(parse_run_configuration(j.dump(), "/b")), reference) << patch.dump();
  }

  const std::vector<Json> ignored{
    {{"output", "elsewhere"}},
    {{"workers", 4}},
    {{"overwrite", true}},
  };
  for (const Json & patch : ignored) {
    Json j = base;
    j.merge_patch(patch);
    EXPECT_EQ(config_fingerprint(parse_run_configuration(j.dump(), "/b")), reference) << patch.dump();
  }
  // Spelling out a default leaves the fingerprint unchanged.
  EXPECT_EQ(
    config_fingerprint(parse_run_configuration(R"({"input": "in", "v2v": {"drawer": "voronoi"}})", "/b")), reference);
}

TEST(RunConfiguration, CanonicalJsonIsStable)
{
  const RunConfiguration c = load_run_configuration(testing::fixture_dir() / "toy_config.json");
  const std::string text = canonical_json(c);
  EXPECT_EQ(text, canonical_json(load_run_configuration(testing::fixture_dir() / "toy_config.json")));
  EXPECT_FALSE(contains(text, "workers"));
  EXPECT_FALSE(contains(text, "toy_dataset"));
}

TEST(RunConfiguration, Registries)
{
  EXPECT_EQ(transform_names(), (std::vector<std::string>{"SegmentLanelets", "TrafficFilter"}));
  EXPECT_EQ(postprocessor_names(), (std::vector<std::string>{"remove_offroad_vehicles", "traffic_jam"}));
}

}  // namespace
}  // namespace trafficgraph
