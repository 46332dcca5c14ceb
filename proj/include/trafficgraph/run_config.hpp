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

#ifndef TRAFFICGRAPH__RUN_CONFIG_HPP_
#define TRAFFICGRAPH__RUN_CONFIG_HPP_

#include "trafficgraph/dataset.hpp"
#include "trafficgraph/extractor.hpp"
#include "trafficgraph/pipeline.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace trafficgraph
{

/// A named pipeline component with numeric parameters, e.g. {"name": "TrafficFilter", "min": 10}.
struct ComponentSpec
{
  std::string name;
  std::map<std::string, double> parameters;

  bool operator==(const ComponentSpec &) const = default;
};

struct RunConfiguration
{
  /// Scenario files or directories, resolved against the configuration file's directory.
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path output;
  std::vector<ComponentSpec> transforms;
  V2VDrawerConfig v2v;
  VTVDrawerConfig vtv;
  L2LTypeSet l2l_types{all_l2l_types()};
  V2LAssignmentStrategy v2l_strategy{V2LAssignmentStrategy::center};
  std::size_t n_pad{kDefaultVertexPadding};
  std::vector<std::string> custom_extractors;
  std::vector<std::string> temporal_custom_extractors;
  std::vector<ComponentSpec> postprocessors;
  std::vector<ComponentSpec> temporal_postprocessors;
  CollectorConfig collector;
  std::size_t cache_size{5};
  ErrorPolicy error_policy{ErrorPolicy::abort_run};
  std::size_t workers{1};
  bool overwrite{false};
};

/**
 * @brief Parse a JSON run configuration.
 *
 * Unknown keys, unknown component names, ill-typed values and invalid settings are all
 * collected and reported together.
 * @throws ConfigError listing every problem, one per line, each prefixed with its field path.
 */
RunConfiguration parse_run_configuration(
  const std::string & text, const std::filesystem::path & base_directory = {});

/// @throws ConfigError if the file cannot be read or is invalid.
RunConfiguration load_run_configuration(const std::filesystem::path & path);

/// Canonical JSON of every setting that influences the produced samples.
std::string canonical_json(const RunConfiguration & config);

/// Hex SHA-256 of canonical_json(); output path, workers and overwrite are excluded.
std::string config_fingerprint(const RunConfiguration & config);

ExtractionConfig make_extraction_config(const RunConfiguration & config);
TransformChain make_transform_chain(const RunConfiguration & config);

/// Scenario files of all inputs in input order, each directory expanded in sorted order.
std::vector<std::filesystem::path> scenario_files(const RunConfiguration & config);

std::vector<std::string> transform_names();
std::vector<std::string> postprocessor_names();

}  // namespace trafficgraph

#endif  // TRAFFICGRAPH__RUN_CONFIG_HPP_
