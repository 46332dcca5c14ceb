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

#ifndef TRAFFICGRAPH__CLI_HPP_
#define TRAFFICGRAPH__CLI_HPP_

#include "trafficgraph/traffic_graph.hpp"

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace trafficgraph
{

/// Per-channel summary over all rows and columns of one feature channel, NaN entries excluded.
struct ChannelStatistics
{
  std::string store;
  std::string channel;
  /// Number of non-NaN values; min, max and mean are NaN when it is zero.
  std::size_t count{0};
  double min{0.0};
  double max{0.0};
  double mean{0.0};
};

/// Statistics for every channel of every store, in schema order (v, l, then relations).
std::vector<ChannelStatistics> channel_statistics(const TrafficGraph & graph);

/// Every violation found in a dataset directory, each prefixed with the sample file.
std::vector<std::string> validate_dataset(const std::filesystem::path & directory);

/**
 * @brief Command-line entry point: extract, inspect and validate.
 *
 * Progress and diagnostics go to `err`, results to `out`.
 * @return 0 on success, 1 on failure or reported violations, 2 on usage errors.
 */
int run_cli(int argc, const char * const * argv, std::ostream & out, std::ostream & err);

}  // namespace trafficgraph

#endif  // TRAFFICGRAPH__CLI_HPP_
