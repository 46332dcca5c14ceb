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

#ifndef TRAFFICGRAPH__SCENARIO_IO_HPP_
#define TRAFFICGRAPH__SCENARIO_IO_HPP_

#include "trafficgraph/scenario.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace trafficgraph
{

/**
 * @brief Parse a CommonRoad (2020a-compatible) scenario document.
 *
 * Supported subset: `lanelet` (leftBound/rightBound point lists, optional centerBound,
 * predecessor/successor/adjacentLeft/adjacentRight refs) and `dynamicObstacle` with a
 * rectangle shape, initial state and trajectory. States read position, orientation, time,
 * velocity, acceleration and yawRate; `exact` values and interval midpoints are accepted.
 * A scalar velocity v becomes v * (cos(theta), sin(theta)) unless a `velocityY` component is
 * present, in which case (velocity, velocityY) is taken as the global vector; acceleration
 * likewise. Every other element is skipped with a warning.
 *
 * @param fallback_id used when the document carries no benchmarkID.
 * @throws ParseError on malformed XML (with line) or missing required elements,
 *         ValidationError on dangling references, GeometryError on degenerate bounds.
 */
Scenario parse_scenario(std::string_view document, const std::string & fallback_id = "");

/// Reads and parses a scenario file; the file stem is the fallback id.
Scenario load_scenario_file(const std::filesystem::path & path);

/// Writes the supported subset back as XML; parse_scenario(write_scenario(s)) == s.
std::string write_scenario(const Scenario & scenario);

}  // namespace trafficgraph

#endif  // TRAFFICGRAPH__SCENARIO_IO_HPP_
