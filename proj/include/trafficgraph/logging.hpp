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

#ifndef TRAFFICGRAPH__LOGGING_HPP_
#define TRAFFICGRAPH__LOGGING_HPP_

#include <string_view>

namespace trafficgraph::log
{

/// Reads TRAFFICGRAPH_LOG (error|warn|info|debug, default warn) and applies it.
void configure_from_environment();

void error(std::string_view message);
void warn(std::string_view message);
void info(std::string_view message);
void debug(std::string_view message);

}  // namespace trafficgraph::log

#endif  // TRAFFICGRAPH__LOGGING_HPP_
