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

#include "trafficgraph/logging.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <memory>
#include <string>

namespace trafficgraph::log
{
namespace
{

std::shared_ptr<spdlog::logger> & logger()
{
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto l = spdlog::stderr_color_mt("trafficgraph");
    l->set_pattern("[%l] %v");
    l->set_level(spdlog::level::warn);
    return l;
  }();
  return instance;
}

}  // namespace

void configure_from_environment()
{
  const char * value = std::getenv("TRAFFICGRAPH_LOG");
  if (value == nullptr) {
    return;
  }
  const std::string level(value);
  if (level == "error") {
    logger()->set_level(spdlog::level::err);
  } else if (level == "warn") {
    logger()->set_level(spdlog::level::warn);
  } else if (level == "info") {
    logger()->set_level(spdlog::level::info);
  } else if (level == "debug") {
    logger()->set_level(spdlog::level::debug);
  } else {
    logger()->warn("ignoring unknown TRAFFICGRAPH_LOG level '{}'", level);
  }
}

void error(std::string_view message) { logger()->error("{}", message); }
void warn(std::string_view message) { logger()->warn("{}", message); }
void info(std::string_view message) { logger()->info("{}", message); }
void debug(std::string_view message) { logger()->debug("{}", message); }

}  // namespace trafficgraph::log
