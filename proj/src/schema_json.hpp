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

#ifndef SCHEMA_JSON_HPP_
#define SCHEMA_JSON_HPP_

#include "trafficgraph/traffic_graph.hpp"

#include <json.hpp>

#include <string>

namespace trafficgraph::detail
{

inline nlohmann::json channels_to_json(const ChannelList & channels)
{
  nlohmann::json out = nlohmann::json::array();
  for (const auto & c : channels) {
    out.push_back({{"name", c.name}, {"width", c.width}, {"unit", c.unit}});
  }
  return out;
}

inline ChannelList channels_from_json(const nlohmann::json & j)
{
  ChannelList out;
  for (const auto & c : j) {
    out.push_back(
      {c.at("name").get<std::string>(), c.at("width").get<std::size_t>(), c.at("unit").get<std::string>()});
  }
  return out;
}

/// {"v": [...], "l": [...], "<relation>": [...]} with one entry per declared store.
inline nlohmann::json schema_to_json(const ChannelSchema & schema)
{
  nlohmann::json out = nlohmann::json::object();
  out["v"] = channels_to_json(schema.vehicle);
  out["l"] = channels_to_json(schema.lanelet);
  for (const auto & [relation, channels] : schema.relations) {
    out[std::string(to_string(relation))] = channels_to_json(channels);
  }
  return out;
}

inline ChannelSchema schema_from_json(const nlohmann::json & j)
{
  ChannelSchema schema;
  for (const auto & [key, value] : j.items()) {
    if (key == "v") {
      schema.vehicle = channels_from_json(value);
    } else if (key == "l") {
      schema.lanelet = channels_from_json(value);
    } else if (const auto relation = relation_from_string(key)) {
      schema.relations[*relation] = channels_from_json(value);
    }
  }
  return schema;
}

}  // namespace trafficgraph::detail

#endif  // SCHEMA_JSON_HPP_
