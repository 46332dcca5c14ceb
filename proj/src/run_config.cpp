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

#include "trafficgraph/run_config.hpp"

#include "trafficgraph/errors.hpp"

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

namespace trafficgraph
{
namespace
{

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct TransformEntry
{
  std::map<std::string, double> defaults;
  std::function<ScenarioTransform(const std::map<std::string, double> &)> make;
};

struct PostprocessorEntry
{
  std::map<std::string, double> defaults;
  std::function<Postprocessor(const std::map<std::string, double> &)> make;
};

const std::map<std::string, TransformEntry> & transform_registry()
{
  static const std::map<std::string, TransformEntry> registry = {
    {"TrafficFilter",
     {{{"min", 10.0}},
      [](const auto & p) { return traffic_filter(static_cast<std::size_t>(p.at("min"))); }}},
    {"SegmentLanelets", {{{"size", 20.0}}, [](const auto & p) { return segment_lanelets(p.at("size")); }}},
  };
  return registry;
}

const std::map<std::string, PostprocessorEntry> & postprocessor_registry()
{
  static const std::map<std::string, PostprocessorEntry> registry = {
    {"traffic_jam",
     {{{"speed_threshold", 2.0}, {"min_vehicles", 3.0}},
      [](const auto & p) {
        return traffic_jam_postprocessor(p.at("speed_threshold"), static_cast<std::size_t>(p.at("min_vehicles")));
      }}},
    {"remove_offroad_vehicles", {{}, [](const auto &) { return remove_offroad_vehicles(); }}},
  };
  return registry;
}

bool is_count(double v) { return std::isfinite(v) && v >= 0.0 && std::floor(v) == v; }

/// Parameters that must be whole numbers.
const std::set<std::string> kCountParameters = {"min", "min_vehicles"};

/// Collects every problem instead of stopping at the first.
class Reader
{
public:
  std::vector<std::string> errors;

  void fail(const std::string & field, const std::string & message) { errors.push_back(field + ": " + message); }

  void check_keys(const Json & object, const std::string & field, const std::set<std::string> & allowed)
  {
    for (const auto & [key, value] : object.items()) {
      if (allowed.count(key) == 0) {
        fail(join(field, key), "unknown key");
      }
    }
  }

  static std::string join(const std::string & field, const std::string & key)
  {
    return field.empty() ? key : field + "." + key;
  }

  const Json * object(const Json & parent, const std::string & field, const std::string & key)
  {
    if (!parent.contains(key)) {
      return nullptr;
    }
    const Json & value = parent.at(key);
    if (!value.is_object()) {
      fail(join(field, key), "expected an object");
      return nullptr;
    }
    return &value;
  }

  template <class T>
  void read(const Json & parent, const std::string & field, const std::string & key, T & out)
  {
    if (!parent.contains(key)) {
      return;
    }
    const Json & value = parent.at(key);
    const std::string path = join(field, key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!value.is_boolean()) {
        return fail(path, "expected a boolean");
      }
      out = value.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!value.is_string()) {
        return fail(path, "expected a string");
      }
      out = value.get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!value.is_number()) {
        return fail(path, "expected a number");
      }
      out = value.get<T>();
    } else {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
        return fail(path, "expected a non-negative integer");
      }
      out = value.get<T>();
    }
  }

  std::vector<std::string> strings(const Json & parent, const std::string & field, const std::string & key)
  {
    std::vector<std::string> out;
    if (!parent.contains(key)) {
      return out;
    }
    const Json & value = parent.at(key);
    const std::string path = join(field, key);
    if (!value.is_array()) {
      fail(path, "expected a list of strings");
      return out;
    }
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (!value[i].is_string()) {
        fail(fmt::format("{}[{}]", path, i), "expected a string");
      } else {
        out.push_back(value[i].get<std::string>());
      }
    }
    return out;
  }

  template <class Registry>
  std::vector<ComponentSpec> components(
    const Json & parent, const std::string & key, const Registry & registry)
  {
    std::vector<ComponentSpec> out;
    if (!parent.contains(key)) {
      return out;
    }
    const Json & list = parent.at(key);
    if (!list.is_array()) {
      fail(key, "expected a list of components");
      return out;
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = fmt::format("{}[{}]", key, i);
      const Json & item = list[i];
      ComponentSpec spec;
      if (item.is_string()) {
        spec.name = item.get<std::string>();
      } else if (item.is_object() && item.contains("name") && item.at("name").is_string()) {
        spec.name = item.at("name").get<std::string>();
      } else {
        fail(path, "expected a name or an object with a \"name\" string");
        continue;
      }
      const auto entry = registry.find(spec.name);
      if (entry == registry.end()) {
        fail(join(path, "name"), fmt::format("unknown component \"{}\"", spec.name));
        continue;
      }
      spec.parameters = entry->second.defaults;
      if (item.is_object()) {
        for (const auto & [name, value] : item.items()) {
          if (name == "name") {
            continue;
          }
          const std::string param = join(path, name);
          if (spec.parameters.count(name) == 0) {
            fail(param, fmt::format("unknown parameter for {}", spec.name));
          } else if (!value.is_number()) {
            fail(param, "expected a number");
          } else if (kCountParameters.count(name) && !is_count(value.template get<double>())) {
            fail(param, "expected a non-negative integer");
          } else {
            spec.parameters[name] = value.template get<double>();
          }
        }
      }
      out.push_back(std::move(spec));
    }
    return out;
  }
};

Json components_json(const std::vector<ComponentSpec> & specs)
{
  Json out = Json::array();
  for (const auto & spec : specs) {
    out.push_back({{"name", spec.name}, {"parameters", spec.parameters}});
  }
  return out;
}

std::string hex(const unsigned char * bytes, unsigned int length)
{
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += fmt::format("{:02x}", bytes[i]);
  }
  return out;
}

}  // namespace

std::vector<std::string> transform_names()
{
  std::vector<std::string> names;
  for (const auto & [name, entry] : transform_registry()) {
    names.push_back(name);
  }
  return names;
}

std::vector<std::string> postprocessor_names()
{
  std::vector<std::string> names;
  for (const auto & [name, entry] : postprocessor_registry()) {
    names.push_back(name);
  }
  return names;
}

RunConfiguration parse_run_configuration(const std::string & text, const fs::path & base_directory)
{
  Json document;
  try {
    document = Json::parse(text);
  } catch (const Json::parse_error & e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!document.is_object()) {
    throw ConfigError("configuration must be a JSON object");
  }

  Reader r;
  RunConfiguration config;
  r.check_keys(
    document, "",
    {"input", "output", "transforms", "v2v", "vtv", "l2l_types", "v2l_strategy", "features", "postprocessors",
     "temporal_postprocessors", "collector", "error_policy", "workers", "overwrite"});

  const auto resolve = [&](const std::string & p) {
    fs::path path(p);
    if (path.is_relative() && !base_directory.empty()) {
      path = base_directory / path;
    }
    return path.lexically_normal();
  };
  if (!document.contains("input")) {
    r.fail("input", "required");
  } else if (document.at("input").is_string()) {
    config.inputs.push_back(resolve(document.at("input").get<std::string>()));
  } else {
    for (const auto & p : r.strings(document, "", "input")) {
      config.inputs.push_back(resolve(p));
    }
  }
  std::string output;
  r.read(document, "", "output", output);
  if (!output.empty()) {
    config.output = resolve(output);
  }

  config.transforms = r.components(document, "transforms", transform_registry());
  config.postprocessors = r.components(document, "postprocessors", postprocessor_registry());
  config.temporal_postprocessors = r.components(document, "temporal_postprocessors", postprocessor_registry());

  if (const Json * v2v = r.object(document, "", "v2v")) {
    r.check_keys(*v2v, "v2v", {"drawer", "k", "radius", "max_distance"});
    std::string drawer{to_string(config.v2v.kind)};
    r.read(*v2v, "v2v", "drawer", drawer);
    if (const auto kind = v2v_drawer_from_string(drawer)) {
      config.v2v.kind = *kind;
    } else {
      r.fail("v2v.drawer", fmt::format("unknown drawer \"{}\"", drawer));
    }
    r.read(*v2v, "v2v", "k", config.v2v.k);
    r.read(*v2v, "v2v", "radius", config.v2v.radius);
    if (v2v->contains("max_distance") && !v2v->at("max_distance").is_null()) {
      double cutoff = 0.0;
      r.read(*v2v, "v2v", "max_distance", cutoff);
      config.v2v.max_distance = cutoff;
    }
  }
  if (const Json * vtv = r.object(document, "", "vtv")) {
    r.check_keys(*vtv, "vtv", {"max_horizon"});
    r.read(*vtv, "vtv", "max_horizon", config.vtv.max_horizon);
  }
  if (document.contains("l2l_types")) {
    config.l2l_types.clear();
    for (const auto & name : r.strings(document, "", "l2l_types")) {
      if (const auto type = l2l_type_from_string(name)) {
        config.l2l_types.insert(*type);
      } else {
        r.fail("l2l_types", fmt::format("unknown lanelet relation \"{}\"", name));
      }
    }
  }
  std::string strategy{to_string(config.v2l_strategy)};
  r.read(document, "", "v2l_strategy", strategy);
  if (const auto s = v2l_strategy_from_string(strategy)) {
    config.v2l_strategy = *s;
  } else {
    r.fail("v2l_strategy", fmt::format("unknown strategy \"{}\"", strategy));
  }

  if (const Json * features = r.object(document, "", "features")) {
    r.check_keys(*features, "features", {"n_pad", "custom", "temporal_custom"});
    r.read(*features, "features", "n_pad", config.n_pad);
    config.custom_extractors = r.strings(*features, "features", "custom");
    config.temporal_custom_extractors = r.strings(*features, "features", "temporal_custom");
    for (const auto * list : {&config.custom_extractors, &config.temporal_custom_extractors}) {
      for (const auto & name : *list) {
        if (!builtin_extractor(name)) {
          r.fail(
            list == &config.custom_extractors ? "features.custom" : "features.temporal_custom",
            fmt::format("unknown feature extractor \"{}\"", name));
        }
      }
    }
  }

  if (const Json * collector = r.object(document, "", "collector")) {
    r.check_keys(*collector, "collector", {"timesteps", "stride", "temporal", "cache_size", "skip_warmup"});
    if (collector->contains("timesteps")) {
      const Json & t = collector->at("timesteps");
      if (t.is_null() || (t.is_string() && t.get<std::string>() == "full")) {
        config.collector.timesteps.reset();
      } else {
        Timestep steps = 0;
        r.read(*collector, "collector", "timesteps", steps);
        config.collector.timesteps = steps;
      }
    }
    r.read(*collector, "collector", "stride", config.collector.stride);
    r.read(*collector, "collector", "temporal", config.collector.temporal);
    r.read(*collector, "collector", "cache_size", config.cache_size);
    r.read(*collector, "collector", "skip_warmup", config.collector.skip_warmup);
  }

  std::string policy = "abort";
  r.read(document, "", "error_policy", policy);
  if (policy == "abort") {
    config.error_policy = ErrorPolicy::abort_run;
  } else if (policy == "skip") {
    config.error_policy = ErrorPolicy::skip_scenario;
  } else {
    r.fail("error_policy", fmt::format("unknown policy \"{}\" (expected abort or skip)", policy));
  }
  r.read(document, "", "workers", config.workers);
  if (document.contains("workers") && config.workers < 1) {
    r.fail("workers", "must be >= 1");
  }
  r.read(document, "", "overwrite", config.overwrite);

  // Range checks of the component settings, only meaningful once the types are right.
  if (r.errors.empty()) {
    const auto check = [&](const std::string & field, const std::function<void()> & fn) {
      try {
        fn();
      } catch (const Error & e) {
        r.fail(field, e.what());
      }
    };
    check("v2v", [&] { validate(config.v2v); });
    check("vtv", [&] { validate(config.vtv); });
    check("collector", [&] { validate(config.collector); });
    check("features", [&] {
      if (config.n_pad < 2) {
        throw ArgumentError("n_pad must be >= 2");
      }
    });
    check("collector.cache_size", [&] {
      if (config.cache_size < 1) {
        throw ArgumentError("cache_size must be >= 1");
      }
      if (config.collector.temporal && static_cast<std::size_t>(config.vtv.max_horizon) + 1 > config.cache_size) {
        throw ArgumentError(fmt::format(
          "vtv.max_horizon {} needs cache_size >= {}", config.vtv.max_horizon, config.vtv.max_horizon + 1));
      }
    });
    for (std::size_t i = 0; i < config.transforms.size(); ++i) {
      const ComponentSpec & spec = config.transforms[i];
      check(fmt::format("transforms[{}]", i), [&] { transform_registry().at(spec.name).make(spec.parameters); });
    }
    check("features", [&] { extraction_schema(make_extraction_config(config), config.collector.temporal); });
  }

  if (!r.errors.empty()) {
    std::string message = "invalid configuration:";
    for (const auto & e : r.errors) {
      message += "\n  " + e;
    }
    throw ConfigError(message);
  }
  return config;
}

RunConfiguration load_run_configuration(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read configuration " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_configuration(text.str(), path.parent_path());
}

std::string canonical_json(const RunConfiguration & config)
{
  Json inputs = Json::array();
  for (const auto & p : config.inputs) {
    inputs.push_back(p.generic_string());
  }
  Json l2l = Json::array();
  for (const auto type : config.l2l_types) {
    l2l.push_back(std::string(to_string(type)));
  }
  const Json document = {
    {"inputs", inputs},
    {"transforms", components_json(config.transforms)},
    {"v2v",
     {{"drawer", std::string(to_string(config.v2v.kind))},
      {"k", config.v2v.k},
      {"radius", config.v2v.radius},
      {"max_distance", config.v2v.max_distance ? Json(*config.v2v.max_distance) : Json(nullptr)}}},
    {"vtv", {{"max_horizon", config.vtv.max_horizon}}},
    {"l2l_types", l2l},
    {"v2l_strategy", std::string(to_string(config.v2l_strategy))},
    {"features",
     {{"n_pad", config.n_pad}, {"custom", config.custom_extractors},
      {"temporal_custom", config.temporal_custom_extractors}}},
    {"postprocessors", components_json(config.postprocessors)},
    {"temporal_postprocessors", components_json(config.temporal_postprocessors)},
    {"collector",
     {{"timesteps", config.collector.timesteps ? Json(*config.collector.timesteps) : Json(nullptr)},
      {"stride", config.collector.stride},
      {"temporal", config.collector.temporal},
      {"cache_size", config.cache_size},
      {"skip_warmup", config.collector.skip_warmup}}},
    {"error_policy", config.error_policy == ErrorPolicy::abort_run ? "abort" : "skip"},
  };
  return document.dump();
}

std::string config_fingerprint(const RunConfiguration & config)
{
  const std::string text = canonical_json(config);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw ConfigError("SHA-256 digest failed");
  }
  return hex(digest, length);
}

ExtractionConfig make_extraction_config(const RunConfiguration & config)
{
  ExtractionConfig out;
  out.v2v = config.v2v;
  out.vtv = config.vtv;
  out.l2l_types = config.l2l_types;
  out.v2l_strategy = config.v2l_strategy;
  out.n_pad = config.n_pad;
  out.cache_size = config.cache_size;
  const auto factories = [](const std::vector<std::string> & names) {
    std::vector<FeatureExtractorFactory> out;
    for (const auto & name : names) {
      const auto factory = builtin_extractor(name);
      if (!factory) {
        throw ConfigError(fmt::format("unknown feature extractor \"{}\"", name));
      }
      out.push_back(*factory);
    }
    return out;
  };
  out.extractors = factories(config.custom_extractors);
  out.temporal_extractors = factories(config.temporal_custom_extractors);
  const auto posts = [](const std::vector<ComponentSpec> & specs) {
    std::vector<Postprocessor> out;
    for (const auto & spec : specs) {
      const auto entry = postprocessor_registry().find(spec.name);
      if (entry == postprocessor_registry().end()) {
        throw ConfigError(fmt::format("unknown postprocessor \"{}\"", spec.name));
      }
      out.push_back(entry->second.make(spec.parameters));
    }
    return out;
  };
  out.postprocessors = posts(config.postprocessors);
  out.temporal_postprocessors = posts(config.temporal_postprocessors);
  return out;
}

TransformChain make_transform_chain(const RunConfiguration & config)
{
  std::vector<ScenarioTransform> elements;
  for (const auto & spec : config.transforms) {
    const auto entry = transform_registry().find(spec.name);
    if (entry == transform_registry().end()) {
      throw ConfigError(fmt::format("unknown transform \"{}\"", spec.name));
    }
    elements.push_back(entry->second.make(spec.parameters));
  }
  return TransformChain(std::move(elements));
}

std::vector<fs::path> scenario_files(const RunConfiguration & config)
{
  std::vector<fs::path> files;
  for (const auto & input : config.inputs) {
    const auto found = list_scenario_files(input);
    files.insert(files.end(), found.begin(), found.end());
  }
  return files;
}

}  // namespace trafficgraph
