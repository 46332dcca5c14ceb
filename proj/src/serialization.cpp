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

#include "trafficgraph/serialization.hpp"

#include "trafficgraph/errors.hpp"

#include "schema_json.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <utility>

namespace trafficgraph
{
namespace
{

static_assert(std::endian::native == std::endian::little, "the .crg writer assumes a little-endian host");

using Json = nlohmann::json;
using detail::channels_from_json;
using detail::channels_to_json;

constexpr std::size_t kPreambleSize = 16;

std::size_t padded(std::size_t n) { return (n + kCrgAlignment - 1) / kCrgAlignment * kCrgAlignment; }

class PayloadWriter
{
public:
  void add(
    const std::string & store, const std::string & name, const char * dtype,
    std::vector<std::size_t> shape, const void * data, std::size_t bytes)
  {
    payload_.resize(padded(payload_.size()), 0);
    const std::size_t offset = payload_.size();
    const auto * begin = static_cast<const std::uint8_t *>(data);
    if (bytes > 0) {
      payload_.insert(payload_.end(), begin, begin + bytes);
    }
    arrays_.push_back(
      {{"store", store}, {"name", name}, {"dtype", dtype}, {"shape", shape}, {"offset", offset},
       {"length", bytes}});
  }

  void add_i64(const std::string & store, const std::string & name, const std::vector<std::int64_t> & v)
  {
    add(store, name, "i64", {v.size()}, v.data(), v.size() * sizeof(std::int64_t));
  }

  void add_f32(const std::string & store, const std::string & name, const FeatureMatrix & m)
  {
    add(
      store, name, "f32", {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
      m.data(), static_cast<std::size_t>(m.size()) * sizeof(float));
  }

  Json & arrays() { return arrays_; }
  std::vector<std::uint8_t> & payload() { return payload_; }

private:
  Json arrays_ = Json::array();
  std::vector<std::uint8_t> payload_;
};

struct ArrayView
{
  std::string dtype;
  std::vector<std::size_t> shape;
  const std::uint8_t * data{nullptr};
  std::size_t length{0};
};

std::size_t element_count(const std::vector<std::size_t> & shape)
{
  std::size_t n = 1;
  for (std::size_t d : shape) {
    n *= d;
  }
  return n;
}

const ArrayView & find_array(
  const std::map<std::pair<std::string, std::string>, ArrayView> & arrays, const std::string & store,
  const std::string & name)
{
  const auto it = arrays.find({store, name});
  if (it == arrays.end()) {
    throw FormatError("missing array '" + name + "' for store '" + store + "'");
  }
  return it->second;
}

std::vector<std::int64_t> read_i64(const ArrayView & a, std::size_t expected, const std::string & what)
{
  if (a.dtype != "i64" || element_count(a.shape) != expected) {
    throw FormatError("array '" + what + "' has unexpected dtype or shape");
  }
  std::vector<std::int64_t> out(expected);
  if (expected > 0) {
    std::memcpy(out.data(), a.data, expected * sizeof(std::int64_t));
  }
  return out;
}

FeatureMatrix read_f32(const ArrayView & a, std::size_t rows, std::size_t cols, const std::string & what)
{
  if (a.dtype != "f32" || a.shape.size() != 2 || a.shape[0] != rows || a.shape[1] != cols) {
    throw FormatError("array '" + what + "' has unexpected dtype or shape");
  }
  FeatureMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  if (rows * cols > 0) {
    std::memcpy(out.data(), a.data, rows * cols * sizeof(float));
  }
  return out;
}

void write_node_store(PayloadWriter & writer, const NodeStore & store)
{
  const std::string name(to_string(store.type));
  writer.add_i64(name, "ids", store.ids);
  if (store.type == NodeType::vehicle) {
    writer.add_i64(name, "timesteps", store.timesteps);
  }
  writer.add_f32(name, "x", store.features);
  for (const auto & [channel, values] : store.int_channels) {
    writer.add_i64(name, channel, values);
  }
}

NodeStore read_node_store(
  const std::map<std::pair<std::string, std::string>, ArrayView> & arrays, NodeType type,
  const ChannelList & channels)
{
  const std::string name(to_string(type));
  NodeStore store;
  store.type = type;
  store.channels = channels;
  const ArrayView & ids = find_array(arrays, name, "ids");
  if (ids.shape.size() != 1) {
    throw FormatError("array 'ids' of store '" + name + "' must be one-dimensional");
  }
  const std::size_t n = ids.shape[0];
  store.ids = read_i64(ids, n, name + ".ids");
  if (type == NodeType::vehicle) {
    store.timesteps = read_i64(find_array(arrays, name, "timesteps"), n, name + ".timesteps");
  }
  store.features = read_f32(find_array(arrays, name, "x"), n, total_width(channels), name + ".x");
  for (const auto & [key, view] : arrays) {
    if (key.first == name && key.second != "ids" && key.second != "timesteps" && key.second != "x") {
      store.int_channels[key.second] = read_i64(view, n, name + "." + key.second);
    }
  }
  return store;
}

}  // namespace

std::vector<std::uint8_t> serialize(const TrafficGraph & graph)
{
  PayloadWriter writer;
  write_node_store(writer, graph.vehicles);
  write_node_store(writer, graph.lanelets);

  Json schema = Json::object();
  schema["v"] = channels_to_json(graph.vehicles.channels);
  schema["l"] = channels_to_json(graph.lanelets.channels);
  Json relations = Json::array();
  for (const auto & [relation, store] : graph.edges) {
    const std::string name(to_string(relation));
    relations.push_back(name);
    schema[name] = channels_to_json(store.channels);
    std::vector<std::int64_t> index(store.sources);
    index.insert(index.end(), store.targets.begin(), store.targets.end());
    writer.add(
      name, "edge_index", "i64", {2, store.size()}, index.data(), index.size() * sizeof(std::int64_t));
    writer.add_f32(name, "x", store.features);
  }
  for (const auto & [key, values] : graph.globals) {
    writer.add("globals", key, "f32", {values.size()}, values.data(), values.size() * sizeof(float));
  }
  std::vector<std::uint8_t> & payload = writer.payload();
  payload.resize(padded(payload.size()), 0);

  Json header = {
    {"format", "crg"},
    {"version", kCrgVersion},
    {"scenario_id", graph.scenario_id},
    {"timestep", graph.timestep},
    {"window", {graph.window_begin, graph.window_end}},
    {"kind", graph.kind == GraphKind::temporal ? "temporal" : "single"},
    {"dt", graph.dt},
    {"relations", relations},
    {"schema", schema},
    {"arrays", writer.arrays()},
    {"payload_length", payload.size()},
  };
  std::string text = header.dump();
  text.resize(padded(text.size()), ' ');

  std::vector<std::uint8_t> out(kPreambleSize);
  std::memcpy(out.data(), kCrgMagic, 4);
  const std::uint32_t version = kCrgVersion;
  const std::uint64_t header_length = text.size();
  std::memcpy(out.data() + 4, &version, 4);
  std::memcpy(out.data() + 8, &header_length, 8);
  out.insert(out.end(), text.begin(), text.end());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

TrafficGraph deserialize(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() < kPreambleSize || std::memcmp(bytes.data(), kCrgMagic, 4) != 0) {
    throw FormatError("not a .crg sample (bad magic)");
  }
  std::uint32_t version = 0;
  std::uint64_t header_length = 0;
  std::memcpy(&version, bytes.data() + 4, 4);
  std::memcpy(&header_length, bytes.data() + 8, 8);
  if (version != kCrgVersion) {
    throw FormatError("unsupported .crg version " + std::to_string(version));
  }
  if (header_length > bytes.size() - kPreambleSize) {
    throw FormatError("truncated .crg header");
  }
  Json header;
  try {
    const auto * begin = reinterpret_cast<const char *>(bytes.data() + kPreambleSize);
    header = Json::parse(begin, begin + header_length);
  } catch (const Json::exception & e) {
    throw FormatError(std::string("malformed .crg header: ") + e.what());
  }
  const std::size_t payload_begin = kPreambleSize + header_length;
  const std::size_t payload_size = bytes.size() - payload_begin;

  try {
    if (header.at("payload_length").get<std::size_t>() != payload_size) {
      throw FormatError("payload length differs from header");
    }
    std::map<std::pair<std::string, std::string>, ArrayView> arrays;
    for (const auto & a : header.at("arrays")) {
      ArrayView view;
      view.dtype = a.at("dtype").get<std::string>();
      view.shape = a.at("shape").get<std::vector<std::size_t>>();
      const auto offset = a.at("offset").get<std::size_t>();
      view.length = a.at("length").get<std::size_t>();
      const std::size_t item = view.dtype == "f32" ? 4 : view.dtype == "i64" ? 8 : 0;
      if (item == 0) {
        throw FormatError("unknown dtype '" + view.dtype + "'");
      }
      if (
        offset % kCrgAlignment != 0 || offset > payload_size || view.length > payload_size - offset ||
        view.length != element_count(view.shape) * item) {
        throw FormatError("array descriptor out of bounds or inconsistent");
      }
      view.data = bytes.data() + payload_begin + offset;
      arrays[{a.at("store").get<std::string>(), a.at("name").get<std::string>()}] = std::move(view);
    }

    const Json & schema = header.at("schema");
    TrafficGraph graph;
    graph.scenario_id = header.at("scenario_id").get<std::string>();
    graph.timestep = header.at("timestep").get<Timestep>();
    graph.window_begin = header.at("window").at(0).get<Timestep>();
    graph.window_end = header.at("window").at(1).get<Timestep>();
    graph.kind = header.at("kind").get<std::string>() == "temporal" ? GraphKind::temporal
                                                                     : GraphKind::single;
    graph.dt = header.at("dt").get<double>();
    graph.vehicles = read_node_store(arrays, NodeType::vehicle, channels_from_json(schema.at("v")));
    graph.lanelets = read_node_store(arrays, NodeType::lanelet, channels_from_json(schema.at("l")));
    for (const auto & name_json : header.at("relations")) {
      const auto name = name_json.get<std::string>();
      const auto relation = relation_from_string(name);
      if (!relation) {
        throw FormatError("unknown relation '" + name + "'");
      }
      EdgeStore store;
      store.relation = *relation;
      store.channels = channels_from_json(schema.at(name));
      const ArrayView & index = find_array(arrays, name, "edge_index");
      if (index.shape.size() != 2 || index.shape[0] != 2) {
        throw FormatError("edge_index of '" + name + "' must have shape [2, E]");
      }
      const std::size_t e = index.shape[1];
      std::vector<std::int64_t> flat = read_i64(index, 2 * e, name + ".edge_index");
      store.sources.assign(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(e));
      store.targets.assign(flat.begin() + static_cast<std::ptrdiff_t>(e), flat.end());
      store.features = read_f32(find_array(arrays, name, "x"), e, total_width(store.channels), name + ".x");
      graph.edges[*relation] = std::move(store);
    }
    for (const auto & [key, view] : arrays) {
      if (key.first != "globals") {
        continue;
      }
      if (view.dtype != "f32" || view.shape.size() != 1) {
        throw FormatError("global '" + key.second + "' must be a one-dimensional f32 array");
      }
      std::vector<float> values(view.shape[0]);
      if (!values.empty()) {
        std::memcpy(values.data(), view.data, view.length);
      }
      graph.globals[key.second] = std::move(values);
    }
    return graph;
  } catch (const Json::exception & e) {
    throw FormatError(std::string("inconsistent .crg header: ") + e.what());
  }
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DatasetError("cannot open " + path.string());
  }
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_graph_file(const std::filesystem::path & path, const TrafficGraph & graph)
{
  const std::vector<std::uint8_t> bytes = serialize(graph);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw DatasetError("cannot write " + path.string());
  }
}

TrafficGraph read_graph_file(const std::filesystem::path & path)
{
  const std::vector<std::uint8_t> bytes = read_binary_file(path);
  try {
    return deserialize(bytes);
  } catch (const FormatError & e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace trafficgraph
