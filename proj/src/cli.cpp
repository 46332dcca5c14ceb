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

#include "trafficgraph/cli.hpp"

#include "trafficgraph/dataset.hpp"
#include "trafficgraph/errors.hpp"
#include "trafficgraph/features.hpp"
#include "trafficgraph/logging.hpp"
#include "trafficgraph/run_config.hpp"
#include "trafficgraph/serialization.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace trafficgraph
{
namespace
{

namespace fs = std::filesystem;
using Json = nlohmann::json;

void add_statistics(
  std::vector<ChannelStatistics> & out, const std::string & store, const ChannelList & channels,
  const FeatureMatrix & features)
{
  std::size_t column = 0;
  for (const ChannelSpec & channel : channels) {
    ChannelStatistics s{store, channel.name, 0, 0.0, 0.0, 0.0};
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < features.rows(); ++r) {
      for (std::size_t c = column; c < column + channel.width; ++c) {
        const double v = features(r, static_cast<Eigen::Index>(c));
        if (std::isnan(v)) {
          continue;
        }
        ++s.count;
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (s.count == 0) {
      s.min = s.max = s.mean = std::numeric_limits<double>::quiet_NaN();
    } else {
      s.min = lo;
      s.max = hi;
      s.mean = sum / static_cast<double>(s.count);
    }
    out.push_back(s);
    column += channel.width;
  }
}

std::string describe_counts(const DatasetCounts & c)
{
  return fmt::format(
    "scenarios {}, accepted {}, rejected {}, failed {}, samples {}", c.scenarios, c.accepted, c.rejected,
    c.failed, c.samples);
}

int cmd_extract(
  const std::string & config_path, const std::string & out_override, std::optional<std::size_t> workers,
  bool overwrite, bool json, std::ostream & out, std::ostream & err)
{
  RunConfiguration config = load_run_configuration(config_path);
  if (!out_override.empty()) {
    config.output = out_override;
  }
  if (workers) {
    if (*workers < 1) {
      throw ConfigError("invalid configuration:\n  workers: must be >= 1");
    }
    config.workers = *workers;
  }
  config.overwrite = config.overwrite || overwrite;
  if (config.output.empty()) {
    throw ConfigError("invalid configuration:\n  output: required (set it in the file or pass --out)");
  }

  const std::vector<fs::path> files = scenario_files(config);
  DatasetOptions options;
  options.workers = config.workers;
  options.overwrite = config.overwrite;
  options.policy = config.error_policy;
  options.config_fingerprint = config_fingerprint(config);
  options.progress = [&err](const std::string & line) { err << line << '\n'; };

  const DatasetReport report = create_dataset(
    make_transform_chain(config), config.collector, make_extraction_config(config), files, config.output,
    options);
  const DatasetCounts & c = report.manifest.counts;
  if (json) {
    Json errors = report.errors;
    const Json summary = {
      {"output", config.output.generic_string()},
      {"config_fingerprint", report.manifest.config_fingerprint},
      {"scenarios", c.scenarios},
      {"accepted", c.accepted},
      {"rejected", c.rejected},
      {"failed", c.failed},
      {"samples", c.samples},
      {"wall_seconds", report.wall_seconds},
      {"errors", errors},
    };
    out << summary.dump(2) << '\n';
  } else {
    out << describe_counts(c) << fmt::format(", wall time {:.3f} s\n", report.wall_seconds);
  }
  return 0;
}

int cmd_inspect(const std::string & path, std::size_t index, bool stats, std::ostream & out)
{
  const GraphDataset dataset = GraphDataset::open(path);
  out << dataset.size() << " samples\n";
  if (dataset.size() == 0) {
    return 0;
  }
  const TrafficGraph graph = dataset.get(index);
  out << fmt::format(
    "sample {}: scenario {} timestep {} ({}", index, graph.scenario_id, graph.timestep,
    graph.kind == GraphKind::temporal ? "temporal" : "single");
  if (graph.kind == GraphKind::temporal) {
    out << fmt::format(", window {}..{}", graph.window_begin, graph.window_end);
  }
  out << ")\n";
  out << fmt::format("  nodes v: {}\n  nodes l: {}\n", graph.vehicles.size(), graph.lanelets.size());
  for (const auto & [relation, store] : graph.edges) {
    out << fmt::format("  edges {}: {}\n", to_string(relation), store.size());
  }
  const auto print_channels = [&out](const std::string & store, const ChannelList & channels) {
    std::string line = "  schema " + store + ":";
    for (const auto & c : channels) {
      line += fmt::format(" {}[{}]", c.name, c.width);
    }
    out << line << '\n';
  };
  print_channels("v", graph.vehicles.channels);
  print_channels("l", graph.lanelets.channels);
  for (const auto & [relation, store] : graph.edges) {
    print_channels(std::string(to_string(relation)), store.channels);
  }
  for (const auto & [name, values] : graph.globals) {
    out << fmt::format("  global {}: {}\n", name, fmt::join(values, " "));
  }
  if (stats) {
    for (const auto & s : channel_statistics(graph)) {
      if (s.count == 0) {
        out << fmt::format("  stats {}.{}: no values\n", s.store, s.channel);
      } else {
        out << fmt::format(
          "  stats {}.{}: min {:.6g} max {:.6g} mean {:.6g} (n={})\n", s.store, s.channel, s.min, s.max, s.mean,
          s.count);
      }
    }
  }
  return 0;
}

int cmd_validate(const std::string & path, std::ostream & out)
{
  const std::vector<std::string> violations = validate_dataset(path);
  for (const auto & v : violations) {
    out << v << '\n';
  }
  out << violations.size() << " violations\n";
  return violations.empty() ? 0 : 1;
}

}  // namespace

std::vector<ChannelStatistics> channel_statistics(const TrafficGraph & graph)
{
  std::vector<ChannelStatistics> out;
  add_statistics(out, "v", graph.vehicles.channels, graph.vehicles.features);
  add_statistics(out, "l", graph.lanelets.channels, graph.lanelets.features);
  for (const auto & [relation, store] : graph.edges) {
    add_statistics(out, std::string(to_string(relation)), store.channels, store.features);
  }
  return out;
}

std::vector<std::string> validate_dataset(const fs::path & directory)
{
  std::vector<std::string> violations;
  std::optional<GraphDataset> dataset;
  try {
    dataset = GraphDataset::open(directory);
  } catch (const Error & e) {
    violations.push_back(e.what());
    return violations;
  }
  for (std::size_t i = 0; i < dataset->size(); ++i) {
    const ManifestEntry & entry = dataset->manifest().entries[i];
    const auto report = [&](const std::string & message) { violations.push_back(entry.file + ": " + message); };
    TrafficGraph graph;
    try {
      graph = deserialize(dataset->read_bytes(i));
    } catch (const Error & e) {
      const std::string message = e.what();
      violations.push_back(message.rfind(entry.file, 0) == 0 ? message : entry.file + ": " + message);
      continue;
    }
    if (graph.scenario_id != entry.scenario_id || graph.timestep != entry.timestep) {
      report(fmt::format(
        "holds scenario {} timestep {} but the manifest says scenario {} timestep {}", graph.scenario_id,
        graph.timestep, entry.scenario_id, entry.timestep));
    }
    if ((graph.kind == GraphKind::temporal) != dataset->manifest().temporal) {
      report("graph kind differs from the manifest");
    }
    if (graph.schema() != dataset->schema()) {
      report("channel schema differs from the manifest");
    }
    for (const auto & v : validate_graph(graph)) {
      report(v);
    }
    for (const auto & v : validate_features(graph)) {
      report(v);
    }
  }
  return violations;
}

int run_cli(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
  log::configure_from_environment();

  CLI::App app{"Heterogeneous traffic graph extraction from CommonRoad scenarios", "trafficgraph"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::size_t> workers;
  bool overwrite = false;
  bool json = false;
  auto * extract = app.add_subcommand("extract", "Build a dataset from a run configuration");
  extract->add_option("--config", config_path, "Run configuration (JSON)")->required();
  extract->add_option("--out", out_dir, "Output directory, overrides the configuration");
  extract->add_option("--workers", workers, "Worker threads, overrides the configuration");
  extract->add_flag("--overwrite", overwrite, "Replace an existing non-empty output directory");
  extract->add_flag("--json", json, "Print a JSON summary on standard output");

  std::string dataset_path;
  std::size_t index = 0;
  bool stats = false;
  auto * inspect = app.add_subcommand("inspect", "Summarize one sample of a dataset");
  inspect->add_option("dataset", dataset_path, "Dataset directory")->required();
  inspect->add_option("--index", index, "Sample index");
  inspect->add_flag("--stats", stats, "Print min/max/mean per channel");

  auto * validate = app.add_subcommand("validate", "Check checksums and invariants of every sample");
  validate->add_option("dataset", dataset_path, "Dataset directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (extract->parsed()) {
      return cmd_extract(config_path, out_dir, workers, overwrite, json, out, err);
    }
    if (inspect->parsed()) {
      return cmd_inspect(dataset_path, index, stats, out);
    }
    return cmd_validate(dataset_path, out);
  } catch (const std::exception & e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace trafficgraph
