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

#include "trafficgraph/dataset.hpp"

#include "trafficgraph/errors.hpp"
#include "trafficgraph/logging.hpp"
#include "trafficgraph/scenario_io.hpp"
#include "trafficgraph/serialization.hpp"

#include "schema_json.hpp"

#include <boost/crc.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>

namespace trafficgraph
{
namespace
{

namespace fs = std::filesystem;
using Json = nlohmann::json;

constexpr const char * kManifestName = "manifest.json";
constexpr const char * kSamplesDirectory = "samples";

std::string sanitize(const std::string & id)
{
  std::string out = id;
  for (char & c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    if (!ok) {
      c = '_';
    }
  }
  return out;
}

std::string utc_now()
{
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

void write_file(const fs::path & path, std::span<const std::uint8_t> bytes)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) {
    throw DatasetError("cannot write " + path.string());
  }
}

enum class Status { pending, accepted, rejected, failed };

struct Outcome
{
  Status status{Status::pending};
  std::string scenario_id;
  std::vector<ManifestEntry> entries;
  std::string error;
};

Outcome process_scenario(
  const fs::path & file, const TransformChain & chain, const CollectorConfig & collector,
  const ExtractionConfig & extraction, const fs::path & output)
{
  Outcome outcome;
  std::vector<fs::path> written;
  try {
    const Scenario parsed = load_scenario_file(file);
    outcome.scenario_id = parsed.id;
    const std::optional<Scenario> scenario = chain(parsed);
    if (!scenario) {
      outcome.status = Status::rejected;
      return outcome;
    }
    const std::vector<TrafficGraph> samples = collect_scenario(collector, extraction, *scenario);
    for (const TrafficGraph & graph : samples) {
      const std::vector<std::uint8_t> bytes = serialize(graph);
      const std::string name =
        std::string(kSamplesDirectory) + "/" + sanitize(graph.scenario_id) + "_" + std::to_string(graph.timestep) + ".crg";
      write_file(output / name, bytes);
      written.push_back(output / name);
      outcome.entries.push_back({graph.scenario_id, graph.timestep, name, bytes.size(), crc32(bytes)});
    }
    outcome.status = Status::accepted;
  } catch (const std::exception & e) {
    for (const auto & path : written) {
      std::error_code ignored;
      fs::remove(path, ignored);
    }
    outcome.status = Status::failed;
    outcome.entries.clear();
    outcome.error = file.string() + ": " + e.what();
  }
  return outcome;
}

void prepare_output(const fs::path & output, bool overwrite)
{
  if (fs::exists(output)) {
    if (!fs::is_directory(output)) {
      throw DatasetError("output path " + output.string() + " is not a directory");
    }
    if (!fs::is_empty(output)) {
      if (!overwrite) {
        throw DatasetError("output directory " + output.string() + " is not empty (use overwrite to replace it)");
      }
      fs::remove(output / kManifestName);
      fs::remove_all(output / kSamplesDirectory);
    }
  }
  fs::create_directories(output / kSamplesDirectory);
}

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> bytes)
{
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

void validate(const CollectorConfig & config)
{
  if (config.timesteps && *config.timesteps < 1) {
    throw ArgumentError("collector timesteps must be >= 1");
  }
  if (config.stride < 1) {
    throw ArgumentError("collector stride must be >= 1");
  }
}

std::vector<TrafficGraph> collect_scenario(
  const CollectorConfig & collector, const ExtractionConfig & extraction, const Scenario & scenario)
{
  validate(collector);
  const Simulation simulation(scenario);
  Timestep limit = simulation.lifetime();
  if (collector.timesteps) {
    limit = std::min(limit, *collector.timesteps);
  }
  std::vector<TrafficGraph> samples;
  if (!collector.temporal) {
    TrafficExtractor extractor(extraction, simulation);
    for (Timestep t = 0; t < limit; t += collector.stride) {
      samples.push_back(extractor.extract(t));
    }
    return samples;
  }
  TemporalTrafficExtractor extractor(extraction, simulation);
  const auto warmup = static_cast<Timestep>(extraction.cache_size) - 1;
  for (Timestep t = 0; t < limit; ++t) {
    TrafficGraph graph = extractor.extract(t);
    if (t % collector.stride == 0 && (!collector.skip_warmup || t >= warmup)) {
      samples.push_back(std::move(graph));
    }
  }
  return samples;
}

std::string manifest_to_json(const DatasetManifest & manifest)
{
  Json samples = Json::array();
  for (const auto & e : manifest.entries) {
    samples.push_back(
      {{"scenario_id", e.scenario_id}, {"timestep", e.timestep}, {"file", e.file}, {"bytes", e.bytes},
       {"crc32", e.crc32}});
  }
  const Json document = {
    {"format", "trafficgraph-dataset"},
    {"version", manifest.version},
    {"config_fingerprint", manifest.config_fingerprint},
    {"created_at", manifest.created_at},
    {"temporal", manifest.temporal},
    {"schema", detail::schema_to_json(manifest.schema)},
    {"counts",
     {{"scenarios", manifest.counts.scenarios},
      {"accepted", manifest.counts.accepted},
      {"rejected", manifest.counts.rejected},
      {"failed", manifest.counts.failed},
      {"samples", manifest.counts.samples}}},
    {"samples", samples},
  };
  return document.dump(2) + "\n";
}

DatasetManifest manifest_from_json(const std::string & text)
{
  try {
    const Json j = Json::parse(text);
    DatasetManifest m;
    m.version = j.at("version").get<std::uint32_t>();
    if (m.version != kManifestVersion) {
      throw DatasetError("unsupported manifest version " + std::to_string(m.version));
    }
    m.config_fingerprint = j.at("config_fingerprint").get<std::string>();
    m.created_at = j.at("created_at").get<std::string>();
    m.temporal = j.at("temporal").get<bool>();
    m.schema = detail::schema_from_json(j.at("schema"));
    const Json & counts = j.at("counts");
    m.counts = {
      counts.at("scenarios").get<std::size_t>(), counts.at("accepted").get<std::size_t>(),
      counts.at("rejected").get<std::size_t>(), counts.at("failed").get<std::size_t>(),
      counts.at("samples").get<std::size_t>()};
    for (const auto & e : j.at("samples")) {
      m.entries.push_back(
        {e.at("scenario_id").get<std::string>(), e.at("timestep").get<Timestep>(), e.at("file").get<std::string>(),
         e.at("bytes").get<std::uint64_t>(), e.at("crc32").get<std::uint32_t>()});
    }
    if (m.counts.samples != m.entries.size()) {
      throw DatasetError("manifest sample count differs from its index");
    }
    return m;
  } catch (const Json::exception & e) {
    throw DatasetError(std::string("corrupt manifest: ") + e.what());
  }
}

std::vector<fs::path> list_scenario_files(const fs::path & input)
{
  if (fs::is_regular_file(input)) {
    return {input};
  }
  if (!fs::is_directory(input)) {
    throw DatasetError("scenario input " + input.string() + " does not exist");
  }
  std::vector<fs::path> files;
  for (const auto & entry : fs::directory_iterator(input)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

DatasetReport create_dataset(
  const TransformChain & chain, const CollectorConfig & collector, const ExtractionConfig & extraction,
  std::span<const fs::path> scenario_files, const fs::path & output, const DatasetOptions & options)
{
  const auto started = std::chrono::steady_clock::now();
  validate(collector);
  validate(extraction, collector.temporal);
  const ChannelSchema schema = extraction_schema(extraction, collector.temporal);
  prepare_output(output, options.overwrite);

  std::vector<Outcome> outcomes(scenario_files.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (;;) {
      if (stop.load()) {
        return;
      }
      const std::size_t i = next.fetch_add(1);
      if (i >= scenario_files.size()) {
        return;
      }
      outcomes[i] = process_scenario(scenario_files[i], chain, collector, extraction, output);
      const Outcome & o = outcomes[i];
      if (o.status == Status::failed && options.policy == ErrorPolicy::abort_run) {
        stop.store(true);
      }
      if (options.progress) {
        std::string line;
        switch (o.status) {
          case Status::accepted:
            line = fmt::format("{}: accepted, {} samples", o.scenario_id, o.entries.size());
            break;
          case Status::rejected:
            line = fmt::format("{}: rejected by the transform chain", o.scenario_id);
            break;
          default:
            line = fmt::format("failed: {}", o.error);
            break;
        }
        const std::lock_guard lock(progress_mutex);
        options.progress(line);
      }
    }
  };
  const std::size_t worker_count =
    std::max<std::size_t>(1, std::min(options.workers, std::max<std::size_t>(scenario_files.size(), 1)));
  std::vector<std::thread> threads;
  for (std::size_t w = 1; w < worker_count; ++w) {
    threads.emplace_back(worker);
  }
  worker();
  for (auto & thread : threads) {
    thread.join();
  }

  DatasetReport report;
  DatasetManifest & manifest = report.manifest;
  manifest.config_fingerprint = options.config_fingerprint;
  manifest.temporal = collector.temporal;
  manifest.schema = schema;
  manifest.counts.scenarios = scenario_files.size();
  std::map<std::string, std::size_t> owner;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const Outcome & o = outcomes[i];
    switch (o.status) {
      case Status::failed:
        if (options.policy == ErrorPolicy::abort_run) {
          throw DatasetError("scenario failed: " + o.error);
        }
        ++manifest.counts.failed;
        report.errors.push_back(o.error);
        log::warn("skipping scenario " + o.error);
        break;
      case Status::rejected:
        ++manifest.counts.rejected;
        break;
      case Status::accepted: {
        const auto [it, inserted] = owner.emplace(sanitize(o.scenario_id), i);
        if (!inserted) {
          throw DatasetError(
            "scenario id '" + o.scenario_id + "' appears in both " + scenario_files[it->second].string() +
            " and " + scenario_files[i].string());
        }
        ++manifest.counts.accepted;
        manifest.entries.insert(manifest.entries.end(), o.entries.begin(), o.entries.end());
        break;
      }
      case Status::pending:
        // Only reachable after an abort, which has already thrown above.
        break;
    }
  }
  std::sort(manifest.entries.begin(), manifest.entries.end(), [](const auto & a, const auto & b) {
    return std::tie(a.scenario_id, a.timestep) < std::tie(b.scenario_id, b.timestep);
  });
  manifest.counts.samples = manifest.entries.size();
  manifest.created_at = utc_now();

  const std::string text = manifest_to_json(manifest);
  const fs::path temporary = output / (std::string(kManifestName) + ".tmp");
  write_file(temporary, std::span(reinterpret_cast<const std::uint8_t *>(text.data()), text.size()));
  fs::rename(temporary, output / kManifestName);

  report.wall_seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

GraphDataset GraphDataset::open(const fs::path & directory)
{
  const fs::path path = directory / kManifestName;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DatasetError("no dataset manifest at " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  GraphDataset dataset;
  dataset.directory_ = directory;
  dataset.manifest_ = manifest_from_json(text.str());
  return dataset;
}

std::vector<std::uint8_t> GraphDataset::read_bytes(std::size_t index) const
{
  if (index >= size()) {
    throw std::out_of_range(
      "sample index " + std::to_string(index) + " out of range for " + std::to_string(size()) + " samples");
  }
  const ManifestEntry & entry = manifest_.entries[index];
  std::vector<std::uint8_t> bytes = read_binary_file(directory_ / entry.file);
  if (bytes.size() != entry.bytes) {
    throw DatasetError(
      entry.file + ": size " + std::to_string(bytes.size()) + " differs from manifest " + std::to_string(entry.bytes));
  }
  if (crc32(bytes) != entry.crc32) {
    throw DatasetError(entry.file + ": checksum mismatch");
  }
  return bytes;
}

TrafficGraph GraphDataset::get(std::size_t index) const
{
  const std::vector<std::uint8_t> bytes = read_bytes(index);
  try {
    return deserialize(bytes);
  } catch (const FormatError & e) {
    throw DatasetError(manifest_.entries[index].file + ": " + e.what());
  }
}

}  // namespace trafficgraph
