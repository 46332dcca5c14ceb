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

#ifndef TRAFFICGRAPH__DATASET_HPP_
#define TRAFFICGRAPH__DATASET_HPP_

#include "trafficgraph/extractor.hpp"
#include "trafficgraph/pipeline.hpp"
#include "trafficgraph/traffic_graph.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trafficgraph
{

struct CollectorConfig
{
  /// Number of timesteps to cover from t = 0; nullopt covers the whole lifetime.
  std::optional<Timestep> timesteps;
  Timestep stride{1};
  bool temporal{false};
  /// Temporal only: drop samples whose window is shorter than the cache size.
  bool skip_warmup{false};

  bool operator==(const CollectorConfig &) const = default;
};

/// @throws ArgumentError if timesteps < 1 or stride < 1.
void validate(const CollectorConfig & config);

/**
 * @brief Chronological samples of one scenario.
 *
 * Samples are taken at t = 0, stride, 2 stride, ... below min(timesteps, lifetime). Temporal
 * collection feeds every timestep through the temporal extractor so windows stay contiguous and
 * emits only at the sampling times.
 */
std::vector<TrafficGraph> collect_scenario(
  const CollectorConfig & collector, const ExtractionConfig & extraction, const Scenario & scenario);

enum class ErrorPolicy { abort_run, skip_scenario };

inline constexpr std::uint32_t kManifestVersion = 1;

struct ManifestEntry
{
  std::string scenario_id;
  Timestep timestep{0};
  /// Path relative to the dataset directory.
  std::string file;
  std::uint64_t bytes{0};
  std::uint32_t crc32{0};

  bool operator==(const ManifestEntry &) const = default;
};

struct DatasetCounts
{
  std::size_t scenarios{0};
  std::size_t accepted{0};
  std::size_t rejected{0};
  std::size_t failed{0};
  std::size_t samples{0};

  bool operator==(const DatasetCounts &) const = default;
};

struct DatasetManifest
{
  std::uint32_t version{kManifestVersion};
  std::string config_fingerprint;
  std::string created_at;
  bool temporal{false};
  ChannelSchema schema;
  DatasetCounts counts;
  std::vector<ManifestEntry> entries;
};

std::string manifest_to_json(const DatasetManifest & manifest);
/// @throws DatasetError on malformed documents or counts that disagree with the index.
DatasetManifest manifest_from_json(const std::string & text);

struct DatasetOptions
{
  std::size_t workers{1};
  bool overwrite{false};
  ErrorPolicy policy{ErrorPolicy::abort_run};
  std::string config_fingerprint;
  /// Per-scenario progress lines; called from worker threads under a lock.
  std::function<void(const std::string &)> progress;
};

struct DatasetReport
{
  DatasetManifest manifest;
  /// One message per scenario skipped because of an error.
  std::vector<std::string> errors;
  double wall_seconds{0.0};
};

/// Scenario files of a path: the file itself, or the sorted *.xml files of a directory.
std::vector<std::filesystem::path> list_scenario_files(const std::filesystem::path & input);

/**
 * @brief Build a dataset directory: samples/<scenario_id>_<t>.crg plus manifest.json.
 *
 * Scenarios run on a bounded worker pool. The manifest is written last through a temporary
 * file and a rename, so its presence marks a complete dataset. Entries are sorted by
 * (scenario id, timestep).
 * @throws DatasetError if the output directory is non-empty without `overwrite`, on duplicate
 *         scenario ids, or on the first scenario failure under ErrorPolicy::abort_run.
 */
DatasetReport create_dataset(
  const TransformChain & chain, const CollectorConfig & collector, const ExtractionConfig & extraction,
  std::span<const std::filesystem::path> scenario_files, const std::filesystem::path & output,
  const DatasetOptions & options);

/// Read-only dataset handle. Samples load lazily; concurrent get() calls are safe.
class GraphDataset
{
public:
  /// @throws DatasetError if the manifest is missing or corrupt.
  static GraphDataset open(const std::filesystem::path & directory);

  std::size_t size() const noexcept { return manifest_.entries.size(); }
  const DatasetManifest & manifest() const noexcept { return manifest_; }
  const ChannelSchema & schema() const noexcept { return manifest_.schema; }
  const std::filesystem::path & directory() const noexcept { return directory_; }

  /// Raw sample bytes after the checksum check.
  /// @throws std::out_of_range on a bad index, DatasetError naming the file on a checksum or
  ///         size mismatch.
  std::vector<std::uint8_t> read_bytes(std::size_t index) const;

  TrafficGraph get(std::size_t index) const;

private:
  std::filesystem::path directory_;
  DatasetManifest manifest_;
};

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

}  // namespace trafficgraph

#endif  // TRAFFICGRAPH__DATASET_HPP_
