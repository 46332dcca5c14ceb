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

#ifndef TRAFFICGRAPH__SERIALIZATION_HPP_
#define TRAFFICGRAPH__SERIALIZATION_HPP_

#include "trafficgraph/traffic_graph.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace trafficgraph
{

inline constexpr char kCrgMagic[4] = {'C', 'R', 'G', '1'};
inline constexpr std::uint32_t kCrgVersion = 1;
inline constexpr std::size_t kCrgAlignment = 8;

/**
 * @brief Encode a graph as a ".crg" sample.
 *
 * Layout: "CRG1" | u32 version | u64 header length | JSON header (space-padded to a multiple
 * of 8 bytes) | payload section. All integers little-endian. The header lists every array as
 * {store, name, dtype, shape, offset, length} with offsets relative to the payload section;
 * arrays are row-major, 8-byte aligned and separated by zero padding.
 *
 * Node stores contribute "ids" (i64 [n]), "timesteps" (vehicles, i64 [n]), "x" (f32 [n, D])
 * and one i64 [n] array per integer metadata channel. Edge stores contribute "edge_index"
 * (i64 [2, E]) and "x" (f32 [E, D]). Globals are f32 arrays in store "globals".
 */
std::vector<std::uint8_t> serialize(const TrafficGraph & graph);

/// @throws FormatError on a bad magic, unsupported version, truncated data or inconsistent
///         descriptors.
TrafficGraph deserialize(std::span<const std::uint8_t> bytes);

void write_graph_file(const std::filesystem::path & path, const TrafficGraph & graph);
TrafficGraph read_graph_file(const std::filesystem::path & path);

/// Reads a whole file into memory. @throws DatasetError when unreadable.
std::vector<std::uint8_t> read_binary_file(const std::filesystem::path & path);

}  // namespace trafficgraph

#endif  // TRAFFICGRAPH__SERIALIZATION_HPP_
