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

#ifndef TRAFFICGRAPH__DELAUNAY_HPP_
#define TRAFFICGRAPH__DELAUNAY_HPP_

#include "trafficgraph/geometry.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace trafficgraph
{

/// Sign of the orientation of (a, b, c): +1 counter-clockwise, -1 clockwise, 0 collinear.
/// Exact for all finite double inputs.
int orient2d_sign(const Point2 & a, const Point2 & b, const Point2 & c);

/// Sign of the in-circle determinant: +1 if d lies strictly inside the circle through the
/// counter-clockwise triangle (a, b, c), -1 outside, 0 cocircular. Exact.
int incircle_sign(const Point2 & a, const Point2 & b, const Point2 & c, const Point2 & d);

using IndexPair = std::pair<std::size_t, std::size_t>;

/**
 * @brief Edges of the Delaunay triangulation of `points` as sorted undirected pairs (i < j).
 *
 * Cocircular configurations are resolved by symbolic perturbation of the lifted coordinate,
 * ranked by lexicographic (x, y) order, so the edge set does not depend on input order.
 * Duplicate points are merged for the triangulation; every alias of a vertex inherits its
 * edges and aliases are connected to each other. When all distinct points are collinear the
 * result is the path through them in order along the line. Two points yield their pair.
 */
std::vector<IndexPair> delaunay_neighbors(std::span<const Point2> points);

}  // namespace trafficgraph

#endif  // TRAFFICGRAPH__DELAUNAY_HPP_
