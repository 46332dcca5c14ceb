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

#ifndef TRAFFICGRAPH__GEOMETRY_HPP_
#define TRAFFICGRAPH__GEOMETRY_HPP_

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace trafficgraph
{

using Point2 = Eigen::Vector2d;
using Vector2 = Eigen::Vector2d;

/// Internal positional tolerance [m].
inline constexpr double kPositionTolerance = 1e-9;

/// Wrap an angle into (-pi, pi]. An input of exactly -pi maps to +pi.
double wrap_angle(double angle);

/// z-component of the 2-D cross product.
inline double cross(const Vector2 & a, const Vector2 & b) { return a.x() * b.y() - a.y() * b.x(); }

/**
 * @brief Ordered sequence of at least two 2-D points with distinct consecutive vertices.
 *
 * Cumulative arclength is computed on construction, so arclength queries are O(log n).
 */
class Polyline
{
public:
  /// @throws GeometryError if fewer than two points or two consecutive points coincide.
  explicit Polyline(std::vector<Point2> points);

  const std::vector<Point2> & points() const noexcept { return points_; }
  const Point2 & operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const noexcept { return points_.size(); }
  const Point2 & front() const { return points_.front(); }
  const Point2 & back() const { return points_.back(); }

  /// Cumulative arclength at each vertex; first entry 0, last entry length().
  const std::vector<double> & arclengths() const noexcept { return arclengths_; }
  double length() const noexcept { return arclengths_.back(); }

  bool operator==(const Polyline & other) const { return points_ == other.points_; }

private:
  std::vector<Point2> points_;
  std::vector<double> arclengths_;
};

/// Sum of Euclidean segment lengths.
double polyline_length(const Polyline & polyline);

struct ArclengthProjection
{
  double arclength{0.0};
  Point2 foot_point{Point2::Zero()};
  double tangent_orientation{0.0};
  /// Distance to the foot point, positive when the query is left of the tangent.
  double signed_lateral{0.0};
};

/// Closest point on the polyline; ties resolve to the smallest arclength.
ArclengthProjection project_point(const Polyline & polyline, const Point2 & query);

struct PolylinePose
{
  Point2 position{Point2::Zero()};
  double orientation{0.0};
};

/// Position and segment direction at arclength `s`, clamped to [0, length].
PolylinePose point_at_arclength(const Polyline & polyline, double s);

/// Points of the polyline between arclengths `s_begin < s_end`, both ends interpolated.
Polyline sub_polyline(const Polyline & polyline, double s_begin, double s_end);

/// Resample to `count` points at uniform arclength spacing (first and last vertex kept).
Polyline resample_uniform(const Polyline & polyline, std::size_t count);

/// Resample at normalized arclength fractions in [0, 1] (must be strictly increasing).
Polyline resample_at_fractions(const Polyline & polyline, std::span<const double> fractions);

/// Rigid 2-D frame. to_local(to_global(q)) == q up to rounding.
struct LocalFrame
{
  Point2 origin{Point2::Zero()};
  double orientation{0.0};

  Point2 to_local(const Point2 & point) const;
  Point2 to_global(const Point2 & point) const;
  /// Rotate a free vector (velocity, acceleration) into the frame.
  Vector2 rotate_to_local(const Vector2 & vector) const;
};

Point2 to_local(const LocalFrame & frame, const Point2 & point);
Point2 from_local(const LocalFrame & frame, const Point2 & point);

struct PolylineIntersection
{
  double arclength_a{0.0};
  double arclength_b{0.0};
  Point2 point{Point2::Zero()};
};

/**
 * @brief All crossings between two polylines, sorted by arclength on `a`.
 *
 * Touching segments count as crossing. A collinear overlap between two segments is reported
 * once, at the midpoint of the overlap. Hits closer than kPositionTolerance on both polylines
 * are merged.
 */
std::vector<PolylineIntersection> polyline_intersection(const Polyline & a, const Polyline & b);

/// Even-odd containment test on an implicitly closed ring; boundary points are inside.
bool point_in_polygon(const Point2 & query, std::span<const Point2> ring);

struct OrientedRectangle
{
  Point2 center{Point2::Zero()};
  double orientation{0.0};
  double length{0.0};
  double width{0.0};

  /// Corners in counter-clockwise order.
  std::vector<Point2> corners() const;
};

/// True iff the rectangle and the ring share any point (crossing or containment either way).
bool rectangle_polygon_overlap(const OrientedRectangle & rectangle, std::span<const Point2> ring);

/// Segment/segment distance helper used by containment tests.
double point_segment_distance(const Point2 & query, const Point2 & a, const Point2 & b);

}  // namespace trafficgraph

#endif  // TRAFFICGRAPH__GEOMETRY_HPP_
