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

#include "trafficgraph/geometry.hpp"

#include "trafficgraph/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

namespace trafficgraph
{
namespace
{

constexpr double kParameterTolerance = 1e-12;

struct BoundingBox
{
  Point2 min{Point2::Constant(std::numeric_limits<double>::infinity())};
  Point2 max{Point2::Constant(-std::numeric_limits<double>::infinity())};

  void extend(const Point2 & p)
  {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }

  bool overlaps(const BoundingBox & other, double margin) const
  {
    return min.x() <= other.max.x() + margin && other.min.x() <= max.x() + margin &&
           min.y() <= other.max.y() + margin && other.min.y() <= max.y() + margin;
  }
};

BoundingBox bounding_box(std::span<const Point2> points)
{
  BoundingBox box;
  for (const auto & p : points) {
    box.extend(p);
  }
  return box;
}

// Ring vertices without a repeated closing vertex; validates non-degeneracy.
std::vector<Point2> open_ring(std::span<const Point2> ring)
{
  std::vector<Point2> vertices(ring.begin(), ring.end());
  if (vertices.size() > 1 && (vertices.front() - vertices.back()).norm() <= kPositionTolerance) {
    vertices.pop_back();
  }
  std::vector<Point2> distinct;
  for (const auto & v : vertices) {
    const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const Point2 & d) {
      return (d - v).norm() <= kPositionTolerance;
    });
    if (!seen) {
      distinct.push_back(v);
    }
    if (distinct.size() >= 3) {
      break;
    }
  }
  if (distinct.size() < 3) {
    throw GeometryError("degenerate polygon: fewer than 3 distinct vertices");
  }
  return vertices;
}

bool segments_touch(const Point2 & a0, const Point2 & a1, const Point2 & b0, const Point2 & b1)
{
  const double d1 = cross(a1 - a0, b0 - a0);
  const double d2 = cross(a1 - a0, b1 - a0);
  const double d3 = cross(b1 - b0, a0 - b0);
  const double d4 = cross(b1 - b0, a1 - b0);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  const double gap = std::min(
    {point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
     point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
  return gap <= kPositionTolerance;
}

}  // namespace

double wrap_angle(double angle)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(angle + std::numbers::pi, two_pi);
  if (r <= 0.0) {
    r += two_pi;
  }
  return r - std::numbers::pi;
}

Polyline::Polyline(std::vector<Point2> points) : points_(std::move(points))
{
  if (points_.size() < 2) {
    throw GeometryError(
      "polyline needs at least 2 points, got " + std::to_string(points_.size()));
  }
  arclengths_.reserve(points_.size());
  arclengths_.push_back(0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double step = (points_[i] - points_[i - 1]).norm();
    if (!(step > kPositionTolerance)) {
      throw GeometryError(
        "polyline vertices " + std::to_string(i - 1) + " and " + std::to_string(i) +
        " coincide");
    }
    arclengths_.push_back(arclengths_.back() + step);
  }
}

double polyline_length(const Polyline & polyline) { return polyline.length(); }

double point_segment_distance(const Point2 & query, const Point2 & a, const Point2 & b)
{
  const Vector2 d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) {
    return (query - a).norm();
  }
  const double t = std::clamp((query - a).dot(d) / len2, 0.0, 1.0);
  return (query - (a + t * d)).norm();
}

ArclengthProjection project_point(const Polyline & polyline, const Point2 & query)
{
  const auto & pts = polyline.points();
  const auto & cum = polyline.arclengths();

  ArclengthProjection best;
  double best_distance = std::numeric_limits<double>::infinity();
  std::size_t best_segment = 0;

  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Vector2 d = pts[i + 1] - pts[i];
    const double len2 = d.squaredNorm();
    const double t = std::clamp((query - pts[i]).dot(d) / len2, 0.0, 1.0);
    const Point2 foot = pts[i] + t * d;
    const double distance = (query - foot).norm();
    // Strict improvement required: equal distances keep the smaller arclength.
    if (distance < best_distance - kParameterTolerance) {
      best_distance = distance;
      best_segment = i;
      best.foot_point = foot;
      best.arclength = cum[i] + t * (cum[i + 1] - cum[i]);
    }
  }

  const Vector2 tangent = pts[best_segment + 1] - pts[best_segment];
  best.arclength = std::clamp(best.arclength, 0.0, polyline.length());
  best.tangent_orientation = std::atan2(tangent.y(), tangent.x());
  best.signed_lateral = cross(tangent, query - best.foot_point) >= 0.0 ? best_distance
                                                                        : -best_distance;
  return best;
}

PolylinePose point_at_arclength(const Polyline & polyline, double s)
{
  const auto & pts = polyline.points();
  const auto & cum = polyline.arclengths();
  const std::size_t last_segment = pts.size() - 2;

  if (!(s > 0.0)) {
    const Vector2 d = pts[1] - pts[0];
    return {pts[0], std::atan2(d.y(), d.x())};
  }
  if (s >= polyline.length()) {
    const Vector2 d = pts[last_segment + 1] - pts[last_segment];
    return {pts.back(), std::atan2(d.y(), d.x())};
  }
  const auto it = std::upper_bound(cum.begin(), cum.end(), s);
  const std::size_t i = std::min<std::size_t>(
    static_cast<std::size_t>(std::distance(cum.begin(), it)) - 1, last_segment);
  const Vector2 d = pts[i + 1] - pts[i];
  const double t = (s - cum[i]) / (cum[i + 1] - cum[i]);
  return {pts[i] + t * d, std::atan2(d.y(), d.x())};
}

Polyline sub_polyline(const Polyline & polyline, double s_begin, double s_end)
{
  if (!(s_end - s_begin > kPositionTolerance)) {
    throw GeometryError("sub_polyline: empty arclength interval");
  }
  const auto & cum = polyline.arclengths();
  std::vector<Point2> points;
  points.push_back(point_at_arclength(polyline, s_begin).position);
  for (std::size_t i = 0; i < polyline.size(); ++i) {
    if (cum[i] > s_begin + kPositionTolerance && cum[i] < s_end - kPositionTolerance) {
      points.push_back(polyline[i]);
    }
  }
  const Point2 end = point_at_arclength(polyline, s_end).position;
  if ((end - points.back()).norm() <= kPositionTolerance) {
    points.back() = end;
  } else {
    points.push_back(end);
  }
  return Polyline(std::move(points));
}

Polyline resample_uniform(const Polyline & polyline, std::size_t count)
{
  if (count < 2) {
    throw GeometryError("resample_uniform: count must be at least 2");
  }
  std::vector<double> fractions(count);
  for (std::size_t i = 0; i < count; ++i) {
    fractions[i] = static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return resample_at_fractions(polyline, fractions);
}

Polyline resample_at_fractions(const Polyline & polyline, std::span<const double> fractions)
{
  std::vector<Point2> points;
  points.reserve(fractions.size());
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double f = fractions[i];
    if (i == 0 && f <= 0.0) {
      points.push_back(polyline.front());
    } else if (i + 1 == fractions.size() && f >= 1.0) {
      points.push_back(polyline.back());
    } else {
      points.push_back(point_at_arclength(polyline, f * polyline.length()).position);
    }
  }
  return Polyline(std::move(points));
}

Point2 LocalFrame::to_local(const Point2 & point) const
{
  return rotate_to_local(point - origin);
}

Point2 LocalFrame::to_global(const Point2 & point) const
{
  const double c = std::cos(orientation);
  const double s = std::sin(orientation);
  return origin + Point2(c * point.x() - s * point.y(), s * point.x() + c * point.y());
}

Vector2 LocalFrame::rotate_to_local(const Vector2 & vector) const
{
  const double c = std::cos(orientation);
  const double s = std::sin(orientation);
  return {c * vector.x() + s * vector.y(), -s * vector.x() + c * vector.y()};
}

Point2 to_local(const LocalFrame & frame, const Point2 & point) { return frame.to_local(point); }

Point2 from_local(const LocalFrame & frame, const Point2 & point)
{
  return frame.to_global(point);
}

std::vector<PolylineIntersection> polyline_intersection(const Polyline & a, const Polyline & b)
{
  std::vector<PolylineIntersection> hits;
  const auto & pa = a.points();
  const auto & pb = b.points();
  if (!bounding_box(pa).overlaps(bounding_box(pb), kPositionTolerance)) {
    return hits;
  }
  const auto & ca = a.arclengths();
  const auto & cb = b.arclengths();

  for (std::size_t i = 0; i + 1 < pa.size(); ++i) {
    const Point2 & p0 = pa[i];
    const Vector2 r = pa[i + 1] - p0;
    const double r_len = ca[i + 1] - ca[i];
    BoundingBox box_a;
    box_a.extend(p0);
    box_a.extend(pa[i + 1]);

    for (std::size_t j = 0; j + 1 < pb.size(); ++j) {
      const Point2 & q0 = pb[j];
      const Vector2 s = pb[j + 1] - q0;
      const double s_len = cb[j + 1] - cb[j];
      BoundingBox box_b;
      box_b.extend(q0);
      box_b.extend(pb[j + 1]);
      if (!box_a.overlaps(box_b, kPositionTolerance)) {
        continue;
      }

      const Vector2 qp = q0 - p0;
      const double denom = cross(r, s);
      if (std::abs(denom) > kParameterTolerance * r_len * s_len) {
        const double t = cross(qp, s) / denom;
        const double u = cross(qp, r) / denom;
        if (
          t < -kParameterTolerance || t > 1.0 + kParameterTolerance ||
          u < -kParameterTolerance || u > 1.0 + kParameterTolerance) {
          continue;
        }
        const double tc = std::clamp(t, 0.0, 1.0);
        const double uc = std::clamp(u, 0.0, 1.0);
        hits.push_back({ca[i] + tc * r_len, cb[j] + uc * s_len, p0 + tc * r});
        continue;
      }

      // Parallel: only collinear overlaps produce a hit.
      if (std::abs(cross(r, qp)) / r_len > kPositionTolerance) {
        continue;
      }
      const double r_len2 = r.squaredNorm();
      const double t0 = qp.dot(r) / r_len2;
      const double t1 = (pb[j + 1] - p0).dot(r) / r_len2;
      const double lo = std::max(0.0, std::min(t0, t1));
      const double hi = std::min(1.0, std::max(t0, t1));
      if (lo > hi + kParameterTolerance) {
        continue;
      }
      const double t_mid = 0.5 * (lo + std::min(hi, 1.0));
      const Point2 point = p0 + t_mid * r;
      const double u = std::clamp((point - q0).dot(s) / s.squaredNorm(), 0.0, 1.0);
      hits.push_back({ca[i] + t_mid * r_len, cb[j] + u * s_len, point});
    }
  }

  std::sort(hits.begin(), hits.end(), [](const auto & x, const auto & y) {
    return x.arclength_a != y.arclength_a ? x.arclength_a < y.arclength_a
                                          : x.arclength_b < y.arclength_b;
  });
  std::vector<PolylineIntersection> merged;
  for (const auto & hit : hits) {
    const bool duplicate = std::any_of(merged.begin(), merged.end(), [&](const auto & m) {
      return std::abs(m.arclength_a - hit.arclength_a) <= kPositionTolerance &&
             std::abs(m.arclength_b - hit.arclength_b) <= kPositionTolerance;
    });
    if (!duplicate) {
      merged.push_back(hit);
    }
  }
  return merged;
}

bool point_in_polygon(const Point2 & query, std::span<const Point2> ring)
{
  const std::vector<Point2> vertices = open_ring(ring);
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (point_segment_distance(query, vertices[i], vertices[(i + 1) % n]) <= kPositionTolerance) {
      return true;
    }
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 & vi = vertices[i];
    const Point2 & vj = vertices[j];
    if ((vi.y() > query.y()) != (vj.y() > query.y())) {
      const double x_cross = (vj.x() - vi.x()) * (query.y() - vi.y()) / (vj.y() - vi.y()) + vi.x();
      if (query.x() < x_cross) {
        inside = !inside;
      }
    }
  }
  return inside;
}

std::vector<Point2> OrientedRectangle::corners() const
{
  const double c = std::cos(orientation);
  const double s = std::sin(orientation);
  const Vector2 along(c * 0.5 * length, s * 0.5 * length);
  const Vector2 across(-s * 0.5 * width, c * 0.5 * width);
  return {
    center - along - across, center + along - across, center + along + across,
    center - along + across};
}

bool rectangle_polygon_overlap(const OrientedRectangle & rectangle, std::span<const Point2> ring)
{
  const std::vector<Point2> polygon = open_ring(ring);
  const std::vector<Point2> corners = rectangle.corners();

  for (const auto & corner : corners) {
    if (point_in_polygon(corner, polygon)) {
      return true;
    }
  }
  for (const auto & vertex : polygon) {
    if (point_in_polygon(vertex, corners)) {
      return true;
    }
  }
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (segments_touch(corners[i], corners[(i + 1) % 4], polygon[j], polygon[(j + 1) % n])) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace trafficgraph
