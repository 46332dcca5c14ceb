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

#include "trafficgraph/errors.hpp"
#include "trafficgraph/geometry.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace trafficgraph
{
namespace
{

using testing::line;

TEST(WrapAngle, MapsIntoHalfOpenInterval)
{
  EXPECT_DOUBLE_EQ(wrap_angle(0.0), 0.0);
  EXPECT_DOUBLE_EQ(wrap_angle(M_PI), M_PI);
  EXPECT_DOUBLE_EQ(wrap_angle(-M_PI), M_PI);
  EXPECT_NEAR(wrap_angle(3.0 * M_PI), M_PI, 1e-12);
  EXPECT_NEAR(wrap_angle(-M_PI / 2 - 2 * M_PI), -M_PI / 2, 1e-12);
}

TEST(Polyline, RejectsDegenerateInput)
{
  EXPECT_THROW(Polyline({Point2(0, 0)}), GeometryError);
  EXPECT_THROW(Polyline({Point2(0, 0), Point2(0, 0), Point2(1, 0)}), GeometryError);
}

TEST(Polyline, LengthIsEuclideanSum)
{
  const Polyline p({Point2(0, 0), Point2(3, 4), Point2(3, 10)});
  EXPECT_DOUBLE_EQ(p.length(), 11.0);
  EXPECT_DOUBLE_EQ(polyline_length(p), 11.0);
  ASSERT_EQ(p.arclengths().size(), 3U);
  EXPECT_DOUBLE_EQ(p.arclengths()[1], 5.0);
}

TEST(ProjectPoint, SignedLateralIsPositiveOnTheLeft)
{
  const Polyline p = line({0, 0}, {10, 0});
  const auto left = project_point(p, {4, 2});
  EXPECT_DOUBLE_EQ(left.arclength, 4.0);
  EXPECT_DOUBLE_EQ(left.signed_lateral, 2.0);
  EXPECT_DOUBLE_EQ(left.tangent_orientation, 0.0);
  EXPECT_DOUBLE_EQ(project_point(p, {4, -3}).signed_lateral, -3.0);
}

TEST(ProjectPoint, ClampsBeyondTheEnds)
{
  const Polyline p = line({0, 0}, {10, 0});
  const auto before = project_point(p, {-3, 4});
  EXPECT_DOUBLE_EQ(before.arclength, 0.0);
  EXPECT_TRUE(before.foot_point.isApprox(Point2(0, 0)));
  EXPECT_DOUBLE_EQ(project_point(p, {12, 0}).arclength, 10.0);
}

TEST(ProjectPoint, TiesResolveToTheSmallestArclength)
{
  // Query equidistant from both legs of a U.
  const Polyline p({Point2(0, 0), Point2(0, 2), Point2(2, 2), Point2(2, 0)});
  const auto r = project_point(p, {1, 0.5});
  EXPECT_NEAR(r.arclength, 0.5, 1e-12);
}

TEST(ProjectPoint, MatchesDenseSamplingOracle)
{
  std::mt19937_64 rng(7);
  for (int i = 0; i < 150; ++i) {
    const auto c = testing::random_projection_case(rng);
    const Polyline p(c.polyline);
    const auto r = project_point(p, c.query);
    EXPECT_NEAR((r.foot_point - c.query).norm(), c.oracle_distance, 1e-6) << "case " << i;
    EXPECT_NEAR(std::abs(r.signed_lateral), (r.foot_point - c.query).norm(), 1e-9);
    EXPECT_TRUE(point_at_arclength(p, r.arclength).position.isApprox(r.foot_point, 1e-9));
  }
}

TEST(PointAtArclength, InterpolatesAndClamps)
{
  const Polyline p({Point2(0, 0), Point2(4, 0), Point2(4, 4)});
  EXPECT_TRUE(point_at_arclength(p, 6.0).position.isApprox(Point2(4, 2)));
  EXPECT_DOUBLE_EQ(point_at_arclength(p, 6.0).orientation, M_PI / 2);
  EXPECT_TRUE(point_at_arclength(p, -1.0).position.isApprox(Point2(0, 0)));
  EXPECT_TRUE(point_at_arclength(p, 99.0).position.isApprox(Point2(4, 4)));
}

TEST(SubPolyline, CutsAtArclengths)
{
  const Polyline p({Point2(0, 0), Point2(4, 0), Point2(4, 4)});
  const Polyline s = sub_polyline(p, 2.0, 6.0);
  EXPECT_NEAR(s.length(), 4.0, 1e-12);
  EXPECT_TRUE(s.front().isApprox(Point2(2, 0)));
  EXPECT_TRUE(s.back().isApprox(Point2(4, 2)));
  EXPECT_EQ(s.size(), 3U);
}

TEST(Resample, UniformSpacingKeepsEndpoints)
{
  const Polyline p({Point2(0, 0), Point2(3, 0), Point2(3, 3)});
  const Polyline r = resample_uniform(p, 7);
  ASSERT_EQ(r.size(), 7U);
  EXPECT_TRUE(r.front().isApprox(p.front()));
  EXPECT_TRUE(r.back().isApprox(p.back()));
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_NEAR(r.arclengths()[i], static_cast<double>(i), 1e-12);
  }
}

TEST(Resample, AtFractions)
{
  const Polyline p = line({0, 0}, {10, 0});
  const std::vector<double> f{0.0, 0.25, 1.0};
  const Polyline r = resample_at_fractions(p, f);
  ASSERT_EQ(r.size(), 3U);
  EXPECT_TRUE(r[1].isApprox(Point2(2.5, 0)));
}

TEST(LocalFrame, RoundTrip)
{
  const LocalFrame frame{Point2(3, -2), 0.7};
  const Point2 q(1.5, 8.25);
  EXPECT_TRUE(frame.to_global(frame.to_local(q)).isApprox(q, 1e-12));
  EXPECT_TRUE(frame.to_local(Point2(3, -2)).isZero());
  const LocalFrame east{Point2(0, 0), M_PI / 2};
  EXPECT_TRUE(east.to_local(Point2(0, 1)).isApprox(Point2(1, 0), 1e-12));
  EXPECT_TRUE(east.rotate_to_local(Vector2(1, 0)).isApprox(Vector2(0, -1), 1e-12));
}

TEST(PolylineIntersection, CrossingArclengths)
{
  const Polyline a = line({0, 0}, {10, 0});
  const Polyline b({Point2(3, -5), Point2(3, 5)});
  const auto hits = polyline_intersection(a, b);
  ASSERT_EQ(hits.size(), 1U);
  EXPECT_DOUBLE_EQ(hits[0].arclength_a, 3.0);
  EXPECT_DOUBLE_EQ(hits[0].arclength_b, 5.0);
  EXPECT_TRUE(polyline_intersection(a, line({0, 1}, {10, 1})).empty());
}

TEST(PolylineIntersection, SortedAlongFirst)
{
  const Polyline a = line({0, 0}, {10, 0});
  const Polyline zigzag({Point2(8, -1), Point2(8, 1), Point2(2, 1), Point2(2, -1)});
  const auto hits = polyline_intersection(a, zigzag);
  ASSERT_EQ(hits.size(), 2U);
  EXPECT_DOUBLE_EQ(hits[0].arclength_a, 2.0);
  EXPECT_DOUBLE_EQ(hits[0].arclength_b, 9.0);
  EXPECT_DOUBLE_EQ(hits[1].arclength_a, 8.0);
}

TEST(PointInPolygon, BoundaryIsInside)
{
  const std::vector<Point2> square{Point2(0, 0), Point2(2, 0), Point2(2, 2), Point2(0, 2)};
  EXPECT_TRUE(point_in_polygon({1, 1}, square));
  EXPECT_TRUE(point_in_polygon({2, 1}, square));
  EXPECT_TRUE(point_in_polygon({0, 0}, square));
  EXPECT_FALSE(point_in_polygon({2.001, 1}, square));
}

TEST(RectanglePolygonOverlap, CrossingAndContainment)
{
  const std::vector<Point2> square{Point2(0, 0), Point2(2, 0), Point2(2, 2), Point2(0, 2)};
  EXPECT_TRUE(rectangle_polygon_overlap({Point2(1, 1), 0.0, 0.5, 0.5}, square));
  EXPECT_TRUE(rectangle_polygon_overlap({Point2(1, 1), 0.3, 10.0, 10.0}, square));
  EXPECT_TRUE(rectangle_polygon_overlap({Point2(2.5, 1), 0.0, 2.0, 1.0}, square));
  EXPECT_FALSE(rectangle_polygon_overlap({Point2(3.1, 1), 0.0, 2.0, 1.0}, square));
  const OrientedRectangle r{Point2(0, 0), M_PI / 2, 4.0, 2.0};
  const auto corners = r.corners();
  ASSERT_EQ(corners.size(), 4U);
  for (const auto & c : corners) {
    EXPECT_NEAR(std::abs(c.x()), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(c.y()), 2.0, 1e-12);
  }
}

TEST(PointSegmentDistance, Basic)
{
  EXPECT_DOUBLE_EQ(point_segment_distance({1, 1}, {0, 0}, {2, 0}), 1.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({5, 0}, {0, 0}, {2, 0}), 3.0);
}

}  // namespace
}  // namespace trafficgraph
