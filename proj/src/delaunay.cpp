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

#include "trafficgraph/delaunay.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace trafficgraph
{
namespace
{

using Rational = boost::multiprecision::cpp_rational;

// Error bounds of the floating-point filters (Shewchuk, "Adaptive Precision Floating-Point
// Arithmetic and Fast Robust Geometric Predicates").
constexpr double kEpsilon = 1.1102230246251565e-16;  // 2^-53
constexpr double kOrientBound = (3.0 + 16.0 * kEpsilon) * kEpsilon;
constexpr double kIncircleBound = (10.0 + 96.0 * kEpsilon) * kEpsilon;

template <typename T>
int sign_of(const T & value)
{
  return value > 0 ? 1 : (value < 0 ? -1 : 0);
}

int orient2d_exact(const Point2 & a, const Point2 & b, const Point2 & c)
{
  const Rational acx = Rational(a.x()) - Rational(c.x());
  const Rational bcy = Rational(b.y()) - Rational(c.y());
  const Rational acy = Rational(a.y()) - Rational(c.y());
  const Rational bcx = Rational(b.x()) - Rational(c.x());
  return sign_of(Rational(acx * bcy - acy * bcx));
}

int incircle_exact(const Point2 & a, const Point2 & b, const Point2 & c, const Point2 & d)
{
  const Rational dx(d.x());
  const Rational dy(d.y());
  const Rational adx = Rational(a.x()) - dx;
  const Rational ady = Rational(a.y()) - dy;
  const Rational bdx = Rational(b.x()) - dx;
  const Rational bdy = Rational(b.y()) - dy;
  const Rational cdx = Rational(c.x()) - dx;
  const Rational cdy = Rational(c.y()) - dy;
  const Rational alift = adx * adx + ady * ady;
  const Rational blift = bdx * bdx + bdy * bdy;
  const Rational clift = cdx * cdx + cdy * cdy;
  const Rational det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                       clift * (adx * bdy - bdx * ady);
  return sign_of(det);
}

class Triangulation
{
public:
  explicit Triangulation(const std::vector<Point2> & points) : points_(points) {}

  // Sweep-line construction followed by Lawson flips. `points_` are sorted lexicographically,
  // so a vertex index doubles as its perturbation rank.
  void build(std::size_t first_off_line)
  {
    const std::size_t k = first_off_line;
    const int side = orient2d_sign(points_[0], points_[1], points_[k]);
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      if (side > 0) {
        add_triangle(i, i + 1, k);
      } else {
        add_triangle(i + 1, i, k);
      }
    }
    if (side > 0) {
      for (std::size_t i = 0; i <= k; ++i) {
        hull.push_back(i);
      }
    } else {
      hull.push_back(0);
      for (std::size_t i = k; i >= 1; --i) {
        hull.push_back(i);
      }
    }

    for (std::size_t j = k + 1; j < points_.size(); ++j) {
      insert_outside(hull, j);
    }
    legalize();
  }

  std::vector<IndexPair> edges() const
  {
    std::vector<IndexPair> out;
    for (const auto & [key, tri] : edge_to_triangle_) {
      (void)tri;
      const auto u = static_cast<std::size_t>(key / stride());
      const auto v = static_cast<std::size_t>(key % stride());
      if (u < v) {
        out.emplace_back(u, v);
      } else if (!edge_to_triangle_.contains(edge_key(v, u))) {
        out.emplace_back(v, u);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

private:
  using Triangle = std::array<std::size_t, 3>;

  std::uint64_t stride() const { return static_cast<std::uint64_t>(points_.size()); }
  std::uint64_t edge_key(std::size_t u, std::size_t v) const { return u * stride() + v; }

  void set_triangle(std::size_t t, const Triangle & tri)
  {
    triangles_[t] = tri;
    for (int e = 0; e < 3; ++e) {
      edge_to_triangle_[edge_key(tri[e], tri[(e + 1) % 3])] = t;
    }
  }

  void add_triangle(std::size_t a, std::size_t b, std::size_t c)
  {
    triangles_.push_back({a, b, c});
    set_triangle(triangles_.size() - 1, {a, b, c});
  }

  void insert_outside(std::vector<std::size_t> & hull, std::size_t p)
  {
    const std::size_t h = hull.size();
    std::vector<bool> visible(h);
    for (std::size_t i = 0; i < h; ++i) {
      visible[i] = orient2d_sign(points_[hull[i]], points_[hull[(i + 1) % h]], points_[p]) < 0;
    }
    std::size_t start = h;
    for (std::size_t i = 0; i < h; ++i) {
      if (visible[i] && !visible[(i + h - 1) % h]) {
        start = i;
        break;
      }
    }
    if (start == h) {
      throw std::logic_error("delaunay sweep: inserted point sees no hull edge");
    }
    std::rotate(hull.begin(), hull.begin() + static_cast<std::ptrdiff_t>(start), hull.end());
    std::rotate(visible.begin(), visible.begin() + static_cast<std::ptrdiff_t>(start), visible.end());
    std::size_t count = 0;
    while (count < h && visible[count]) {
      add_triangle(hull[(count + 1) % h], hull[count], p);
      ++count;
    }
    std::vector<std::size_t> next;
    next.reserve(h - count + 2);
    next.push_back(hull[0]);
    next.push_back(p);
    for (std::size_t i = count; i < h; ++i) {
      if (i != 0) {
        next.push_back(hull[i]);
      }
    }
    hull = std::move(next);
  }

  std::size_t opposite(const Triangle & tri, std::size_t u, std::size_t v) const
  {
    for (std::size_t x : tri) {
      if (x != u && x != v) {
        return x;
      }
    }
    throw std::logic_error("delaunay: malformed triangle");
  }

  // In-circle sign with the lifted coordinate of each vertex raised by an infinitesimal that
  // shrinks with the vertex rank. Never zero for four distinct cocircular points.
  int perturbed_incircle(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const
  {
    const int exact = incircle_sign(points_[a], points_[b], points_[c], points_[d]);
    if (exact != 0) {
      return exact;
    }
    // Cofactors of the lifted column in the 4x4 determinant with rows (x, y, x^2 + y^2, 1).
    std::array<std::pair<std::size_t, int>, 4> terms{{
      {a, orient2d_sign(points_[b], points_[c], points_[d])},
      {b, -orient2d_sign(points_[a], points_[c], points_[d])},
      {c, orient2d_sign(points_[a], points_[b], points_[d])},
      {d, -orient2d_sign(points_[a], points_[b], points_[c])},
    }};
    std::sort(terms.begin(), terms.end());
    for (const auto & [rank, cofactor] : terms) {
      (void)rank;
      if (cofactor != 0) {
        return cofactor;
      }
    }
    return 0;
  }

  void legalize()
  {
    std::vector<IndexPair> stack;
    for (const auto & [key, tri] : edge_to_triangle_) {
      (void)tri;
      const auto u = static_cast<std::size_t>(key / stride());
      const auto v = static_cast<std::size_t>(key % stride());
      if (u < v) {
        stack.emplace_back(u, v);
      }
    }
    std::sort(stack.begin(), stack.end());

    while (!stack.empty()) {
      const auto [u, v] = stack.back();
      stack.pop_back();
      const auto it_uv = edge_to_triangle_.find(edge_key(u, v));
      const auto it_vu = edge_to_triangle_.find(edge_key(v, u));
      if (it_uv == edge_to_triangle_.end() || it_vu == edge_to_triangle_.end()) {
        continue;
      }
      const std::size_t t1 = it_uv->second;
      const std::size_t t2 = it_vu->second;
      const std::size_t c = opposite(triangles_[t1], u, v);
      const std::size_t d = opposite(triangles_[t2], u, v);
      if (perturbed_incircle(u, v, c, d) <= 0) {
        continue;
      }
      edge_to_triangle_.erase(it_uv);
      edge_to_triangle_.erase(edge_key(v, u));
      set_triangle(t1, {u, d, c});
      set_triangle(t2, {d, v, c});
      stack.emplace_back(std::min(u, d), std::max(u, d));
      stack.emplace_back(std::min(d, v), std::max(d, v));
      stack.emplace_back(std::min(v, c), std::max(v, c));
      stack.emplace_back(std::min(c, u), std::max(c, u));
    }
  }

  const std::vector<Point2> & points_;
  std::vector<Triangle> triangles_;
  std::unordered_map<std::uint64_t, std::size_t> edge_to_triangle_;
};

}  // namespace

int orient2d_sign(const Point2 & a, const Point2 & b, const Point2 & c)
{
  const double detleft = (a.x() - c.x()) * (b.y() - c.y());
  const double detright = (a.y() - c.y()) * (b.x() - c.x());
  const double det = detleft - detright;
  double detsum = 0.0;
  if (detleft > 0.0) {
    if (detright <= 0.0) {
      return sign_of(det);
    }
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) {
      return sign_of(det);
    }
    detsum = -detleft - detright;
  } else {
    return sign_of(det);
  }
  const double bound = kOrientBound * detsum;
  if (det >= bound || -det >= bound) {
    return sign_of(det);
  }
  return orient2d_exact(a, b, c);
}

int incircle_sign(const Point2 & a, const Point2 & b, const Point2 & c, const Point2 & d)
{
  const double adx = a.x() - d.x();
  const double ady = a.y() - d.y();
  const double bdx = b.x() - d.x();
  const double bdy = b.y() - d.y();
  const double cdx = c.x() - d.x();
  const double cdy = c.y() - d.y();

  const double bdxcdy = bdx * cdy;
  const double cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady;
  const double adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy;
  const double bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det =
    alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double bound = kIncircleBound * permanent;
  if (det > bound || -det > bound) {
    return sign_of(det);
  }
  return incircle_exact(a, b, c, d);
}

std::vector<IndexPair> delaunay_neighbors(std::span<const Point2> points)
{
  const std::size_t n = points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (points[i].x() != points[j].x()) {
      return points[i].x() < points[j].x();
    }
    if (points[i].y() != points[j].y()) {
      return points[i].y() < points[j].y();
    }
    return i < j;
  });

  // Distinct points in lexicographic order, each with the input indices that alias it.
  std::vector<Point2> unique_points;
  std::vector<std::vector<std::size_t>> aliases;
  for (std::size_t idx : order) {
    if (!unique_points.empty() && unique_points.back() == points[idx]) {
      aliases.back().push_back(idx);
    } else {
      unique_points.push_back(points[idx]);
      aliases.push_back({idx});
    }
  }
  const std::size_t m = unique_points.size();

  std::vector<IndexPair> unique_edges;
  if (m == 2) {
    unique_edges.emplace_back(0, 1);
  } else if (m >= 3) {
    std::size_t first_off_line = m;
    for (std::size_t k = 2; k < m; ++k) {
      if (orient2d_sign(unique_points[0], unique_points[1], unique_points[k]) != 0) {
        first_off_line = k;
        break;
      }
    }
    if (first_off_line == m) {
      // All collinear: lexicographic order is the order along the line.
      for (std::size_t i = 0; i + 1 < m; ++i) {
        unique_edges.emplace_back(i, i + 1);
      }
    } else {
      Triangulation triangulation(unique_points);
      triangulation.build(first_off_line);
      unique_edges = triangulation.edges();
    }
  }

  std::vector<IndexPair> result;
  auto emit = [&result](std::size_t i, std::size_t j) {
    result.emplace_back(std::min(i, j), std::max(i, j));
  };
  for (const auto & group : aliases) {
    for (std::size_t x = 0; x < group.size(); ++x) {
      for (std::size_t y = x + 1; y < group.size(); ++y) {
        emit(group[x], group[y]);
      }
    }
  }
  for (const auto & [u, v] : unique_edges) {
    for (std::size_t i : aliases[u]) {
      for (std::size_t j : aliases[v]) {
        emit(i, j);
      }
    }
  }
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

}  // namespace trafficgraph
