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

#include "trafficgraph/scenario_io.hpp"

#include "trafficgraph/errors.hpp"
#include "trafficgraph/logging.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace trafficgraph
{
namespace
{

namespace pt = boost::property_tree;

const pt::ptree & child(const pt::ptree & node, const std::string & name, const std::string & context)
{
  const auto found = node.get_child_optional(name);
  if (!found) {
    throw ParseError(context + ": missing <" + name + ">");
  }
  return *found;
}

double to_double(const std::string & text, const std::string & context)
{
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) {
      throw std::invalid_argument(text);
    }
    return value;
  } catch (const std::exception &) {
    throw ParseError(context + ": invalid number '" + text + "'");
  }
}

std::int64_t to_integer(const std::string & text, const std::string & context)
{
  try {
    std::size_t used = 0;
    const long long value = std::stoll(text, &used);
    if (used != text.size()) {
      throw std::invalid_argument(text);
    }
    return value;
  } catch (const std::exception &) {
    throw ParseError(context + ": invalid integer '" + text + "'");
  }
}

// <exact>v</exact>, <intervalStart>/<intervalEnd> (midpoint) or plain text.
double read_value(const pt::ptree & node, const std::string & context)
{
  if (const auto exact = node.get_optional<std::string>("exact")) {
    return to_double(*exact, context);
  }
  const auto start = node.get_optional<std::string>("intervalStart");
  const auto end = node.get_optional<std::string>("intervalEnd");
  if (start && end) {
    return 0.5 * (to_double(*start, context) + to_double(*end, context));
  }
  const std::string text = node.get_value<std::string>();
  if (text.empty()) {
    throw ParseError(context + ": missing value");
  }
  return to_double(text, context);
}

std::vector<Point2> read_points(const pt::ptree & bound, const std::string & context)
{
  std::vector<Point2> points;
  for (const auto & [name, node] : bound) {
    if (name != "point") {
      continue;
    }
    points.emplace_back(
      to_double(child(node, "x", context).get_value<std::string>(), context + " x"),
      to_double(child(node, "y", context).get_value<std::string>(), context + " y"));
  }
  if (points.size() < 2) {
    throw GeometryError(context + ": fewer than 2 boundary points");
  }
  return points;
}

LaneletId read_ref(const pt::ptree & node, const std::string & context)
{
  const auto ref = node.get_optional<std::string>("<xmlattr>.ref");
  if (!ref) {
    throw ParseError(context + ": reference without 'ref' attribute");
  }
  return to_integer(*ref, context);
}

Lanelet read_lanelet(const pt::ptree & node)
{
  const auto id_text = node.get_optional<std::string>("<xmlattr>.id");
  if (!id_text) {
    throw ParseError("lanelet without id attribute");
  }
  const LaneletId id = to_integer(*id_text, "lanelet id");
  const std::string context = "lanelet " + std::to_string(id);

  Polyline left(read_points(child(node, "leftBound", context), context + " leftBound"));
  Polyline right(read_points(child(node, "rightBound", context), context + " rightBound"));
  Lanelet lanelet = Lanelet::from_bounds(id, std::move(left), std::move(right));
  if (const auto center = node.get_child_optional("centerBound")) {
    Polyline center_line(read_points(*center, context + " centerBound"));
    if (center_line.size() != lanelet.left_bound.size()) {
      throw GeometryError(context + ": centerBound vertex count differs from bounds");
    }
    lanelet.center = std::move(center_line);
  }

  for (const auto & [name, sub] : node) {
    if (name == "predecessor") {
      lanelet.predecessors.insert(read_ref(sub, context + " predecessor"));
    } else if (name == "successor") {
      lanelet.successors.insert(read_ref(sub, context + " successor"));
    } else if (name == "adjacentLeft" || name == "adjacentRight") {
      const std::string direction = sub.get<std::string>("<xmlattr>.drivingDir", "same");
      LateralAdjacency adjacency{read_ref(sub, context + " " + name), direction != "opposite"};
      if (name == "adjacentLeft") {
        lanelet.adjacent_left = adjacency;
      } else {
        lanelet.adjacent_right = adjacency;
      }
    }
  }
  return lanelet;
}

VehicleState read_state(const pt::ptree & node, const std::string & context)
{
  VehicleState state;
  const auto & time = child(node, "time", context);
  if (const auto exact = time.get_optional<std::string>("exact")) {
    state.timestep = to_integer(*exact, context + " time");
  } else {
    state.timestep = to_integer(time.get_value<std::string>(), context + " time");
  }
  const std::string ctx = context + " t=" + std::to_string(state.timestep);

  const auto & position = child(node, "position", ctx);
  const auto & point = child(position, "point", ctx + " position");
  state.position = Point2(
    to_double(child(point, "x", ctx).get_value<std::string>(), ctx + " x"),
    to_double(child(point, "y", ctx).get_value<std::string>(), ctx + " y"));
  state.orientation = wrap_angle(read_value(child(node, "orientation", ctx), ctx + " orientation"));

  const double c = std::cos(state.orientation);
  const double s = std::sin(state.orientation);
  const double speed = read_value(child(node, "velocity", ctx), ctx + " velocity");
  if (const auto vy = node.get_child_optional("velocityY")) {
    state.velocity = Vector2(speed, read_value(*vy, ctx + " velocityY"));
  } else {
    state.velocity = Vector2(speed * c, speed * s);
  }
  if (const auto acc = node.get_child_optional("acceleration")) {
    const double a = read_value(*acc, ctx + " acceleration");
    if (const auto ay = node.get_child_optional("accelerationY")) {
      state.acceleration = Vector2(a, read_value(*ay, ctx + " accelerationY"));
    } else {
      state.acceleration = Vector2(a * c, a * s);
    }
  }
  if (const auto yaw = node.get_child_optional("yawRate")) {
    state.yaw_rate = read_value(*yaw, ctx + " yawRate");
  }
  return state;
}

std::optional<DynamicObstacle> read_obstacle(const pt::ptree & node)
{
  const auto id_text = node.get_optional<std::string>("<xmlattr>.id");
  if (!id_text) {
    throw ParseError("dynamicObstacle without id attribute");
  }
  DynamicObstacle obstacle;
  obstacle.id = to_integer(*id_text, "dynamicObstacle id");
  const std::string context = "obstacle " + std::to_string(obstacle.id);

  const auto & shape = child(node, "shape", context);
  const auto rectangle = shape.get_child_optional("rectangle");
  if (!rectangle) {
    log::warn(context + ": only rectangle shapes are supported; obstacle skipped");
    return std::nullopt;
  }
  obstacle.length =
    to_double(child(*rectangle, "length", context).get_value<std::string>(), context + " length");
  obstacle.width =
    to_double(child(*rectangle, "width", context).get_value<std::string>(), context + " width");

  obstacle.trajectory.push_back(read_state(child(node, "initialState", context), context));
  if (const auto trajectory = node.get_child_optional("trajectory")) {
    for (const auto & [name, state] : *trajectory) {
      if (name == "state") {
        obstacle.trajectory.push_back(read_state(state, context));
      }
    }
  }
  return obstacle;
}

std::string number(double value) { return fmt::format("{}", value); }

void put_points(pt::ptree & bound, const Polyline & polyline)
{
  for (const auto & p : polyline.points()) {
    pt::ptree & point = bound.add("point", "");
    point.put("x", number(p.x()));
    point.put("y", number(p.y()));
  }
}

void put_state(pt::ptree & node, const VehicleState & state)
{
  pt::ptree & point = node.put("position.point", "");
  point.put("x", number(state.position.x()));
  point.put("y", number(state.position.y()));
  node.put("orientation.exact", number(state.orientation));
  node.put("time.exact", std::to_string(state.timestep));
  node.put("velocity.exact", number(state.velocity.x()));
  node.put("velocityY.exact", number(state.velocity.y()));
  if (state.acceleration) {
    node.put("acceleration.exact", number(state.acceleration->x()));
    node.put("accelerationY.exact", number(state.acceleration->y()));
  }
  if (state.yaw_rate) {
    node.put("yawRate.exact", number(*state.yaw_rate));
  }
}

}  // namespace

Scenario parse_scenario(std::string_view document, const std::string & fallback_id)
{
  pt::ptree tree;
  try {
    std::istringstream stream{std::string(document)};
    pt::read_xml(stream, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error & e) {
    throw ParseError("malformed scenario document: " + e.message(), static_cast<long>(e.line()));
  }

  const auto root = tree.get_child_optional("commonRoad");
  if (!root) {
    throw ParseError("missing <commonRoad> root element");
  }

  Scenario scenario;
  scenario.id = root->get<std::string>("<xmlattr>.benchmarkID", fallback_id);
  if (scenario.id.empty()) {
    throw ParseError("scenario has no benchmarkID and no fallback id");
  }
  const auto dt = root->get_optional<std::string>("<xmlattr>.timeStepSize");
  if (!dt) {
    throw ParseError("missing timeStepSize attribute on <commonRoad>");
  }
  scenario.dt = to_double(*dt, "timeStepSize");

  std::set<std::string> ignored;
  for (const auto & [name, node] : *root) {
    if (name == "lanelet") {
      Lanelet lanelet = read_lanelet(node);
      const LaneletId id = lanelet.id;
      if (!scenario.lanelets.emplace(id, std::move(lanelet)).second) {
        throw ValidationError("duplicate lanelet id " + std::to_string(id));
      }
    } else if (name == "dynamicObstacle") {
      if (auto obstacle = read_obstacle(node)) {
        std::sort(
          obstacle->trajectory.begin(), obstacle->trajectory.end(),
          [](const auto & a, const auto & b) { return a.timestep < b.timestep; });
        const ObstacleId id = obstacle->id;
        if (!scenario.obstacles.emplace(id, std::move(*obstacle)).second) {
          throw ValidationError("duplicate obstacle id " + std::to_string(id));
        }
      }
    } else if (name != "<xmlattr>" && name != "<xmlcomment>") {
      ignored.insert(name);
    }
  }
  for (const auto & name : ignored) {
    log::warn("scenario " + scenario.id + ": ignoring unsupported element <" + name + ">");
  }

  validate_scenario(scenario);
  return scenario;
}

Scenario load_scenario_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open scenario file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.stem().string());
}

std::string write_scenario(const Scenario & scenario)
{
  pt::ptree tree;
  pt::ptree & root = tree.put("commonRoad", "");
  root.put("<xmlattr>.timeStepSize", number(scenario.dt));
  root.put("<xmlattr>.commonRoadVersion", "2020a");
  root.put("<xmlattr>.benchmarkID", scenario.id);

  for (const auto & [id, lanelet] : scenario.lanelets) {
    pt::ptree & node = root.add("lanelet", "");
    node.put("<xmlattr>.id", std::to_string(id));
    put_points(node.put("leftBound", ""), lanelet.left_bound);
    put_points(node.put("rightBound", ""), lanelet.right_bound);
    const Lanelet derived = Lanelet::from_bounds(id, lanelet.left_bound, lanelet.right_bound);
    if (!(derived.center == lanelet.center)) {
      put_points(node.put("centerBound", ""), lanelet.center);
    }
    for (LaneletId ref : lanelet.predecessors) {
      node.add("predecessor", "").put("<xmlattr>.ref", std::to_string(ref));
    }
    for (LaneletId ref : lanelet.successors) {
      node.add("successor", "").put("<xmlattr>.ref", std::to_string(ref));
    }
    auto put_adjacency = [&node](const char * name, const LateralAdjacency & adjacency) {
      pt::ptree & adj = node.add(name, "");
      adj.put("<xmlattr>.ref", std::to_string(adjacency.id));
      adj.put("<xmlattr>.drivingDir", adjacency.same_direction ? "same" : "opposite");
    };
    if (lanelet.adjacent_left) {
      put_adjacency("adjacentLeft", *lanelet.adjacent_left);
    }
    if (lanelet.adjacent_right) {
      put_adjacency("adjacentRight", *lanelet.adjacent_right);
    }
  }

  for (const auto & [id, obstacle] : scenario.obstacles) {
    pt::ptree & node = root.add("dynamicObstacle", "");
    node.put("<xmlattr>.id", std::to_string(id));
    node.put("type", "car");
    node.put("shape.rectangle.length", number(obstacle.length));
    node.put("shape.rectangle.width", number(obstacle.width));
    put_state(node.put("initialState", ""), obstacle.trajectory.front());
    if (obstacle.trajectory.size() > 1) {
      pt::ptree & trajectory = node.put("trajectory", "");
      for (std::size_t i = 1; i < obstacle.trajectory.size(); ++i) {
        put_state(trajectory.add("state", ""), obstacle.trajectory[i]);
      }
    }
  }

  std::ostringstream out;
  pt::write_xml(out, tree, pt::xml_writer_make_settings<std::string>(' ', 2));
  return out.str();
}

}  // namespace trafficgraph
