// Copyright 2026 The curvepath Authors
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

#include "curvepath/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "curvepath/clothoid.hpp"
#include "curvepath/errors.hpp"

namespace curvepath
{

void ScenarioSpec::validate() const
{
  if (segments.empty()) {
    throw ValidationError("scenario has no road segments");
  }
  if (!(lane_width > 0.0) || !(speed > 0.0)) {
    throw ValidationError("scenario lane width and speed must be positive");
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto & seg = segments[i];
    const std::string where = "segment " + std::to_string(i) + ": ";
    if (!(seg.length > 0.0) || !std::isfinite(seg.length)) {
      throw ValidationError(where + "length must be positive");
    }
    if (!std::isfinite(seg.kappa_start) || !std::isfinite(seg.kappa_end)) {
      throw ValidationError(where + "curvature must be finite");
    }
    if (seg.kind == SegmentKind::kStraight && (seg.kappa_start != 0.0 || seg.kappa_end != 0.0)) {
      throw ValidationError(where + "straight segment with curvature");
    }
    if (seg.kind == SegmentKind::kArc && seg.kappa_start != seg.kappa_end) {
      throw ValidationError(where + "arc curvature must be constant");
    }
    if (seg.kind != SegmentKind::kTransition) {
      continue;
    }
    if (i > 0 && std::abs(segments[i - 1].kappa_end - seg.kappa_start) > 1e-12) {
      throw ValidationError(where + "curvature jump at transition start");
    }
    if (i + 1 < segments.size() && std::abs(segments[i + 1].kappa_start - seg.kappa_end) > 1e-12) {
      throw ValidationError(where + "curvature jump at transition end");
    }
  }
}

double ScenarioSpec::length() const
{
  double total = 0.0;
  for (const auto & seg : segments) {
    total += seg.length;
  }
  return total;
}

ScenarioSpec ScenarioSpec::mirrored() const
{
  ScenarioSpec out = *this;
  for (auto & seg : out.segments) {
    seg.kappa_start = -seg.kappa_start;
    seg.kappa_end = -seg.kappa_end;
  }
  return out;
}

Corridor build_scenario_road(const ScenarioSpec & spec, double step)
{
  spec.validate();
  if (!(step > 0.0)) {
    throw ValidationError("road sampling step must be positive");
  }
  std::vector<CorridorSample> samples;
  Pose pose = spec.start;
  double heading = spec.start.theta;
  double s0 = 0.0;
  for (std::size_t i = 0; i < spec.segments.size(); ++i) {
    const auto & seg = spec.segments[i];
    const ClothoidSegment c{pose, seg.kappa_start, (seg.kappa_end - seg.kappa_start) / seg.length,
      seg.length};
    const auto n = static_cast<std::size_t>(std::ceil(seg.length / step - 1e-9));
    for (std::size_t j = (i == 0 ? 0 : 1); j <= n; ++j) {
      const double u = j == n ? seg.length : static_cast<double>(j) * step;
      CorridorSample smp;
      smp.s = s0 + u;
      smp.pose = evaluate(c, u);
      smp.heading = heading + c.heading_change(u);
      // A joint belongs to the later segment, except at the very end.
      smp.kappa = j == n && i + 1 < spec.segments.size() ?
        spec.segments[i + 1].kappa_start : c.kappa_at(u);
      samples.push_back(smp);
    }
    if (i == 0) {
      samples.front().s = 0.0;
    }
    pose = evaluate(c, seg.length);
    heading += c.heading_change(seg.length);
    s0 += seg.length;
  }
  return Corridor(std::move(samples), spec.lane_width);
}

ScenarioSpec straight_scenario(double length)
{
  ScenarioSpec spec;
  spec.segments = {RoadSegment::straight(length)};
  return spec;
}

namespace
{

void append_s_curve(std::vector<RoadSegment> & segs, double k, double transition, double arc)
{
  segs.push_back(RoadSegment::transition(transition, 0.0, k));
  segs.push_back(RoadSegment::arc(arc, k));
  segs.push_back(RoadSegment::transition(2.0 * transition, k, -k));
  segs.push_back(RoadSegment::arc(arc, -k));
  segs.push_back(RoadSegment::transition(transition, -k, 0.0));
}

}  // namespace

ScenarioSpec s_curve_scenario(double kappa, double transition, double arc, double approach)
{
  ScenarioSpec spec;
  spec.segments.push_back(RoadSegment::straight(approach));
  append_s_curve(spec.segments, kappa, transition, arc);
  spec.segments.push_back(RoadSegment::straight(approach));
  return spec;
}

ScenarioSpec repeated_s_curve_scenario(std::span<const double> kappas, double spacing,
  double transition, double arc)
{
  ScenarioSpec spec;
  spec.segments.push_back(RoadSegment::straight(spacing));
  for (double k : kappas) {
    append_s_curve(spec.segments, k, transition, arc);
    spec.segments.push_back(RoadSegment::straight(spacing));
  }
  return spec;
}

ScenarioSpec route_scenario()
{
  struct Curve
  {
    double kappa;
    double arc;
    double straight;
  };
  const Curve curves[] = {{0.004, 100.0, 250.0}, {-0.003, 160.0, 180.0}, {0.005, 60.0, 300.0},
    {-0.0045, 80.0, 220.0}, {0.0025, 200.0, 200.0}, {-0.005, 50.0, 280.0}, {0.0035, 120.0, 160.0},
    {-0.004, 100.0, 240.0}, {0.0045, 70.0, 200.0}, {-0.0035, 110.0, 300.0}};
  ScenarioSpec spec;
  spec.segments.push_back(RoadSegment::straight(300.0));
  for (const auto & c : curves) {
    const double tr = 120.0;
    spec.segments.push_back(RoadSegment::transition(tr, 0.0, c.kappa));
    spec.segments.push_back(RoadSegment::arc(c.arc, c.kappa));
    spec.segments.push_back(RoadSegment::transition(tr, c.kappa, 0.0));
    spec.segments.push_back(RoadSegment::straight(c.straight));
  }
  return spec;
}

namespace
{

const char * kind_name(SegmentKind k)
{
  switch (k) {
    case SegmentKind::kStraight: return "straight";
    case SegmentKind::kArc: return "arc";
    case SegmentKind::kTransition: return "transition";
  }
  return "straight";
}

SegmentKind kind_from(const std::string & name)
{
  if (name == "straight") {
    return SegmentKind::kStraight;
  }
  if (name == "arc") {
    return SegmentKind::kArc;
  }
  if (name == "transition") {
    return SegmentKind::kTransition;
  }
  throw ValidationError("unknown road segment kind '" + name + "'");
}

}  // namespace

std::string scenario_to_json(const ScenarioSpec & spec)
{
  nlohmann::ordered_json j;
  j["lane_width"] = spec.lane_width;
  j["speed"] = spec.speed;
  j["start"] = {spec.start.x, spec.start.y, spec.start.theta};
  auto segs = nlohmann::ordered_json::array();
  for (const auto & seg : spec.segments) {
    nlohmann::ordered_json s;
    s["kind"] = kind_name(seg.kind);
    s["length"] = seg.length;
    if (seg.kind == SegmentKind::kArc) {
      s["kappa"] = seg.kappa_start;
    } else if (seg.kind == SegmentKind::kTransition) {
      s["kappa_start"] = seg.kappa_start;
      s["kappa_end"] = seg.kappa_end;
    }
    segs.push_back(s);
  }
  j["segments"] = segs;
  return j.dump(2) + "\n";
}

ScenarioSpec scenario_from_json(std::string_view text)
{
  ScenarioSpec spec;
  try {
    const auto j = nlohmann::json::parse(text);
    spec.lane_width = j.value("lane_width", kDefaultLaneWidth);
    spec.speed = j.value("speed", kDefaultSpeed);
    if (j.contains("start")) {
      const auto st = j.at("start").get<std::array<double, 3>>();
      spec.start = Pose(st[0], st[1], st[2]);
    }
    for (const auto & s : j.at("segments")) {
      RoadSegment seg;
      seg.kind = kind_from(s.at("kind").get<std::string>());
      seg.length = s.at("length").get<double>();
      if (seg.kind == SegmentKind::kArc) {
        seg.kappa_start = seg.kappa_end = s.at("kappa").get<double>();
      } else if (seg.kind == SegmentKind::kTransition) {
        seg.kappa_start = s.at("kappa_start").get<double>();
        seg.kappa_end = s.at("kappa_end").get<double>();
      }
      spec.segments.push_back(seg);
    }
  } catch (const nlohmann::json::exception & e) {
    throw ValidationError(std::string("scenario: ") + e.what());
  }
  spec.validate();
  return spec;
}

ScenarioSpec load_scenario(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open scenario file " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

}  // namespace curvepath
