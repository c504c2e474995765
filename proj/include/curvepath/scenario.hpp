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

#ifndef CURVEPATH__SCENARIO_HPP_
#define CURVEPATH__SCENARIO_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curvepath/geometry.hpp"

namespace curvepath
{

inline constexpr double kDefaultSpeed = 25.0;

enum class SegmentKind
{
  kStraight,
  kArc,
  kTransition,
};

/// Straight: both curvatures 0. Arc: constant curvature. Transition: linear in s.
struct RoadSegment
{
  SegmentKind kind{SegmentKind::kStraight};
  double length{0.0};
  double kappa_start{0.0};
  double kappa_end{0.0};

  static RoadSegment straight(double length) {return {SegmentKind::kStraight, length, 0.0, 0.0};}
  static RoadSegment arc(double length, double kappa) {return {SegmentKind::kArc, length, kappa, kappa};}
  static RoadSegment transition(double length, double k0, double k1)
  {
    return {SegmentKind::kTransition, length, k0, k1};
  }
};

struct ScenarioSpec
{
  std::vector<RoadSegment> segments;
  double lane_width{kDefaultLaneWidth};
  double speed{kDefaultSpeed};
  Pose start;

  /// Throws ValidationError on non-positive lengths or a curvature jump at a transition joint.
  void validate() const;
  double length() const;
  /// Every curvature negated: the same road reflected about the start heading.
  ScenarioSpec mirrored() const;
};

/// Global corridor sampled every `step` (plus every segment joint) on the exact clothoids.
Corridor build_scenario_road(const ScenarioSpec & spec, double step = kDefaultCorridorStep);

ScenarioSpec straight_scenario(double length = 1000.0);
/// Left curve then right curve of equal magnitude joined by clothoid transitions.
/// The transition between the two arcs is twice `transition` long.
ScenarioSpec s_curve_scenario(double kappa = 0.004, double transition = 120.0, double arc = 80.0,
  double approach = 300.0);
/// S-curves of the given magnitudes in sequence.
ScenarioSpec repeated_s_curve_scenario(std::span<const double> kappas, double spacing = 200.0,
  double transition = 120.0, double arc = 80.0);
/// Ten curves of both directions and varying magnitude.
ScenarioSpec route_scenario();

std::string scenario_to_json(const ScenarioSpec & spec);
ScenarioSpec scenario_from_json(std::string_view text);
ScenarioSpec load_scenario(const std::string & path);

}  // namespace curvepath

#endif  // CURVEPATH__SCENARIO_HPP_
