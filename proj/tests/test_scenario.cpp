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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "curvepath/errors.hpp"
#include "curvepath/scenario.hpp"
#include "oracles.hpp"

namespace curvepath
{
namespace
{

TEST(BuildScenarioRoad, StraightHasZeroCurvature)
{
  const Corridor road = build_scenario_road(straight_scenario(1000.0));
  EXPECT_NEAR(road.length(), 1000.0, 1e-9);
  for (const auto & smp : road.samples()) {
    ASSERT_EQ(smp.kappa, 0.0);
    ASSERT_NEAR(smp.pose.y, 0.0, 1e-12);
  }
}

TEST(BuildScenarioRoad, ArcHeadingChange)
{
  ScenarioSpec spec;
  spec.segments = {RoadSegment::straight(200.0), RoadSegment::arc(300.0, 0.005),
    RoadSegment::straight(100.0)};
  const Corridor road = build_scenario_road(spec);
  EXPECT_NEAR(road.heading_at(500.0) - road.heading_at(200.0), 1.5, 1e-12);
  EXPECT_NEAR(road.heading_at(600.0), 1.5, 1e-12);
}

TEST(BuildScenarioRoad, MatchesSpiralOracle)
{
  ScenarioSpec spec;
  spec.segments = {RoadSegment::transition(150.0, 0.0, 0.006), RoadSegment::arc(50.0, 0.006)};
  spec.start = Pose(5.0, -3.0, 0.4);
  const Corridor road = build_scenario_road(spec);
  const auto end_transition = oracle::spiral_ode({5.0, -3.0, 0.4}, 0.0, 0.006 / 150.0, 150.0);
  const Pose p = road.pose_at(150.0);
  EXPECT_NEAR(p.x, end_transition.x, 1e-9);
  EXPECT_NEAR(p.y, end_transition.y, 1e-9);
  const auto end_arc = oracle::spiral_ode(end_transition, 0.006, 0.0, 50.0);
  const Pose q = road.pose_at(200.0);
  EXPECT_NEAR(q.x, end_arc.x, 1e-9);
  EXPECT_NEAR(q.y, end_arc.y, 1e-9);
}

TEST(BuildScenarioRoad, SCurveIsAntisymmetric)
{
  const ScenarioSpec spec = s_curve_scenario(0.008, 40.0, 60.0, 100.0);
  const Corridor road = build_scenario_road(spec);
  // Left arc, double-length tip transition, right arc: symmetric about the tip.
  const double tip = 100.0 + 40.0 + 60.0 + 40.0;
  for (double u = 0.0; u <= 140.0; u += 2.5) {
    ASSERT_NEAR(road.kappa_at(tip + u), -road.kappa_at(tip - u), 1e-12);
  }
  EXPECT_NEAR(road.kappa_at(150.0), 0.008, 1e-15);
}

TEST(ScenarioSpec, Validation)
{
  ScenarioSpec bad;
  bad.segments = {RoadSegment::straight(-1.0)};
  EXPECT_THROW(bad.validate(), ValidationError);
  ScenarioSpec jump;
  jump.segments = {RoadSegment::arc(50.0, 0.004), RoadSegment::transition(50.0, 0.0, 0.004)};
  EXPECT_THROW(jump.validate(), ValidationError);
  ScenarioSpec empty;
  EXPECT_THROW(empty.validate(), ValidationError);
}

TEST(ScenarioSpec, MirroredRoadReflects)
{
  const ScenarioSpec spec = s_curve_scenario();
  const Corridor a = build_scenario_road(spec);
  const Corridor b = build_scenario_road(spec.mirrored());
  for (double s = 0.0; s < a.length(); s += 17.0) {
    ASSERT_NEAR(a.position_at(s).x, b.position_at(s).x, 1e-9);
    ASSERT_NEAR(a.position_at(s).y, -b.position_at(s).y, 1e-9);
  }
}

TEST(ScenarioJson, RoundTrip)
{
  ScenarioSpec spec = s_curve_scenario();
  spec.start = Pose(1.0, 2.0, 0.3);
  spec.lane_width = 3.5;
  const ScenarioSpec back = scenario_from_json(scenario_to_json(spec));
  ASSERT_EQ(back.segments.size(), spec.segments.size());
  for (std::size_t i = 0; i < spec.segments.size(); ++i) {
    EXPECT_EQ(back.segments[i].kind, spec.segments[i].kind);
    EXPECT_EQ(back.segments[i].length, spec.segments[i].length);
    EXPECT_EQ(back.segments[i].kappa_end, spec.segments[i].kappa_end);
  }
  EXPECT_EQ(back.lane_width, 3.5);
  EXPECT_EQ(back.start.theta, 0.3);
  EXPECT_THROW(scenario_from_json("{\"segments\": [{\"kind\": \"loop\"}]}"), ValidationError);
  EXPECT_THROW(load_scenario("/nonexistent/road.json"), ValidationError);
}

TEST(RouteScenario, IsLongAndCurved)
{
  const ScenarioSpec spec = route_scenario();
  EXPECT_NO_THROW(spec.validate());
  EXPECT_GT(spec.length(), 5000.0);
}

}  // namespace
}  // namespace curvepath
