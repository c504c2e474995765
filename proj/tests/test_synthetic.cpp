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

#include <sstream>

#include "curvepath/calibration.hpp"
#include "curvepath/errors.hpp"
#include "curvepath/scenario.hpp"
#include "curvepath/synthetic.hpp"

namespace curvepath
{
namespace
{

GainMatrix truth()
{
  GainMatrix g;
  g.p << 18, 2.5, -1, -3, 26, 4, 2, -5, 31;
  return g;
}

TEST(PerceiveLane, StraightRoadOffsetEgo)
{
  const Corridor road = build_scenario_road(straight_scenario());
  const auto p = perceive_lane(road, Pose(100.0, 0.4, 0.0), 150.0);
  EXPECT_NEAR(p.lane.c0, -0.4, 1e-9);
  EXPECT_NEAR(p.lane.c1, 0.0, 1e-9);
  EXPECT_NEAR(p.lane.c2, 0.0, 1e-9);
  EXPECT_NEAR(p.residual_rms, 0.0, 1e-9);
  EXPECT_NEAR(p.road_s, 100.0, 1e-6);
}

TEST(PerceiveLane, ConstantArcCurvature)
{
  ScenarioSpec spec;
  spec.segments = {RoadSegment::arc(600.0, 0.002)};
  const auto p = perceive_lane(build_scenario_road(spec), Pose(0, 0, 0), 150.0);
  // A cubic cannot represent the circle exactly over 150 m.
  EXPECT_NEAR(p.lane.c2, 0.002, 1e-4);
  auto printed = perceive_lane(build_scenario_road(spec), Pose(0, 0, 0), 150.0,
      PolynomialConvention::kPrintedFactors);
  EXPECT_NEAR(printed.lane.c2 * 4.0, p.lane.c2, 1e-12);
}

TEST(SyntheticLog, StraightSigmaZeroStaysOnMidline)
{
  SyntheticDriverSpec driver;
  driver.gains_true = truth();
  const DriveLog log = generate_synthetic_driver_log(build_scenario_road(straight_scenario()),
      driver, NodePointParams{});
  ASSERT_GT(log.size(), 500u);
  for (const auto & r : log.records) {
    ASSERT_NEAR(r.pose.y, 0.0, 1e-6);
  }
}

TEST(SyntheticLog, CalibrationRoundTrip)
{
  SyntheticDriverSpec driver;
  driver.gains_true = truth();
  const Corridor road = build_scenario_road(route_scenario());
  const DriveLog log = generate_synthetic_driver_log(road, driver, NodePointParams{});
  const auto cal = fit_gain_matrix(assemble_dataset(log, NodePointParams{}));
  EXPECT_LT((cal.gains.p - truth().p).norm(), 1e-9);
}

TEST(SyntheticLog, SameSeedIsBitIdentical)
{
  SyntheticDriverSpec driver;
  driver.gains_true = truth();
  driver.offset_noise_sigma = 0.05;
  driver.seed = 77;
  SyntheticLogOptions opt;
  opt.max_cycles = 1500;
  const Corridor road = build_scenario_road(route_scenario());
  std::ostringstream a;
  std::ostringstream b;
  write_drive_log(a, generate_synthetic_driver_log(road, driver, NodePointParams{}, 30, opt));
  write_drive_log(b, generate_synthetic_driver_log(road, driver, NodePointParams{}, 30, opt));
  EXPECT_EQ(a.str(), b.str());
  driver.seed = 78;
  std::ostringstream c;
  write_drive_log(c, generate_synthetic_driver_log(road, driver, NodePointParams{}, 30, opt));
  EXPECT_NE(a.str(), c.str());
}

TEST(SyntheticLog, RecordsAreContiguous)
{
  SyntheticDriverSpec driver;
  driver.gains_true = truth();
  SyntheticLogOptions opt;
  opt.max_cycles = 400;
  const DriveLog log = generate_synthetic_driver_log(build_scenario_road(s_curve_scenario()),
      driver, NodePointParams{}, 30, opt);
  EXPECT_EQ(log.size(), 400u);
  EXPECT_NO_THROW(log.validate());
  EXPECT_DOUBLE_EQ(log.records[1].t - log.records[0].t, 0.05);
}

TEST(SyntheticDriverSpec, Validation)
{
  SyntheticDriverSpec d;
  d.offset_noise_sigma = -1.0;
  EXPECT_THROW(d.validate(), ValidationError);
  d.offset_noise_sigma = 0.0;
  d.gains_true.p(0, 0) = std::nan("");
  EXPECT_THROW(d.validate(), ValidationError);
}

TEST(SynthesizeDataset, OffsetsAreGainsTimesInputs)
{
  SyntheticDriverSpec driver;
  driver.gains_true = truth();
  const auto d = synthesize_dataset(build_scenario_road(route_scenario()), driver,
      NodePointParams{}, 64);
  EXPECT_LT((d.offsets - truth().p * d.inputs).cwiseAbs().maxCoeff(), 1e-15);
}

}  // namespace
}  // namespace curvepath
