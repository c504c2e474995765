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
#include <functional>
#include <random>
#include <sstream>

#include "curvepath/errors.hpp"
#include "curvepath/evaluation.hpp"
#include "curvepath/scenario.hpp"

namespace curvepath
{
namespace
{

Corridor single_arc_road()
{
  ScenarioSpec spec;
  spec.segments = {RoadSegment::straight(300.0), RoadSegment::arc(300.0, 0.005),
    RoadSegment::straight(300.0)};
  return build_scenario_road(spec);
}

SimTrace trace_along(const Corridor & road, double s0, double s1,
  const std::function<double(double)> & offset, double step = 1.25)
{
  SimTrace t;
  std::int64_t cycle = 0;
  for (double s = s0; s <= s1; s += step) {
    const Pose p = offset_point(road.pose_at(s), offset(s));
    t.samples.push_back({cycle++, p, offset(s), 0});
  }
  return t;
}

TEST(DetectCurveSegments, Construction)
{
  EXPECT_TRUE(detect_curve_segments(build_scenario_road(straight_scenario())).empty());
  const auto one = detect_curve_segments(single_arc_road());
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].direction, CurveDirection::kLeft);
  EXPECT_NEAR(one[0].start, 300.0, 0.5);
  EXPECT_NEAR(one[0].end, 600.0, 0.5);
  EXPECT_DOUBLE_EQ(one[0].peak_kappa, 0.005);
  const auto two = detect_curve_segments(build_scenario_road(s_curve_scenario()));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].direction, CurveDirection::kLeft);
  EXPECT_EQ(two[1].direction, CurveDirection::kRight);
  EXPECT_THROW(detect_curve_segments(single_arc_road(), {0.0, 50.0}), ValidationError);
}

TEST(SafetyMetrics, MidlineAndViolation)
{
  const Corridor road = single_arc_road();
  const auto segs = detect_curve_segments(road);
  const auto mid = safety_metrics(trace_along(road, 0.0, 880.0, [](double) {return 0.0;}), road,
      VehicleSpec{1.8}, segs);
  EXPECT_EQ(mid.border_violation_ratio, 0.0);
  EXPECT_NEAR(mid.min_border_distance, 0.95, 1e-9);
  ASSERT_EQ(mid.segments.size(), 1u);
  EXPECT_GT(mid.segments[0].samples, 200u);
  const auto off = safety_metrics(trace_along(road, 0.0, 880.0, [](double) {return 1.0;}), road,
      VehicleSpec{1.8}, segs);
  EXPECT_EQ(off.border_violation_ratio, 1.0);
  EXPECT_EQ(off.min_border_distance, 0.0);
  EXPECT_THROW(safety_metrics(SimTrace{}, road, VehicleSpec{0.0}, segs), ValidationError);
}

TEST(PerformanceMetrics, SelfAndMirror)
{
  const Corridor road = single_arc_road();
  const auto segs = detect_curve_segments(road);
  auto wave = [](double s) {return 0.3 * std::sin(s / 40.0) + (std::sin(s / 40.0) > 0 ? 0.05 : -0.05);};
  const SimTrace human = trace_along(road, 0.0, 880.0, wave);
  const auto self = performance_metrics(human, human, road, segs);
  EXPECT_NEAR(self.avg_distance, 0.0, 1e-9);
  EXPECT_NEAR(self.max_distance, 0.0, 1e-9);
  EXPECT_EQ(self.side_correctness, 1.0);
  const SimTrace mirror = trace_along(road, 0.0, 880.0, [&](double s) {return -wave(s);});
  EXPECT_EQ(performance_metrics(mirror, human, road, segs).side_correctness, 0.0);
  // A planned path 0.2 m to the left of the human everywhere.
  const SimTrace shifted = trace_along(road, 0.0, 880.0, [&](double s) {return wave(s) + 0.2;});
  EXPECT_NEAR(performance_metrics(shifted, human, road, segs).avg_distance, 0.2, 2e-3);
}

TEST(PerformanceMetrics, NoSamplesInSegments)
{
  const Corridor road = single_arc_road();
  const auto segs = detect_curve_segments(road);
  const SimTrace before = trace_along(road, 0.0, 250.0, [](double) {return 0.0;});
  EXPECT_THROW(performance_metrics(before, before, road, segs), ValidationError);
}

TEST(EvaluationProperty, SafetyMonotoneInWidth)
{
  const Corridor road = build_scenario_road(s_curve_scenario());
  const auto segs = detect_curve_segments(road);
  std::mt19937_64 gen(61);
  std::uniform_real_distribution<double> amp(0.0, 1.2);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = amp(gen);
    const double w = 20.0 + 60.0 * amp(gen);
    const SimTrace t = trace_along(road, 0.0, road.length() - 1.0,
        [&](double s) {return a * std::sin(s / w);});
    double ratio = -1.0;
    double min_d = 1e9;
    for (double width = 1.0; width <= 3.0; width += 0.1) {
      const auto r = safety_metrics(t, road, VehicleSpec{width}, segs);
      ASSERT_GE(r.border_violation_ratio, ratio);
      ASSERT_LE(r.min_border_distance, min_d);
      ratio = r.border_violation_ratio;
      min_d = r.min_border_distance;
    }
  }
}

TEST(EvaluationProperty, SegmentRestriction)
{
  const Corridor road = single_arc_road();
  const auto segs = detect_curve_segments(road);
  std::mt19937_64 gen(62);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(gen);
    const double b = u(gen);
    auto planned_off = [&](double s) {return a * std::sin(s / 30.0);};
    auto human_off = [&](double s) {return b * std::cos(s / 45.0);};
    const SimTrace planned = trace_along(road, 200.0, 700.0, planned_off);
    const SimTrace human = trace_along(road, 200.0, 700.0, human_off);
    // Extra samples well away from the curve, beyond the boundary margin.
    const SimTrace planned_x = trace_along(road, 0.0, 890.0, planned_off);
    const SimTrace human_x = trace_along(road, 0.0, 890.0, human_off);
    const auto r0 = performance_metrics(planned, human, road, segs);
    const auto r1 = performance_metrics(planned_x, human_x, road, segs);
    ASSERT_EQ(r0.samples, r1.samples);
    ASSERT_DOUBLE_EQ(r0.avg_distance, r1.avg_distance);
    ASSERT_DOUBLE_EQ(r0.max_distance, r1.max_distance);
    ASSERT_DOUBLE_EQ(r0.side_correctness, r1.side_correctness);
  }
}

TEST(EvaluationProperty, ReportCsvRoundTrip)
{
  std::mt19937_64 gen(63);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<DriverReport> reports;
  for (int i = 0; i < 15; ++i) {
    DriverReport r;
    r.driver_id = "driver_" + std::to_string(i);
    r.safety.border_violation_ratio = u(gen) * 0.1;
    r.safety.min_border_distance = u(gen);
    r.performance.avg_distance = u(gen) * 0.05;
    r.performance.max_distance = u(gen) * 0.3;
    r.performance.side_correctness = u(gen);
    reports.push_back(r);
  }
  std::stringstream safety;
  std::stringstream perf;
  write_safety_csv(safety, reports);
  write_performance_csv(perf, reports);
  EXPECT_EQ(safety.str().substr(0, kSafetyHeader.size()), kSafetyHeader);
  EXPECT_EQ(perf.str().substr(0, kPerformanceHeader.size()), kPerformanceHeader);
  const auto back = read_reports_csv(safety, perf);
  ASSERT_EQ(back.size(), reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    EXPECT_EQ(back[i].driver_id, reports[i].driver_id);
    EXPECT_NEAR(back[i].safety.border_violation_ratio, reports[i].safety.border_violation_ratio,
      1e-15);
    EXPECT_EQ(back[i].safety.min_border_distance, reports[i].safety.min_border_distance);
    EXPECT_EQ(back[i].performance.avg_distance, reports[i].performance.avg_distance);
    EXPECT_NEAR(back[i].performance.side_correctness, reports[i].performance.side_correctness,
      1e-15);
  }
}

TEST(CaseStudy, FileShapes)
{
  const Corridor road = single_arc_road();
  const auto segs = detect_curve_segments(road);
  const SimTrace mid = trace_along(road, 0.0, 880.0, [](double) {return 0.0;});
  const auto data = case_study_data(mid, mid, road, segs[0]);
  ASSERT_FALSE(data.rows.empty());
  for (const auto & row : data.rows) {
    ASSERT_NEAR(row.planned_offset, 0.0, 1e-9);
    ASSERT_NEAR(row.ref_offset, 0.0, 1e-9);
  }
  const auto dir = std::filesystem::temp_directory_path() / "curvepath_case_study_test";
  std::filesystem::remove_all(dir);
  emit_case_study(data, dir);
  auto columns = [](const std::filesystem::path & p) {
      std::ifstream in(p);
      std::string header;
      std::getline(in, header);
      return std::count(header.begin(), header.end(), ',') + 1;
    };
  EXPECT_EQ(columns(dir / "offsets.csv"), 3);
  EXPECT_EQ(columns(dir / "curvature.csv"), 5);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace curvepath
