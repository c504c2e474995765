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
#include <numbers>
#include <random>

#include "curvepath/errors.hpp"
#include "curvepath/geometry.hpp"
#include "oracles.hpp"

namespace curvepath
{
namespace
{

LanePolynomial poly(double c0, double c1, double c2, double c3)
{
  LanePolynomial p;
  p.c0 = c0;
  p.c1 = c1;
  p.c2 = c2;
  p.c3 = c3;
  return p;
}

TEST(LanePolynomial, HandEvaluations)
{
  EXPECT_EQ(eval_lane_polynomial(poly(0, 0, 0, 0), 10.0), 0.0);
  EXPECT_EQ(eval_lane_polynomial(poly(0.5, 0, 0, 0), 20.0), 0.5);
  EXPECT_NEAR(eval_lane_polynomial(poly(0, 0, 0.001, 0), 100.0), 5.0, 1e-12);
  // Cubic term carries 1/6.
  EXPECT_NEAR(eval_lane_polynomial(poly(0, 0, 0, 6e-6), 100.0), 1.0, 1e-12);
}

TEST(LanePolynomial, PrintedFactorsConvention)
{
  auto p = poly(0, 0, 0.001, 1e-6);
  p.convention = PolynomialConvention::kPrintedFactors;
  EXPECT_NEAR(p.value(10.0), 2 * 0.001 * 100 + 6 * 1e-6 * 1000, 1e-12);
}

TEST(LanePolynomial, OutsidePreviewThrows)
{
  const auto p = poly(0, 0, 0, 0);
  EXPECT_THROW(eval_lane_polynomial(p, 151.0), RangeError);
  EXPECT_THROW(eval_lane_polynomial(p, -1.0), RangeError);
}

TEST(CorridorFromPolynomial, StraightHasZeroCurvature)
{
  const Corridor c = corridor_from_polynomial(poly(0, 0, 0, 0), 1.0);
  for (const auto & smp : c.samples()) {
    EXPECT_NEAR(smp.kappa, 0.0, 1e-15);
    EXPECT_NEAR(smp.heading, 0.0, 1e-15);
    EXPECT_NEAR(smp.s, smp.pose.x, 1e-9);
  }
}

TEST(CorridorFromPolynomial, OriginCurvatureAndHeading)
{
  EXPECT_NEAR(corridor_from_polynomial(poly(0, 0, 0.001, 0)).kappa_at(0.0), 0.001, 1e-9);
  EXPECT_NEAR(corridor_from_polynomial(poly(0, 0.1, 0, 0)).heading_at(0.0), 0.09967, 1e-5);
}

TEST(OffsetPoint, HandCases)
{
  const Pose a = offset_point(Pose(100, 5, 0), 0.0);
  EXPECT_DOUBLE_EQ(a.y, 5.0);
  const Pose b = offset_point(Pose(100, 5, 0), 1.0);
  EXPECT_DOUBLE_EQ(b.x, 100.0);
  EXPECT_DOUBLE_EQ(b.y, 6.0);
  const Pose c = offset_point(Pose(100, 5, 0.1), 0.3);
  EXPECT_NEAR(c.x, 99.97005, 1e-5);
  EXPECT_NEAR(c.y, 5.29850, 1e-5);
  EXPECT_DOUBLE_EQ(c.theta, 0.1);
}

TEST(PlanningFrame, HandCases)
{
  const Pose id = to_planning_frame(Pose(3, 4, 0.2), PlanningFrame{});
  EXPECT_DOUBLE_EQ(id.x, 3.0);
  EXPECT_DOUBLE_EQ(id.y, 4.0);
  const Pose t = to_planning_frame(Pose(15, 0, 0), PlanningFrame{Pose(10, 0, 0)});
  EXPECT_DOUBLE_EQ(t.x, 5.0);
  const Pose r = to_planning_frame(Pose(0, 5, std::numbers::pi / 2),
      PlanningFrame{Pose(0, 0, std::numbers::pi / 2)});
  EXPECT_NEAR(r.x, 5.0, 1e-12);
  EXPECT_NEAR(r.y, 0.0, 1e-12);
  EXPECT_NEAR(r.theta, 0.0, 1e-12);
}

TEST(Corridor, RejectsBadSamples)
{
  std::vector<CorridorSample> one{CorridorSample{}};
  EXPECT_THROW(Corridor(one, 3.7), ValidationError);
  std::vector<CorridorSample> two(2);
  two[1].s = 0.0;
  EXPECT_THROW(Corridor(two, 3.7), ValidationError);
  two[1].s = 1.0;
  EXPECT_THROW(Corridor(two, 0.0), ValidationError);
}

TEST(Corridor, ProjectionOfCirclePoint)
{
  // Road along a circle of radius 200 built from a densely sampled arc.
  std::vector<CorridorSample> smp;
  const double k = 0.005;
  for (int i = 0; i <= 400; ++i) {
    const auto q = oracle::circle_point(k, 0.5 * i);
    smp.push_back({0.5 * i, Pose(q.x, q.y, q.theta), q.theta, k});
  }
  const Corridor c(smp, 3.7);
  const auto q = oracle::circle_point(k, 123.4);
  // A point 0.7 m to the left of the road (towards the center).
  const Point2 p{q.x - 0.7 * std::sin(q.theta), q.y + 0.7 * std::cos(q.theta)};
  const Projection pr = c.project(p);
  EXPECT_NEAR(pr.s, 123.4, 1e-6);
  EXPECT_NEAR(pr.lateral, 0.7, 1e-6);
  EXPECT_NEAR(c.mean_curvature(10.0, 90.0), k, 1e-12);
}

// Hand-rolled generators for the properties below.
struct Rng
{
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double a, double b) {return std::uniform_real_distribution<double>(a, b)(gen);}
  Pose pose(double span)
  {
    return Pose(uniform(-span, span), uniform(-span, span), uniform(-3.1, 3.1));
  }
};

TEST(GeometryProperty, FrameRoundTrip)
{
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const PlanningFrame f{rng.pose(500.0)};
    const Pose p = rng.pose(500.0);
    const Pose back = from_planning_frame(to_planning_frame(p, f), f);
    ASSERT_NEAR(back.x, p.x, 1e-9);
    ASSERT_NEAR(back.y, p.y, 1e-9);
    ASSERT_NEAR(angle_difference(back.theta, p.theta), 0.0, 1e-12);
  }
}

TEST(GeometryProperty, OffsetMirror)
{
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const Pose n = rng.pose(100.0);
    const double d = rng.uniform(-2.0, 2.0);
    const Pose a = offset_point(n, d);
    const Pose b = offset_point(n, -d);
    ASSERT_NEAR(0.5 * (a.x + b.x), n.x, 1e-12);
    ASSERT_NEAR(0.5 * (a.y + b.y), n.y, 1e-12);
  }
}

TEST(GeometryProperty, HeadingMatchesCurvatureIntegral)
{
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    const auto p = poly(rng.uniform(-1, 1), rng.uniform(-0.05, 0.05),
        rng.uniform(-0.003, 0.003), rng.uniform(-1e-5, 1e-5));
    const Corridor c = corridor_from_polynomial(p, 0.5);
    const double a = rng.uniform(0.0, 0.4 * c.length());
    const double b = rng.uniform(0.6 * c.length(), c.length());
    // Trapezoidal integral of the sampled curvature.
    double integral = 0.0;
    const auto smp = c.samples();
    for (std::size_t j = 1; j < smp.size(); ++j) {
      const double lo = std::max(a, smp[j - 1].s);
      const double hi = std::min(b, smp[j].s);
      if (hi > lo) {
        integral += 0.5 * (c.kappa_at(lo) + c.kappa_at(hi)) * (hi - lo);
      }
    }
    ASSERT_NEAR(c.heading_at(b) - c.heading_at(a), integral, 1e-6);
  }
}

}  // namespace
}  // namespace curvepath
