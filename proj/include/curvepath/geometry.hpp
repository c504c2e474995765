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

#ifndef CURVEPATH__GEOMETRY_HPP_
#define CURVEPATH__GEOMETRY_HPP_

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace curvepath
{

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

/// Signed smallest difference a - b, wrapped into (-pi, pi].
inline double angle_difference(double a, double b) {return normalize_angle(a - b);}

struct Point2
{
  double x{0.0};
  double y{0.0};
};

/// Planar pose, heading counterclockwise positive.
struct Pose
{
  double x{0.0};
  double y{0.0};
  double theta{0.0};

  Pose() = default;
  Pose(double x_, double y_, double theta_)
  : x(x_), y(y_), theta(normalize_angle(theta_)) {}

  Point2 position() const {return {x, y};}
};

/// How the cubic lane model scales its quadratic and cubic coefficients.
enum class PolynomialConvention
{
  /// y = c0 + c1 x + c2/2 x^2 + c3/6 x^3, so c2 is the curvature at x = 0.
  kCurvature,
  /// y = c0 + c1 x + 2 c2 x^2 + 6 c3 x^3, the factors as printed in some lane-detector docs.
  kPrintedFactors,
};

inline constexpr PolynomialConvention kDefaultPolynomialConvention = PolynomialConvention::kCurvature;
inline constexpr double kDefaultPreviewLength = 150.0;
inline constexpr double kDefaultLaneWidth = 3.70;
inline constexpr double kDefaultCorridorStep = 0.5;

/// Third-order lane midline expressed in a vehicle frame (x forward, y left).
struct LanePolynomial
{
  double c0{0.0};  ///< lateral distance [m]
  double c1{0.0};  ///< slope [-]
  double c2{0.0};  ///< curvature [1/m]
  double c3{0.0};  ///< curvature rate [1/m^2]
  double preview_length{kDefaultPreviewLength};
  PolynomialConvention convention{kDefaultPolynomialConvention};

  /// y(x), y'(x), y''(x) without range checks.
  double value(double x) const;
  double slope(double x) const;
  double second_derivative(double x) const;
};

/// Lateral offset of the midline at longitudinal distance x. Throws RangeError outside [0, preview].
double eval_lane_polynomial(const LanePolynomial & poly, double x);

/// Signed perpendicular distance of `p` to the polynomial midline, positive left.
/// Uses the unrestricted polynomial, so points slightly behind x = 0 are fine.
double lateral_offset(const LanePolynomial & poly, Point2 p);

struct CorridorSample
{
  double s{0.0};
  Pose pose;
  double heading{0.0};  ///< unwrapped heading, continuous along s
  double kappa{0.0};
};

struct Projection
{
  double s{0.0};
  double lateral{0.0};  ///< positive left of the midline
  double distance{0.0};
};

/// Arc-length parameterized road midline with a constant lane width.
class Corridor
{
public:
  Corridor() = default;
  /// Validates: at least two samples, s starts at 0 and strictly increases, lane width > 0.
  Corridor(std::vector<CorridorSample> samples, double lane_width);

  double length() const {return samples_.empty() ? 0.0 : samples_.back().s;}
  double lane_width() const {return lane_width_;}
  std::span<const CorridorSample> samples() const {return samples_;}
  bool empty() const {return samples_.empty();}

  // Interpolation between samples treats curvature as piecewise linear and
  // integrates position with Simpson's rule; exact at the samples.
  Pose pose_at(double s) const;
  double heading_at(double s) const;
  double kappa_at(double s) const;
  Point2 position_at(double s) const;

  /// Integral mean of the curvature over [s0, s1], i.e. heading change over arc length.
  double mean_curvature(double s0, double s1) const;

  /// Orthogonal projection restricted to [s_lo, s_hi]; clamps at the ends.
  Projection project(Point2 p, double s_lo = 0.0,
    double s_hi = std::numeric_limits<double>::infinity()) const;

  /// Same road, sample poses mapped through `frame` (local -> global).
  Corridor transformed(const Pose & frame) const;

private:
  std::size_t segment_index(double s) const;
  double heading_in_segment(std::size_t i, double u) const;

  std::vector<CorridorSample> samples_;
  double lane_width_{kDefaultLaneWidth};
};

/// Samples the polynomial every `step` in x over [0, preview]; s accumulates chord length.
Corridor corridor_from_polynomial(const LanePolynomial & poly, double step = kDefaultCorridorStep,
  double lane_width = kDefaultLaneWidth);

/// Moves a midline pose sideways by delta (positive left); heading is kept.
Pose offset_point(const Pose & nominal, double delta);

struct PlanningFrame
{
  Pose origin;
};

Pose to_planning_frame(const Pose & global, const PlanningFrame & frame);
Pose from_planning_frame(const Pose & local, const PlanningFrame & frame);
Point2 to_planning_frame(Point2 global, const PlanningFrame & frame);
Point2 from_planning_frame(Point2 local, const PlanningFrame & frame);

inline double distance(Point2 a, Point2 b) {return std::hypot(a.x - b.x, a.y - b.y);}

}  // namespace curvepath

#endif  // CURVEPATH__GEOMETRY_HPP_
