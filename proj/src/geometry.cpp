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

#include "curvepath/geometry.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "curvepath/errors.hpp"

namespace curvepath
{

double normalize_angle(double angle)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::remainder(angle, two_pi);
  if (a <= -std::numbers::pi) {
    a += two_pi;
  }
  return a;
}

namespace
{

struct PolyFactors
{
  double k2;
  double k3;
};

PolyFactors factors(PolynomialConvention convention)
{
  switch (convention) {
    case PolynomialConvention::kPrintedFactors:
      return {2.0, 6.0};
    case PolynomialConvention::kCurvature:
    default:
      return {0.5, 1.0 / 6.0};
  }
}

}  // namespace

double LanePolynomial::value(double x) const
{
  const auto f = factors(convention);
  return c0 + x * (c1 + x * (f.k2 * c2 + x * f.k3 * c3));
}

double LanePolynomial::slope(double x) const
{
  const auto f = factors(convention);
  return c1 + x * (2.0 * f.k2 * c2 + 3.0 * x * f.k3 * c3);
}

double LanePolynomial::second_derivative(double x) const
{
  const auto f = factors(convention);
  return 2.0 * f.k2 * c2 + 6.0 * x * f.k3 * c3;
}

double eval_lane_polynomial(const LanePolynomial & poly, double x)
{
  if (!(poly.preview_length > 0.0)) {
    throw ValidationError("lane polynomial preview length must be positive");
  }
  if (!(x >= 0.0 && x <= poly.preview_length)) {
    throw RangeError("x = " + std::to_string(x) + " outside lane preview [0, " +
            std::to_string(poly.preview_length) + "]");
  }
  return poly.value(x);
}

double lateral_offset(const LanePolynomial & poly, Point2 p)
{
  double x = p.x;
  for (int it = 0; it < 50; ++it) {
    const double y = poly.value(x);
    const double dy = poly.slope(x);
    const double g = (x - p.x) + (y - p.y) * dy;
    double dg = 1.0 + dy * dy + (y - p.y) * poly.second_derivative(x);
    if (dg < 0.1) {
      dg = 1.0 + dy * dy;
    }
    const double step = g / dg;
    x -= step;
    if (std::abs(step) < 1e-13) {
      break;
    }
  }
  const double theta = std::atan(poly.slope(x));
  return -(p.x - x) * std::sin(theta) + (p.y - poly.value(x)) * std::cos(theta);
}

Corridor::Corridor(std::vector<CorridorSample> samples, double lane_width)
: samples_(std::move(samples)), lane_width_(lane_width)
{
  if (!(lane_width_ > 0.0)) {
    throw ValidationError("corridor lane width must be positive");
  }
  if (samples_.size() < 2) {
    throw ValidationError("corridor needs at least two samples");
  }
  if (samples_.front().s != 0.0) {
    throw ValidationError("corridor arc length must start at 0");
  }
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i].s > samples_[i - 1].s)) {
      throw ValidationError("corridor arc length must be strictly increasing at sample " +
              std::to_string(i));
    }
  }
}

std::size_t Corridor::segment_index(double s) const
{
  // Index i such that s lies in [s_i, s_{i+1}); the last segment also takes s == length.
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), s,
      [](double value, const CorridorSample & smp) {return value < smp.s;});
  std::size_t i = it == samples_.begin() ? 0 : static_cast<std::size_t>(it - samples_.begin()) - 1;
  return std::min(i, samples_.size() - 2);
}

double Corridor::heading_in_segment(std::size_t i, double u) const
{
  const auto & a = samples_[i];
  const auto & b = samples_[i + 1];
  const double h = b.s - a.s;
  const double r = u / h;
  return a.heading + a.kappa * u + (b.heading - a.heading - a.kappa * h) * r * r;
}

double Corridor::heading_at(double s) const
{
  s = std::clamp(s, 0.0, length());
  const std::size_t i = segment_index(s);
  return heading_in_segment(i, s - samples_[i].s);
}

double Corridor::kappa_at(double s) const
{
  s = std::clamp(s, 0.0, length());
  const std::size_t i = segment_index(s);
  const auto & a = samples_[i];
  const auto & b = samples_[i + 1];
  const double r = (s - a.s) / (b.s - a.s);
  return a.kappa + r * (b.kappa - a.kappa);
}

Point2 Corridor::position_at(double s) const
{
  s = std::clamp(s, 0.0, length());
  const std::size_t i = segment_index(s);
  const auto & a = samples_[i];
  const auto & b = samples_[i + 1];
  const double u = s - a.s;
  if (u == 0.0) {
    return a.pose.position();
  }
  const double h = b.s - a.s;
  auto simpson = [&](double len) {
      const double t0 = heading_in_segment(i, 0.0);
      const double tm = heading_in_segment(i, 0.5 * len);
      const double t1 = heading_in_segment(i, len);
      return Point2{len / 6.0 * (std::cos(t0) + 4.0 * std::cos(tm) + std::cos(t1)),
        len / 6.0 * (std::sin(t0) + 4.0 * std::sin(tm) + std::sin(t1))};
    };
  const Point2 part = simpson(u);
  const Point2 full = simpson(h);
  // Distribute the closure mismatch linearly so the interpolant hits both samples.
  const double r = u / h;
  const double ex = b.pose.x - a.pose.x - full.x;
  const double ey = b.pose.y - a.pose.y - full.y;
  return {a.pose.x + part.x + r * ex, a.pose.y + part.y + r * ey};
}

Pose Corridor::pose_at(double s) const
{
  const Point2 p = position_at(s);
  return Pose(p.x, p.y, heading_at(s));
}

double Corridor::mean_curvature(double s0, double s1) const
{
  if (s1 == s0) {
    return kappa_at(s0);
  }
  return (heading_at(s1) - heading_at(s0)) / (s1 - s0);
}

Projection Corridor::project(Point2 p, double s_lo, double s_hi) const
{
  s_lo = std::clamp(s_lo, 0.0, length());
  s_hi = std::clamp(s_hi, s_lo, length());

  auto first = std::lower_bound(samples_.begin(), samples_.end(), s_lo,
      [](const CorridorSample & smp, double value) {return smp.s < value;});
  auto last = std::upper_bound(samples_.begin(), samples_.end(), s_hi,
      [](double value, const CorridorSample & smp) {return value < smp.s;});
  double best_s = s_lo;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (auto it = first; it != last; ++it) {
    const double dx = p.x - it->pose.x;
    const double dy = p.y - it->pose.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2) {
      best_d2 = d2;
      best_s = it->s;
    }
  }

  double s = best_s;
  for (int it = 0; it < 40; ++it) {
    const Pose c = pose_at(s);
    const double ct = std::cos(c.theta);
    const double st = std::sin(c.theta);
    const double ex = p.x - c.x;
    const double ey = p.y - c.y;
    const double along = ex * ct + ey * st;
    const double lat = -ex * st + ey * ct;
    double denom = 1.0 - kappa_at(s) * lat;
    if (denom < 0.1) {
      denom = 1.0;
    }
    const double next = std::clamp(s + along / denom, s_lo, s_hi);
    const double step = next - s;
    s = next;
    if (std::abs(step) < 1e-13 * (1.0 + std::abs(s))) {
      break;
    }
  }
  const Pose c = pose_at(s);
  const double ex = p.x - c.x;
  const double ey = p.y - c.y;
  Projection out;
  out.s = s;
  out.lateral = -ex * std::sin(c.theta) + ey * std::cos(c.theta);
  out.distance = std::hypot(ex, ey);
  return out;
}

Corridor Corridor::transformed(const Pose & frame) const
{
  std::vector<CorridorSample> out(samples_);
  const PlanningFrame f{frame};
  for (auto & smp : out) {
    smp.pose = from_planning_frame(smp.pose, f);
    smp.heading += frame.theta;
  }
  return Corridor(std::move(out), lane_width_);
}

Corridor corridor_from_polynomial(const LanePolynomial & poly, double step, double lane_width)
{
  if (!(step > 0.0)) {
    throw ValidationError("corridor sampling step must be positive");
  }
  if (!(poly.preview_length > 0.0)) {
    throw ValidationError("lane polynomial preview length must be positive");
  }
  const auto n = static_cast<std::size_t>(std::floor(poly.preview_length / step + 1e-9));
  std::vector<double> xs;
  xs.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) {
    xs.push_back(static_cast<double>(i) * step);
  }
  if (poly.preview_length - xs.back() > 1e-9 * step) {
    xs.push_back(poly.preview_length);
  }

  std::vector<CorridorSample> samples;
  samples.reserve(xs.size());
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double y = poly.value(x);
    const double dy = poly.slope(x);
    const double ddy = poly.second_derivative(x);
    if (i > 0) {
      s += std::hypot(x - xs[i - 1], y - samples.back().pose.y);
    }
    CorridorSample smp;
    smp.s = s;
    smp.heading = std::atan(dy);
    smp.pose = Pose(x, y, smp.heading);
    smp.kappa = ddy / std::pow(1.0 + dy * dy, 1.5);
    samples.push_back(smp);
  }
  return Corridor(std::move(samples), lane_width);
}

Pose offset_point(const Pose & nominal, double delta)
{
  return Pose(nominal.x - delta * std::sin(nominal.theta),
           nominal.y + delta * std::cos(nominal.theta), nominal.theta);
}

Point2 to_planning_frame(Point2 global, const PlanningFrame & frame)
{
  const double c = std::cos(frame.origin.theta);
  const double s = std::sin(frame.origin.theta);
  const double dx = global.x - frame.origin.x;
  const double dy = global.y - frame.origin.y;
  return {c * dx + s * dy, -s * dx + c * dy};
}

Point2 from_planning_frame(Point2 local, const PlanningFrame & frame)
{
  const double c = std::cos(frame.origin.theta);
  const double s = std::sin(frame.origin.theta);
  return {frame.origin.x + c * local.x - s * local.y, frame.origin.y + s * local.x + c * local.y};
}

Pose to_planning_frame(const Pose & global, const PlanningFrame & frame)
{
  const Point2 p = to_planning_frame(global.position(), frame);
  return Pose(p.x, p.y, global.theta - frame.origin.theta);
}

Pose from_planning_frame(const Pose & local, const PlanningFrame & frame)
{
  const Point2 p = from_planning_frame(local.position(), frame);
  return Pose(p.x, p.y, local.theta + frame.origin.theta);
}

}  // namespace curvepath
