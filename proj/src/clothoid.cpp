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

#include "curvepath/clothoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "curvepath/errors.hpp"

namespace curvepath
{

namespace detail
{

namespace
{

constexpr std::array<double, 5> kGaussNodes = {
  0.1488743389816312108848260, 0.4333953941292471907992659, 0.6794095682990244062343274,
  0.8650633666889845107320967, 0.9739065285171717200779640};
constexpr std::array<double, 5> kGaussWeights = {
  0.2955242247147528701738930, 0.2692667193099963550912269, 0.2190863625159820439955349,
  0.1494513491505805931457763, 0.0666713443086881375935688};

std::complex<double> straight_or_arc(double b, double c)
{
  // (exp(i b) - 1) / (i b)
  double re;
  double im;
  if (std::abs(b) < 1e-4) {
    const double b2 = b * b;
    re = 1.0 - b2 / 6.0 * (1.0 - b2 / 20.0);
    im = b / 2.0 * (1.0 - b2 / 12.0 * (1.0 - b2 / 30.0));
  } else {
    const double h = std::sin(0.5 * b);
    re = std::sin(b) / b;
    im = 2.0 * h * h / b;
  }
  return std::complex<double>(re, im) * std::polar(1.0, c);
}

}  // namespace

std::array<std::complex<double>, 3> phase_moments(double a, double b, double c, int max_moment)
{
  std::array<std::complex<double>, 3> out{};
  if (a == 0.0 && max_moment == 0) {
    out[0] = straight_or_arc(b, c);
    return out;
  }
  const double rate = std::max(std::abs(b), std::abs(a + b));
  const int panels = std::max(1, static_cast<int>(std::ceil(rate)));
  const double width = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    for (std::size_t j = 0; j < kGaussNodes.size(); ++j) {
      for (double sign : {-1.0, 1.0}) {
        const double t = mid + sign * 0.5 * width * kGaussNodes[j];
        const double w = 0.5 * width * kGaussWeights[j];
        const double phase = (0.5 * a * t + b) * t + c;
        const std::complex<double> e(w * std::cos(phase), w * std::sin(phase));
        out[0] += e;
        if (max_moment >= 1) {
          out[1] += t * e;
        }
        if (max_moment >= 2) {
          out[2] += t * t * e;
        }
      }
    }
  }
  return out;
}

}  // namespace detail

Pose evaluate_unchecked(const ClothoidSegment & segment, double s)
{
  if (s == 0.0) {
    return segment.start;
  }
  const auto m = detail::phase_moments(segment.kappa_rate * s * s, segment.kappa0 * s,
      segment.start.theta, 0);
  return Pose(segment.start.x + s * m[0].real(), segment.start.y + s * m[0].imag(),
           segment.start.theta + segment.heading_change(s));
}

Pose evaluate(const ClothoidSegment & segment, double s)
{
  if (!(s >= 0.0 && s <= segment.length)) {
    throw RangeError("arc length " + std::to_string(s) + " outside clothoid [0, " +
            std::to_string(segment.length) + "]");
  }
  return evaluate_unchecked(segment, s);
}

namespace
{

double initial_guess(double phi0, double phi1)
{
  // Polynomial fit of the loop-free root over (-pi, pi)^2 (Bertolazzi & Frego).
  constexpr std::array<double, 6> cf = {2.989696028701907, 0.716228953608281,
    -0.458969738821509, -0.502821153340377, 0.261062141752652, -0.045854475238709};
  double x = phi0 / std::numbers::pi;
  double y = phi1 / std::numbers::pi;
  const double xy = x * y;
  x *= x;
  y *= y;
  return (phi0 + phi1) *
         (cf[0] + xy * (cf[1] + xy * cf[2]) + (cf[3] + xy * cf[4]) * (x + y) +
         cf[5] * (x * x + y * y));
}

struct ClosureEval
{
  double g;
  double dg;
  double x;
};

class ChordProblem
{
public:
  ChordProblem(double phi0, double phi1)
  : phi0_(phi0), delta_(phi1 - phi0) {}

  ClosureEval operator()(double a) const
  {
    const auto m = detail::phase_moments(2.0 * a, delta_ - a, phi0_, 2);
    return {m[0].imag(), (m[2] - m[1]).real(), m[0].real()};
  }

  bool loop_free(double a, double x) const
  {
    if (!(x > 0.0)) {
      return false;
    }
    if (a == 0.0) {
      return true;
    }
    const double t = (a - delta_) / (2.0 * a);
    if (t <= 0.0 || t >= 1.0) {
      return true;
    }
    const double phi = phi0_ + (delta_ - a) * t + a * t * t;
    return std::abs(phi) < std::numbers::pi;
  }

  double delta() const {return delta_;}

private:
  double phi0_;
  double delta_;
};

}  // namespace

ClothoidSegment fit_g1(const Pose & start, const Pose & end, const G1Options & options)
{
  const double dx = end.x - start.x;
  const double dy = end.y - start.y;
  const double chord = std::hypot(dx, dy);
  if (!(chord >= 1e-6)) {
    throw DegenerateInputError("G1 endpoints coincide (chord " + std::to_string(chord) + " m)");
  }
  const double phi = std::atan2(dy, dx);
  const double phi0 = normalize_angle(start.theta - phi);
  const double phi1 = normalize_angle(end.theta - phi);
  if (std::abs(phi0) >= std::numbers::pi || std::abs(phi1) >= std::numbers::pi) {
    throw DegenerateInputError("G1 heading points exactly against the chord");
  }

  const ChordProblem problem(phi0, phi1);
  int iterations = 0;
  double best_residual = std::numeric_limits<double>::infinity();

  auto finish = [&](double a, double x) {
      ClothoidSegment seg;
      seg.start = start;
      seg.length = chord / x;
      seg.kappa0 = (problem.delta() - a) / seg.length;
      seg.kappa_rate = 2.0 * a / (seg.length * seg.length);
      return seg;
    };

  // Plain Newton from the guess converges in a handful of steps for road geometry.
  const double guess = initial_guess(phi0, phi1);
  double a = guess;
  while (iterations < options.max_iterations) {
    const ClosureEval e = problem(a);
    best_residual = std::min(best_residual, std::abs(e.g));
    if (std::abs(e.g) < options.tolerance) {
      if (problem.loop_free(a, e.x)) {
        return finish(a, e.x);
      }
      break;
    }
    ++iterations;
    if (e.dg == 0.0 || !std::isfinite(e.dg)) {
      break;
    }
    const double step = std::clamp(e.g / e.dg, -std::numbers::pi, std::numbers::pi);
    a -= step;
    if (std::abs(a - guess) > 4.0 * std::numbers::pi) {
      break;
    }
  }

  // Fallback: bracket a sign change near the guess, then safeguarded Newton.
  auto solve_bracket = [&](double lo, double hi, ClosureEval flo) -> std::optional<ClothoidSegment> {
      double x = 0.5 * (lo + hi);
      while (iterations < options.max_iterations) {
        ++iterations;
        const ClosureEval e = problem(x);
        best_residual = std::min(best_residual, std::abs(e.g));
        if (std::abs(e.g) < options.tolerance) {
          if (problem.loop_free(x, e.x)) {
            return finish(x, e.x);
          }
          return std::nullopt;
        }
        if ((e.g < 0.0) == (flo.g < 0.0)) {
          lo = x;
          flo = e;
        } else {
          hi = x;
        }
        double next = e.dg != 0.0 ? x - e.g / e.dg : lo - 1.0;
        if (!(next > lo && next < hi)) {
          next = 0.5 * (lo + hi);
        }
        if (hi - lo < 1e-15 * (1.0 + std::abs(x))) {
          return std::nullopt;
        }
        x = next;
      }
      return std::nullopt;
    };

  constexpr double scan_step = 0.25;
  constexpr int scan_count = 64;
  ClosureEval center = problem(guess);
  ClosureEval up_prev = center;
  ClosureEval down_prev = center;
  for (int k = 1; k <= scan_count && iterations < options.max_iterations; ++k) {
    const double up_hi = guess + k * scan_step;
    const ClosureEval up = problem(up_hi);
    if ((up.g < 0.0) != (up_prev.g < 0.0)) {
      if (auto seg = solve_bracket(up_hi - scan_step, up_hi, up_prev)) {
        return *seg;
      }
    }
    up_prev = up;
    const double down_lo = guess - k * scan_step;
    const ClosureEval down = problem(down_lo);
    if ((down.g < 0.0) != (down_prev.g < 0.0)) {
      if (auto seg = solve_bracket(down_lo, down_lo + scan_step, down)) {
        return *seg;
      }
    }
    down_prev = down;
  }

  throw ConvergenceError("G1 fit did not converge after " + std::to_string(iterations) +
          " iterations (residual " + std::to_string(best_residual) + ")", best_residual);
}

CompositePath::CompositePath(std::vector<ClothoidSegment> segments)
: segments_(std::move(segments))
{
  offsets_.reserve(segments_.size() + 1);
  offsets_.push_back(0.0);
  for (const auto & seg : segments_) {
    offsets_.push_back(offsets_.back() + seg.length);
  }
}

CompositePath::Location CompositePath::locate(double s) const
{
  if (segments_.empty()) {
    throw RangeError("empty composite path");
  }
  const auto last = offsets_.end() - 1;
  auto it = std::upper_bound(offsets_.begin(), last, s);
  std::size_t i = it == offsets_.begin() ? 0 : static_cast<std::size_t>(it - offsets_.begin()) - 1;
  i = std::min(i, segments_.size() - 1);
  const double local = std::clamp(s - offsets_[i], 0.0, segments_[i].length);
  return {i, local};
}

Pose CompositePath::pose_at(double s) const
{
  if (s < -1e-9 || s > length() + 1e-9) {
    throw RangeError("arc length " + std::to_string(s) + " outside composite path [0, " +
            std::to_string(length()) + "]");
  }
  const Location loc = locate(s);
  return evaluate_unchecked(segments_[loc.index], loc.local_s);
}

double CompositePath::kappa_at(double s) const
{
  const Location loc = locate(s);
  return segments_[loc.index].kappa_at(loc.local_s);
}

Pose CompositePath::end_pose() const
{
  if (segments_.empty()) {
    throw RangeError("empty composite path");
  }
  return evaluate_unchecked(segments_.back(), segments_.back().length);
}

Pose CompositePath::pose_extended(double s) const
{
  if (s <= length()) {
    return pose_at(std::max(s, 0.0));
  }
  const Pose e = end_pose();
  const double d = s - length();
  return Pose(e.x + d * std::cos(e.theta), e.y + d * std::sin(e.theta), e.theta);
}

CompositePath fit_composite(std::span<const Pose> node_poses, const G1Options & options)
{
  if (node_poses.size() < 2) {
    throw ValidationError("composite fit needs at least two poses");
  }
  std::vector<ClothoidSegment> segments;
  segments.reserve(node_poses.size() - 1);
  for (std::size_t i = 0; i + 1 < node_poses.size(); ++i) {
    const std::string where = "segment " + std::to_string(i) + ": ";
    try {
      segments.push_back(fit_g1(node_poses[i], node_poses[i + 1], options));
    } catch (const ConvergenceError & e) {
      throw ConvergenceError(where + e.what(), e.residual());
    } catch (const DegenerateInputError & e) {
      throw DegenerateInputError(where + e.what());
    }
  }
  return CompositePath(std::move(segments));
}

std::vector<CurvatureSample> curvature_profile(const CompositePath & path, double step)
{
  if (!(step > 0.0)) {
    throw ValidationError("curvature profile step must be positive");
  }
  std::vector<CurvatureSample> out;
  const double total = path.length();
  const auto n = static_cast<std::size_t>(std::floor(total / step + 1e-12));
  out.reserve(n + 2);
  for (std::size_t k = 0; k <= n; ++k) {
    const double s = std::min(static_cast<double>(k) * step, total);
    out.push_back({s, path.kappa_at(s)});
  }
  if (total - out.back().s > 1e-9) {
    out.push_back({total, path.kappa_at(total)});
  }
  return out;
}

}  // namespace curvepath
