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

#ifndef CURVEPATH__CLOTHOID_HPP_
#define CURVEPATH__CLOTHOID_HPP_

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "curvepath/geometry.hpp"

namespace curvepath
{

/// Euler spiral: curvature kappa0 + kappa_rate * s over [0, length].
struct ClothoidSegment
{
  Pose start;
  double kappa0{0.0};
  double kappa_rate{0.0};
  double length{0.0};

  double kappa_at(double s) const {return kappa0 + kappa_rate * s;}
  /// Heading change relative to the start heading, not wrapped.
  double heading_change(double s) const {return s * (kappa0 + 0.5 * kappa_rate * s);}
};

/// Pose at arc length s. Throws RangeError outside [0, length].
Pose evaluate(const ClothoidSegment & segment, double s);

/// Like evaluate() but without the range check; valid for any real s.
Pose evaluate_unchecked(const ClothoidSegment & segment, double s);

namespace detail
{

/// Moments \int_0^1 t^k exp(i (a t^2 / 2 + b t + c)) dt for k = 0, 1, 2.
///
/// Composite 10-point Gauss-Legendre with the panel count chosen from the
/// largest phase rate, so every panel spans at most one radian of phase.
/// When a == 0 the zeroth moment switches to the closed form (with a power
/// series for small b), which keeps straight and circular pieces exact.
std::array<std::complex<double>, 3> phase_moments(double a, double b, double c, int max_moment);

}  // namespace detail

struct G1Options
{
  int max_iterations{100};
  /// Residual on the normalized (unit chord) lateral closure.
  double tolerance{1e-12};
};

/// G1 Hermite interpolation: the clothoid leaving `start` that reaches `end`
/// with the end heading. Solves for (kappa0, kappa_rate, length).
///
/// Throws DegenerateInputError for coincident endpoints or a heading pointing
/// exactly against the chord, ConvergenceError when no loop-free solution is found.
ClothoidSegment fit_g1(const Pose & start, const Pose & end, const G1Options & options = {});

/// G1-continuous chain of clothoids.
class CompositePath
{
public:
  CompositePath() = default;
  explicit CompositePath(std::vector<ClothoidSegment> segments);

  std::span<const ClothoidSegment> segments() const {return segments_;}
  std::size_t size() const {return segments_.size();}
  bool empty() const {return segments_.empty();}
  double length() const {return offsets_.empty() ? 0.0 : offsets_.back();}
  /// Arc length at which segment i starts.
  double segment_start(std::size_t i) const {return offsets_[i];}

  struct Location
  {
    std::size_t index;
    double local_s;
  };
  /// Segment containing s; a joint belongs to the later segment.
  Location locate(double s) const;

  Pose pose_at(double s) const;
  double kappa_at(double s) const;
  /// Past the end the path continues as a straight line along the end heading.
  Pose pose_extended(double s) const;
  Pose end_pose() const;

private:
  std::vector<ClothoidSegment> segments_;
  std::vector<double> offsets_;  // size() + 1 cumulative lengths
};

/// One fit_g1 per consecutive pose pair. Errors are rethrown with the segment index.
CompositePath fit_composite(std::span<const Pose> node_poses, const G1Options & options = {});

struct CurvatureSample
{
  double s;
  double kappa;
};

/// kappa(s) sampled every `step` from 0 to the total length (the end is always included).
std::vector<CurvatureSample> curvature_profile(const CompositePath & path, double step);

}  // namespace curvepath

#endif  // CURVEPATH__CLOTHOID_HPP_
