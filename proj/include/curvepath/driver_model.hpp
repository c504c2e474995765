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

#ifndef CURVEPATH__DRIVER_MODEL_HPP_
#define CURVEPATH__DRIVER_MODEL_HPP_

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "curvepath/clothoid.hpp"
#include "curvepath/geometry.hpp"

namespace curvepath
{

/// Node points may be nominated at most this far ahead [m].
inline constexpr double kMaxPreviewDistance = 250.0;

/// Near, mid and far node distances along the midline, measured from the planning origin.
struct NodePointParams
{
  double d_near{10.0};
  double d_mid{39.0};
  double d_far{137.0};

  /// Throws ValidationError unless 0 < near < mid < far <= 250 m.
  void validate() const;
  std::array<double, 3> as_array() const {return {d_near, d_mid, d_far};}
  static NodePointParams from_array(const std::array<double, 3> & d) {return {d[0], d[1], d[2]};}
};

/// The 3x3 offset model: offsets [m] = P * subsection curvatures [1/m].
struct GainMatrix
{
  Eigen::Matrix3d p{Eigen::Matrix3d::Zero()};

  static GainMatrix diagonal(double near, double mid, double far);
  bool finite() const {return p.allFinite();}
};

/// Mean road curvature over the origin-near, near-mid and mid-far subsections.
struct CurvatureInput
{
  double kappa_on{0.0};
  double kappa_nm{0.0};
  double kappa_mf{0.0};

  Eigen::Vector3d vector() const {return {kappa_on, kappa_nm, kappa_mf};}
  static CurvatureInput from_vector(const Eigen::Vector3d & v) {return {v[0], v[1], v[2]};}
};

/// Lateral offsets of the near, mid and far node points, positive left.
struct OffsetVector
{
  double delta_n{0.0};
  double delta_m{0.0};
  double delta_f{0.0};

  Eigen::Vector3d vector() const {return {delta_n, delta_m, delta_f};}
  std::array<double, 3> as_array() const {return {delta_n, delta_m, delta_f};}
  static OffsetVector from_vector(const Eigen::Vector3d & v) {return {v[0], v[1], v[2]};}
};

/// True when every offset keeps the reference point inside half a lane.
bool offsets_plausible(const OffsetVector & offsets, double lane_width);

struct NodeSelection
{
  std::array<Pose, 3> poses;
  std::array<double, 3> arclengths;
};

/// Midline poses at origin_s + d for each node distance.
/// Throws InsufficientPreviewError when the corridor ends before the far node.
NodeSelection select_node_points(const Corridor & corridor, const NodePointParams & params,
  double origin_s = 0.0);

CurvatureInput average_curvatures(const Corridor & corridor, double origin_s,
  const std::array<double, 3> & node_arclengths);

inline CurvatureInput average_curvatures(const Corridor & corridor,
  const std::array<double, 3> & node_arclengths)
{
  return average_curvatures(corridor, 0.0, node_arclengths);
}

OffsetVector compute_offsets(const GainMatrix & gains, const CurvatureInput & input);

/// Heading boundary condition of the first clothoid.
enum class OriginHeading
{
  kVehicle,
  kRoad,
};

struct PlannerOptions
{
  OriginHeading origin_heading{OriginHeading::kVehicle};
  /// Restricts the projection of the planning origin onto the corridor.
  std::optional<std::pair<double, double>> origin_search;
  G1Options fit;
};

/// One planning cycle. Path and node poses are expressed in `frame`.
struct PlannedPath
{
  CompositePath path;
  std::array<Pose, 4> node_poses;  ///< origin, near, mid, far
  PlanningFrame frame;
  CurvatureInput input;
  OffsetVector offsets;
  double origin_s{0.0};
  std::array<double, 3> node_arclengths{};
  bool offsets_plausible{true};

  Pose global_pose(double s) const {return from_planning_frame(path.pose_extended(s), frame);}
};

/// LDM plan: offsets from gains * mean curvatures, applied at the nominal node points.
/// `corridor` and `frame.origin` share one coordinate system.
PlannedPath plan_path(const Corridor & corridor, const GainMatrix & gains,
  const NodePointParams & params, const PlanningFrame & frame, const PlannerOptions & options = {});

/// Same planning cycle with externally supplied node offsets.
PlannedPath plan_path_with_offsets(const Corridor & corridor, const OffsetVector & offsets,
  const NodePointParams & params, const PlanningFrame & frame, const PlannerOptions & options = {});

/// Generalized node plan with any number of nodes (used by the node-count study).
struct NodePlan
{
  CompositePath path;
  std::vector<Pose> node_poses;  ///< origin first, in the planning frame
  double origin_s{0.0};
};

NodePlan plan_through_nodes(const Corridor & corridor, const PlanningFrame & frame,
  std::span<const double> distances, std::span<const double> offsets,
  const PlannerOptions & options = {});

}  // namespace curvepath

#endif  // CURVEPATH__DRIVER_MODEL_HPP_
