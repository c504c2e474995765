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

#include "curvepath/driver_model.hpp"

#include <cmath>
#include <string>

#include "curvepath/errors.hpp"

namespace curvepath
{

void NodePointParams::validate() const
{
  if (!(std::isfinite(d_near) && std::isfinite(d_mid) && std::isfinite(d_far))) {
    throw ValidationError("node distances must be finite");
  }
  if (!(0.0 < d_near && d_near < d_mid && d_mid < d_far && d_far <= kMaxPreviewDistance)) {
    throw ValidationError("node distances must satisfy 0 < near < mid < far <= 250 m, got (" +
            std::to_string(d_near) + ", " + std::to_string(d_mid) + ", " + std::to_string(d_far) +
            ")");
  }
}

GainMatrix GainMatrix::diagonal(double near, double mid, double far)
{
  GainMatrix g;
  g.p.diagonal() << near, mid, far;
  return g;
}

bool offsets_plausible(const OffsetVector & offsets, double lane_width)
{
  const double half = 0.5 * lane_width;
  return std::abs(offsets.delta_n) < half && std::abs(offsets.delta_m) < half &&
         std::abs(offsets.delta_f) < half;
}

NodeSelection select_node_points(const Corridor & corridor, const NodePointParams & params,
  double origin_s)
{
  params.validate();
  if (origin_s + params.d_far > corridor.length() + 1e-9) {
    throw InsufficientPreviewError("corridor ends at " + std::to_string(corridor.length()) +
            " m, far node needs " + std::to_string(origin_s + params.d_far) + " m");
  }
  NodeSelection sel;
  const auto d = params.as_array();
  for (std::size_t k = 0; k < 3; ++k) {
    sel.arclengths[k] = origin_s + d[k];
    sel.poses[k] = corridor.pose_at(sel.arclengths[k]);
  }
  return sel;
}

CurvatureInput average_curvatures(const Corridor & corridor, double origin_s,
  const std::array<double, 3> & node_arclengths)
{
  return {corridor.mean_curvature(origin_s, node_arclengths[0]),
    corridor.mean_curvature(node_arclengths[0], node_arclengths[1]),
    corridor.mean_curvature(node_arclengths[1], node_arclengths[2])};
}

OffsetVector compute_offsets(const GainMatrix & gains, const CurvatureInput & input)
{
  return OffsetVector::from_vector(gains.p * input.vector());
}

namespace
{

double project_origin(const Corridor & corridor, const PlanningFrame & frame,
  const PlannerOptions & options)
{
  const auto range = options.origin_search.value_or(
    std::pair<double, double>{0.0, corridor.length()});
  return corridor.project(frame.origin.position(), range.first, range.second).s;
}

Pose origin_pose(const Corridor & corridor, double origin_s, const PlanningFrame & frame,
  const PlannerOptions & options)
{
  if (options.origin_heading == OriginHeading::kRoad) {
    return Pose(0.0, 0.0, corridor.heading_at(origin_s) - frame.origin.theta);
  }
  return Pose(0.0, 0.0, 0.0);
}

NodePlan plan_nodes_at(const Corridor & corridor, const PlanningFrame & frame, double origin_s,
  std::span<const double> distances, std::span<const double> offsets,
  const PlannerOptions & options)
{
  if (distances.size() != offsets.size() || distances.empty()) {
    throw ValidationError("node plan needs one offset per node distance");
  }
  double previous = 0.0;
  for (double d : distances) {
    if (!(d > previous)) {
      throw ValidationError("node distances must be positive and increasing");
    }
    previous = d;
  }
  if (origin_s + distances.back() > corridor.length() + 1e-9) {
    throw InsufficientPreviewError("corridor ends at " + std::to_string(corridor.length()) +
            " m, last node needs " + std::to_string(origin_s + distances.back()) + " m");
  }
  NodePlan plan;
  plan.origin_s = origin_s;
  plan.node_poses.reserve(distances.size() + 1);
  plan.node_poses.push_back(origin_pose(corridor, origin_s, frame, options));
  for (std::size_t k = 0; k < distances.size(); ++k) {
    const Pose nominal = corridor.pose_at(origin_s + distances[k]);
    plan.node_poses.push_back(to_planning_frame(offset_point(nominal, offsets[k]), frame));
  }
  plan.path = fit_composite(plan.node_poses, options.fit);
  return plan;
}

PlannedPath assemble(const Corridor & corridor, const NodePointParams & params,
  const PlanningFrame & frame, double origin_s, const CurvatureInput & input,
  const OffsetVector & offsets, const PlannerOptions & options)
{
  const auto d = params.as_array();
  const auto delta = offsets.as_array();
  NodePlan nodes = plan_nodes_at(corridor, frame, origin_s, d, delta, options);
  PlannedPath out;
  out.path = std::move(nodes.path);
  for (std::size_t k = 0; k < 4; ++k) {
    out.node_poses[k] = nodes.node_poses[k];
  }
  out.frame = frame;
  out.input = input;
  out.offsets = offsets;
  out.origin_s = origin_s;
  for (std::size_t k = 0; k < 3; ++k) {
    out.node_arclengths[k] = origin_s + d[k];
  }
  out.offsets_plausible = offsets_plausible(offsets, corridor.lane_width());
  return out;
}

}  // namespace

PlannedPath plan_path(const Corridor & corridor, const GainMatrix & gains,
  const NodePointParams & params, const PlanningFrame & frame, const PlannerOptions & options)
{
  if (!gains.finite()) {
    throw ValidationError("gain matrix has non-finite entries");
  }
  const double origin_s = project_origin(corridor, frame, options);
  const NodeSelection sel = select_node_points(corridor, params, origin_s);
  const CurvatureInput input = average_curvatures(corridor, origin_s, sel.arclengths);
  return assemble(corridor, params, frame, origin_s, input, compute_offsets(gains, input),
           options);
}

PlannedPath plan_path_with_offsets(const Corridor & corridor, const OffsetVector & offsets,
  const NodePointParams & params, const PlanningFrame & frame, const PlannerOptions & options)
{
  const double origin_s = project_origin(corridor, frame, options);
  const NodeSelection sel = select_node_points(corridor, params, origin_s);
  const CurvatureInput input = average_curvatures(corridor, origin_s, sel.arclengths);
  return assemble(corridor, params, frame, origin_s, input, offsets, options);
}

NodePlan plan_through_nodes(const Corridor & corridor, const PlanningFrame & frame,
  std::span<const double> distances, std::span<const double> offsets,
  const PlannerOptions & options)
{
  const double origin_s = project_origin(corridor, frame, options);
  return plan_nodes_at(corridor, frame, origin_s, distances, offsets, options);
}

}  // namespace curvepath
