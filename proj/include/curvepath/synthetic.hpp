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

#ifndef CURVEPATH__SYNTHETIC_HPP_
#define CURVEPATH__SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>

#include "curvepath/calibration.hpp"
#include "curvepath/drive_log.hpp"
#include "curvepath/driver_model.hpp"
#include "curvepath/geometry.hpp"
#include "curvepath/scenario.hpp"

namespace curvepath
{

struct SyntheticDriverSpec
{
  GainMatrix gains_true;
  double offset_noise_sigma{0.0};
  std::uint64_t seed{1};

  void validate() const;
};

struct SyntheticLogOptions
{
  double speed{kDefaultSpeed};
  double sample_time{kDefaultSampleTime};
  double preview{kDefaultPreviewLength};
  double corridor_step{kDefaultCorridorStep};
  /// Upper bound on the number of records; 0 runs until the road ends.
  std::size_t max_cycles{0};
  /// Road arc length of the first ego pose.
  double start_s{0.0};
  PolynomialConvention convention{kDefaultPolynomialConvention};
};

/// Camera stand-in: least-squares cubic through the road midline seen from `ego`
/// over x in [0, preview].
struct PerceivedLane
{
  LanePolynomial lane;
  double residual_rms{0.0};
  double road_s{0.0};
};

PerceivedLane perceive_lane(const Corridor & road, const Pose & ego, double preview,
  PolynomialConvention convention = kDefaultPolynomialConvention, double s_hint = -1.0);

/// Driver that commits to the offsets of every plan: at each retrigger instant
/// it plans the node offsets gains_true * curvature inputs (plus noise) on its
/// perceived corridor and then drives a G1 clothoid chain through every node
/// it has committed to and not yet passed. Samples land on each node.
DriveLog generate_synthetic_driver_log(const Corridor & road, const SyntheticDriverSpec & driver,
  const NodePointParams & params, int retrigger = kDefaultRetrigger,
  const SyntheticLogOptions & options = {});

/// Human following the road midline.
DriveLog generate_midline_log(const Corridor & road, const SyntheticLogOptions & options = {});

/// Human whose path in each window of `window_samples` records starts with a
/// clothoid chain through random-offset nodes at `params` distances along the
/// perceived corridor, runs straight for `straight_run` metres and then
/// rejoins the midline.
DriveLog generate_node_reference_log(const Corridor & road, const NodePointParams & params,
  std::uint64_t seed, std::size_t window_samples = 400, double straight_run = 25.0,
  const SyntheticLogOptions & options = {});

/// Regression data without a log: U at `count` origins spread over the road,
/// D = gains_true * U + noise.
RegressionDataset synthesize_dataset(const Corridor & road, const SyntheticDriverSpec & driver,
  const NodePointParams & params, std::size_t count);

}  // namespace curvepath

#endif  // CURVEPATH__SYNTHETIC_HPP_
