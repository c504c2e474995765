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

#ifndef CURVEPATH__CALIBRATION_HPP_
#define CURVEPATH__CALIBRATION_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "curvepath/drive_log.hpp"
#include "curvepath/driver_model.hpp"

namespace curvepath
{

inline constexpr int kDefaultRetrigger = 30;

/// Columns are planning cycles: offsets D (3 x N, m) and curvature inputs U (3 x N, 1/m).
struct RegressionDataset
{
  Eigen::Matrix<double, 3, Eigen::Dynamic> offsets;
  Eigen::Matrix<double, 3, Eigen::Dynamic> inputs;
  std::vector<std::int64_t> cycles;
  std::size_t skipped{0};

  Eigen::Index size() const {return inputs.cols();}
  /// Column-wise concatenation.
  static RegressionDataset concatenate(const RegressionDataset & a, const RegressionDataset & b);
};

struct CalibrationResult
{
  GainMatrix gains;
  double residual_rms{0.0};
  int rank{0};
  double condition_number{0.0};
};

/// One column per retrigger instant: U from the perceived corridor, D from the
/// logged human path at the node arc lengths. Instants without enough preview
/// or without human samples reaching the far node are skipped and counted.
RegressionDataset assemble_dataset(const DriveLog & log, const NodePointParams & params,
  int retrigger = kDefaultRetrigger, double corridor_step = kDefaultCorridorStep);

/// Least-squares P = D U^+ through the SVD of U (relative cutoff 1e-10).
/// Throws RankDeficiencyError when U has rank < 3.
CalibrationResult fit_gain_matrix(const RegressionDataset & data);

struct NodeDistanceOptions
{
  std::size_t window_samples{400};
  /// Length of human path compared against the fit; defaults to the perceived preview.
  std::optional<double> horizon;
  double grid_step{5.0};
  double min_gap{0.5};
  int refine_iterations{200};
  double flat_tolerance{1e-6};
  double corridor_step{kDefaultCorridorStep};
  bool parallel{true};
};

struct WindowOptimum
{
  std::size_t start_index{0};
  NodePointParams params;
  double grid_cost{0.0};
  double cost{0.0};
  bool flat{false};
};

struct NodeDistanceResult
{
  NodePointParams params;
  std::vector<WindowOptimum> windows;
  /// Best cost of each informative window in log order.
  std::vector<double> cost_trace;
  std::size_t skipped_windows{0};
  bool flat_cost{false};
};

/// Windowed node-distance search: in every window the nodes are put on the
/// recorded human path, a composite clothoid is fitted and its mean distance to
/// the human samples (paired by arc length) is minimized over the distances.
/// Window optima are averaged. Flat windows (no information) are excluded.
NodeDistanceResult optimize_node_distances(const DriveLog & log, const NodePointParams & initial,
  const NodeDistanceOptions & options = {});

/// Mean distance between a fitted node path and the human path for one window.
/// Exposed for the kernels and the tests.
class NodeDistanceWindow
{
public:
  NodeDistanceWindow(const DriveLog & log, std::size_t start, const NodeDistanceOptions & options);

  bool usable() const {return usable_;}
  double max_distance() const {return max_distance_;}
  double cost(const std::array<double, 3> & distances) const;
  /// Cost with precomputed node poses (used by the grid search).
  double cost_with_nodes(const std::array<Pose, 3> & nodes) const;
  std::optional<Pose> node_pose(double distance) const;

private:
  Corridor corridor_;
  std::vector<HumanSample> samples_;
  std::vector<double> arc_;  // human arc length per sample
  double origin_s_{0.0};
  double max_distance_{0.0};
  std::size_t compare_count_{0};
  bool usable_{false};
};

struct NodeCountOptions
{
  double span{137.0};
  double origin_spacing{37.5};
  double sample_step{1.0};
  int repeats{5};
};

struct NodeCountPoint
{
  int count{0};
  double mean_error{0.0};
  double mean_time{0.0};
  double normalized_error{0.0};
  double normalized_time{0.0};
};

/// Equidistant midline nodes, k per plan, over origins spaced along the road.
/// Error: mean |lateral| of planned path points; time: planning wall time per step.
std::vector<NodeCountPoint> node_count_tradeoff(const Corridor & road, std::span<const int> counts,
  const NodeCountOptions & options = {});

/// Same study on the perceived corridors of a drive log at every retrigger instant.
std::vector<NodeCountPoint> node_count_tradeoff(const DriveLog & log, std::span<const int> counts,
  int retrigger = kDefaultRetrigger, const NodeCountOptions & options = {});

struct CalibrationProvenance
{
  std::string log_file;
  int retrigger{kDefaultRetrigger};
  std::string timestamp;
};

struct CalibrationFile
{
  CalibrationResult result;
  NodePointParams params;
  CalibrationProvenance provenance;
};

std::string calibration_to_json(const CalibrationFile & file);
CalibrationFile calibration_from_json(std::string_view text);

}  // namespace curvepath

#endif  // CURVEPATH__CALIBRATION_HPP_
