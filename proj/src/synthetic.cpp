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

#include "curvepath/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "curvepath/clothoid.hpp"
#include "curvepath/errors.hpp"

namespace curvepath
{

void SyntheticDriverSpec::validate() const
{
  if (!(offset_noise_sigma >= 0.0) || !std::isfinite(offset_noise_sigma)) {
    throw ValidationError("offset noise sigma must be finite and >= 0");
  }
  if (!gains_true.finite()) {
    throw ValidationError("true gain matrix has non-finite entries");
  }
}

PerceivedLane perceive_lane(const Corridor & road, const Pose & ego, double preview,
  PolynomialConvention convention, double s_hint)
{
  if (!(preview > 0.0)) {
    throw ValidationError("preview length must be positive");
  }
  PerceivedLane out;
  const double lo = s_hint < 0.0 ? 0.0 : s_hint - 10.0;
  const double hi = s_hint < 0.0 ? road.length() : s_hint + 40.0;
  out.road_s = road.project(ego.position(), lo, hi).s;
  const PlanningFrame frame{ego};
  std::vector<Point2> pts;
  for (double s = std::max(0.0, out.road_s - 5.0); s <= road.length(); s += 1.0) {
    const Point2 p = to_planning_frame(road.position_at(s), frame);
    if (p.x > preview) {
      break;
    }
    if (p.x >= 0.0) {
      pts.push_back(p);
    }
  }
  if (pts.size() < 8) {
    throw InsufficientPreviewError("road ahead of the ego is too short to perceive a lane");
  }
  const double scale = preview;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(pts.size()), 4);
  Eigen::VectorXd b(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double t = pts[i].x / scale;
    const auto r = static_cast<Eigen::Index>(i);
    a.row(r) << 1.0, t, t * t, t * t * t;
    b[r] = pts[i].y;
  }
  const Eigen::Vector4d c = a.colPivHouseholderQr().solve(b);
  out.residual_rms = std::sqrt((a * c - b).squaredNorm() / static_cast<double>(pts.size()));
  const double k2 = convention == PolynomialConvention::kCurvature ? 0.5 : 2.0;
  const double k3 = convention == PolynomialConvention::kCurvature ? 1.0 / 6.0 : 6.0;
  out.lane.c0 = c[0];
  out.lane.c1 = c[1] / scale;
  out.lane.c2 = c[2] / (scale * scale * k2);
  out.lane.c3 = c[3] / (scale * scale * scale * k3);
  out.lane.preview_length = std::min(preview, pts.back().x);
  out.lane.convention = convention;
  return out;
}

namespace
{

// Walks a clothoid chain in steps close to a nominal length, landing exactly
// on every joint.
class PathCursor
{
public:
  void reset(CompositePath path)
  {
    path_ = std::move(path);
    seg_ = 0;
    local_ = 0.0;
    remaining_ = 0;
  }

  bool at_end() const {return seg_ >= path_.size();}
  std::size_t segment() const {return seg_;}

  Pose pose() const
  {
    if (at_end()) {
      return path_.end_pose();
    }
    const auto & s = path_.segments()[seg_];
    return local_ == 0.0 ? s.start : evaluate_unchecked(s, local_);
  }

  double next_step(double nominal)
  {
    if (remaining_ == 0) {
      const double gap = path_.segments()[seg_].length - local_;
      remaining_ = std::max(1L, std::lround(gap / nominal));
      step_ = gap / static_cast<double>(remaining_);
    }
    return step_;
  }

  void advance()
  {
    --remaining_;
    if (remaining_ == 0) {
      ++seg_;
      local_ = 0.0;
    } else {
      local_ += step_;
    }
  }

private:
  CompositePath path_;
  std::size_t seg_{0};
  double local_{0.0};
  long remaining_{0};
  double step_{0.0};
};

struct PendingNode
{
  double road_s;
  Pose pose;
};

void check_options(const Corridor & road, const SyntheticLogOptions & options)
{
  if (!(options.speed > 0.0) || !(options.sample_time > 0.0)) {
    throw ValidationError("speed and sample time must be positive");
  }
  if (!(options.start_s >= 0.0) || options.start_s + options.preview + 10.0 > road.length()) {
    throw InsufficientPreviewError("road too short for a synthetic log");
  }
}

// Emits one record at the cursor pose; false when the log should end.
bool emit(DriveLog & log, PathCursor & cursor, const PerceivedLane & lane, const Corridor & road,
  const SyntheticLogOptions & options)
{
  if (cursor.at_end()) {
    return false;
  }
  const double nominal = options.speed * options.sample_time;
  DriveRecord rec;
  rec.cycle = static_cast<std::int64_t>(log.records.size());
  rec.t = static_cast<double>(rec.cycle) * options.sample_time;
  rec.pose = cursor.pose();
  rec.speed = cursor.next_step(nominal) / options.sample_time;
  rec.lane = lane.lane;
  rec.lane_width = road.lane_width();
  log.records.push_back(rec);
  cursor.advance();
  return true;
}

bool road_left(const Corridor & road, double road_s, const SyntheticLogOptions & options,
  const DriveLog & log)
{
  if (options.max_cycles > 0 && log.records.size() >= options.max_cycles) {
    return false;
  }
  return road_s + options.preview + 10.0 <= road.length();
}

std::vector<Pose> midline_poses(const Corridor & road, double from, double to, double spacing)
{
  std::vector<Pose> out;
  for (double s = from; s <= std::min(to, road.length()) + 1e-9; s += spacing) {
    out.push_back(road.pose_at(std::min(s, road.length())));
  }
  return out;
}

}  // namespace

DriveLog generate_synthetic_driver_log(const Corridor & road, const SyntheticDriverSpec & driver,
  const NodePointParams & params, int retrigger, const SyntheticLogOptions & options)
{
  driver.validate();
  params.validate();
  check_options(road, options);
  if (retrigger < 1) {
    throw ValidationError("retrigger must be at least 1");
  }
  std::mt19937_64 rng(driver.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  DriveLog log;
  log.sample_time = options.sample_time;
  PathCursor cursor;
  std::vector<PendingNode> pending;
  double road_s = options.start_s;
  Pose ego = road.pose_at(options.start_s);
  const auto dist = params.as_array();
  for (std::int64_t cycle = 0;; ++cycle) {
    const PerceivedLane lane = perceive_lane(road, ego, options.preview, options.convention, road_s);
    road_s = lane.road_s;
    if (!road_left(road, road_s, options, log)) {
      break;
    }
    if (cycle % retrigger == 0) {
      // Nodes already landed on are gone; the rest stay committed.
      pending.erase(pending.begin(), pending.begin() +
        static_cast<std::ptrdiff_t>(std::min(cursor.segment(), pending.size())));
      const Corridor corridor = corridor_from_polynomial(lane.lane, options.corridor_step,
        road.lane_width());
      const double origin_s = corridor.project({0.0, 0.0}, 0.0, 20.0).s;
      if (origin_s + params.d_far > corridor.length() + 1e-9) {
        break;
      }
      std::array<double, 3> node_s{};
      for (std::size_t k = 0; k < 3; ++k) {
        node_s[k] = origin_s + dist[k];
      }
      const CurvatureInput input = average_curvatures(corridor, origin_s, node_s);
      Eigen::Vector3d delta = driver.gains_true.p * input.vector();
      if (driver.offset_noise_sigma > 0.0) {
        for (int k = 0; k < 3; ++k) {
          delta[k] += driver.offset_noise_sigma * noise(rng);
        }
      }
      const PlanningFrame frame{ego};
      for (std::size_t k = 0; k < 3; ++k) {
        const Pose local = offset_point(corridor.pose_at(node_s[k]), delta[static_cast<int>(k)]);
        const Pose global = from_planning_frame(local, frame);
        const double s = road.project(global.position(), road_s, road_s + kMaxPreviewDistance).s;
        pending.push_back({s, global});
      }
      std::stable_sort(pending.begin(), pending.end(),
        [](const PendingNode & a, const PendingNode & b) {return a.road_s < b.road_s;});
      std::vector<Pose> poses{ego};
      for (const auto & n : pending) {
        poses.push_back(n.pose);
      }
      cursor.reset(fit_composite(poses));
    }
    if (!emit(log, cursor, lane, road, options)) {
      break;
    }
    ego = cursor.pose();
  }
  if (log.records.empty()) {
    throw InsufficientPreviewError("road too short for a single planning cycle");
  }
  return log;
}

DriveLog generate_midline_log(const Corridor & road, const SyntheticLogOptions & options)
{
  check_options(road, options);
  DriveLog log;
  log.sample_time = options.sample_time;
  PathCursor cursor;
  cursor.reset(fit_composite(midline_poses(road, options.start_s, road.length(), 5.0)));
  double road_s = options.start_s;
  Pose ego = cursor.pose();
  while (true) {
    const PerceivedLane lane = perceive_lane(road, ego, options.preview, options.convention, road_s);
    road_s = lane.road_s;
    if (!road_left(road, road_s, options, log) || !emit(log, cursor, lane, road, options)) {
      break;
    }
    ego = cursor.pose();
  }
  return log;
}

DriveLog generate_node_reference_log(const Corridor & road, const NodePointParams & params,
  std::uint64_t seed, std::size_t window_samples, double straight_run,
  const SyntheticLogOptions & options)
{
  params.validate();
  check_options(road, options);
  if (window_samples < 2 || !(straight_run > 0.0)) {
    throw ValidationError("window must span two samples and the straight run must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> magnitude(0.3, 0.9);
  std::bernoulli_distribution left(0.5);
  DriveLog log;
  log.sample_time = options.sample_time;
  PathCursor cursor;
  double road_s = options.start_s;
  Pose ego = road.pose_at(options.start_s);
  const auto dist = params.as_array();
  const double window_length = static_cast<double>(window_samples) * options.speed *
    options.sample_time;
  for (std::size_t n = 0;; ++n) {
    const PerceivedLane lane = perceive_lane(road, ego, options.preview, options.convention, road_s);
    road_s = lane.road_s;
    if (!road_left(road, road_s, options, log)) {
      break;
    }
    if (n % window_samples == 0) {
      const Corridor corridor = corridor_from_polynomial(lane.lane, options.corridor_step,
        road.lane_width());
      const double origin_s = corridor.project({0.0, 0.0}, 0.0, 20.0).s;
      if (origin_s + params.d_far > corridor.length()) {
        break;
      }
      const PlanningFrame frame{ego};
      std::vector<Pose> poses{ego};
      for (std::size_t k = 0; k < 3; ++k) {
        const double delta = (left(rng) ? 1.0 : -1.0) * magnitude(rng);
        poses.push_back(from_planning_frame(
            offset_point(corridor.pose_at(origin_s + dist[k]), delta), frame));
      }
      const Pose far = poses.back();
      const Pose run_end(far.x + straight_run * std::cos(far.theta),
        far.y + straight_run * std::sin(far.theta), far.theta);
      poses.push_back(run_end);
      const double rejoin = road.project(run_end.position(), road_s,
        road_s + kMaxPreviewDistance).s + 60.0;
      for (const Pose & p : midline_poses(road, rejoin, rejoin + window_length + 50.0, 5.0)) {
        poses.push_back(p);
      }
      cursor.reset(fit_composite(poses));
    }
    if (!emit(log, cursor, lane, road, options)) {
      break;
    }
    ego = cursor.pose();
  }
  if (log.records.empty()) {
    throw InsufficientPreviewError("road too short for a single window");
  }
  return log;
}

RegressionDataset synthesize_dataset(const Corridor & road, const SyntheticDriverSpec & driver,
  const NodePointParams & params, std::size_t count)
{
  driver.validate();
  params.validate();
  if (road.length() <= params.d_far) {
    throw InsufficientPreviewError("road shorter than the far node distance");
  }
  std::mt19937_64 rng(driver.seed);
  std::uniform_real_distribution<double> origin(0.0, road.length() - params.d_far);
  std::normal_distribution<double> noise(0.0, 1.0);
  RegressionDataset out;
  out.inputs.resize(3, static_cast<Eigen::Index>(count));
  out.offsets.resize(3, static_cast<Eigen::Index>(count));
  const auto dist = params.as_array();
  for (std::size_t c = 0; c < count; ++c) {
    const double s0 = origin(rng);
    const std::array<double, 3> node_s{s0 + dist[0], s0 + dist[1], s0 + dist[2]};
    const Eigen::Vector3d u = average_curvatures(road, s0, node_s).vector();
    Eigen::Vector3d d = driver.gains_true.p * u;
    for (int k = 0; k < 3; ++k) {
      d[k] += driver.offset_noise_sigma * noise(rng);
    }
    const auto col = static_cast<Eigen::Index>(c);
    out.inputs.col(col) = u;
    out.offsets.col(col) = d;
    out.cycles.push_back(static_cast<std::int64_t>(c));
  }
  return out;
}

}  // namespace curvepath
