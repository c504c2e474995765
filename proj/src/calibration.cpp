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

#include "curvepath/calibration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "curvepath/errors.hpp"
#include "curvepath/kernels.hpp"

namespace curvepath
{

RegressionDataset RegressionDataset::concatenate(const RegressionDataset & a,
  const RegressionDataset & b)
{
  RegressionDataset out;
  out.offsets.resize(3, a.size() + b.size());
  out.inputs.resize(3, a.size() + b.size());
  out.offsets << a.offsets, b.offsets;
  out.inputs << a.inputs, b.inputs;
  out.cycles = a.cycles;
  out.cycles.insert(out.cycles.end(), b.cycles.begin(), b.cycles.end());
  out.skipped = a.skipped + b.skipped;
  return out;
}

RegressionDataset assemble_dataset(const DriveLog & log, const NodePointParams & params,
  int retrigger, double corridor_step)
{
  params.validate();
  if (retrigger < 1) {
    throw ValidationError("retrigger must be at least 1");
  }
  if (log.empty()) {
    throw EmptyDataError("drive log has no records");
  }
  std::vector<Eigen::Vector3d> d_cols;
  std::vector<Eigen::Vector3d> u_cols;
  RegressionDataset out;
  const auto dist = params.as_array();
  for (std::size_t i = 0; i < log.size(); ++i) {
    const DriveRecord & rec = log.records[i];
    if (rec.cycle % retrigger != 0) {
      continue;
    }
    const Corridor corridor = perceived_corridor(rec, corridor_step);
    const double origin_s = corridor.project({0.0, 0.0}, 0.0, 20.0).s;
    if (origin_s + params.d_far > corridor.length() + 1e-9) {
      ++out.skipped;
      continue;
    }
    std::array<double, 3> node_s{};
    for (std::size_t k = 0; k < 3; ++k) {
      node_s[k] = origin_s + dist[k];
    }
    const auto samples = project_human_path(log, i, corridor, node_s[2]);
    const auto d = measure_offsets(samples, node_s);
    if (!d) {
      ++out.skipped;
      continue;
    }
    u_cols.push_back(average_curvatures(corridor, origin_s, node_s).vector());
    d_cols.emplace_back((*d)[0], (*d)[1], (*d)[2]);
    out.cycles.push_back(rec.cycle);
  }
  if (u_cols.empty()) {
    throw EmptyDataError("no planning cycle has human samples reaching the far node (" +
            std::to_string(out.skipped) + " skipped)");
  }
  const auto n = static_cast<Eigen::Index>(u_cols.size());
  out.inputs.resize(3, n);
  out.offsets.resize(3, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    out.inputs.col(c) = u_cols[static_cast<std::size_t>(c)];
    out.offsets.col(c) = d_cols[static_cast<std::size_t>(c)];
  }
  return out;
}

namespace
{

constexpr double kCurvatureFloor = 1e-9;  // [1/m]

}  // namespace

CalibrationResult fit_gain_matrix(const RegressionDataset & data)
{
  if (data.size() == 0) {
    throw EmptyDataError("regression dataset is empty");
  }
  if (!data.inputs.allFinite() || !data.offsets.allFinite()) {
    throw ValidationError("regression dataset has non-finite entries");
  }
  const Eigen::JacobiSVD<Eigen::Matrix<double, 3, Eigen::Dynamic>> svd(data.inputs,
    Eigen::ComputeFullU | Eigen::ComputeThinV);
  const Eigen::VectorXd sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma[0] : 0.0;
  // Relative cutoff, plus an absolute floor: a log whose curvature inputs are all
  // rounding noise (a straight road) must not look full rank.
  const double cutoff = std::max(1e-10 * sigma_max, kCurvatureFloor);
  int rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma[k] > cutoff && sigma[k] > 0.0) {
      ++rank;
    }
  }
  if (rank < 3) {
    std::ostringstream msg;
    msg << "curvature inputs have rank " << rank << " < 3; deficient directions:";
    for (int k = rank; k < 3; ++k) {
      const Eigen::Vector3d dir = svd.matrixU().col(k);
      msg << " [" << dir[0] << ' ' << dir[1] << ' ' << dir[2] << ']';
    }
    throw RankDeficiencyError(msg.str(), rank);
  }
  const Eigen::Vector3d inv = sigma.head<3>().cwiseInverse();
  CalibrationResult out;
  out.gains.p = (data.offsets * svd.matrixV()) * inv.asDiagonal() * svd.matrixU().transpose();
  out.rank = rank;
  out.condition_number = sigma[0] / sigma[2];
  const auto resid = data.offsets - out.gains.p * data.inputs;
  out.residual_rms = std::sqrt(resid.squaredNorm() / static_cast<double>(3 * data.size()));
  return out;
}

NodeDistanceWindow::NodeDistanceWindow(const DriveLog & log, std::size_t start,
  const NodeDistanceOptions & options)
{
  if (start >= log.size()) {
    return;
  }
  corridor_ = perceived_corridor(log.records[start], options.corridor_step);
  origin_s_ = corridor_.project({0.0, 0.0}, 0.0, 20.0).s;
  const double available = corridor_.length() - origin_s_;
  const double horizon = std::min({options.horizon.value_or(available), available,
      kMaxPreviewDistance});
  max_distance_ = horizon;
  if (!(horizon > 0.0)) {
    return;
  }
  const double s_end = origin_s_ + horizon;
  samples_ = project_human_path(log, start, corridor_, s_end);
  if (samples_.size() < 3 || samples_.back().s < s_end - 1e-9) {
    return;
  }
  arc_.assign(samples_.size(), 0.0);
  for (std::size_t j = 1; j < samples_.size(); ++j) {
    double step = distance(samples_[j - 1].local.position(), samples_[j].local.position());
    try {
      step = fit_g1(samples_[j - 1].local, samples_[j].local).length;
    } catch (const Error &) {
    }
    arc_[j] = arc_[j - 1] + step;
  }
  compare_count_ = 0;
  for (std::size_t j = 1; j < samples_.size() && samples_[j].s <= s_end; ++j) {
    compare_count_ = j;
  }
  usable_ = compare_count_ >= 2;
}

std::optional<Pose> NodeDistanceWindow::node_pose(double d) const
{
  if (!usable_ || !(d > 0.0) || d > max_distance_ + 1e-9) {
    return std::nullopt;
  }
  return interpolate_human_pose(samples_, corridor_, origin_s_ + d);
}

double NodeDistanceWindow::cost_with_nodes(const std::array<Pose, 3> & nodes) const
{
  if (!usable_) {
    return std::numeric_limits<double>::infinity();
  }
  const std::array<Pose, 4> poses{samples_.front().local, nodes[0], nodes[1], nodes[2]};
  CompositePath path;
  try {
    path = fit_composite(poses);
  } catch (const Error &) {
    return std::numeric_limits<double>::infinity();
  }
  double sum = 0.0;
  for (std::size_t j = 1; j <= compare_count_; ++j) {
    sum += distance(path.pose_extended(arc_[j]).position(), samples_[j].local.position());
  }
  return sum / static_cast<double>(compare_count_);
}

double NodeDistanceWindow::cost(const std::array<double, 3> & distances) const
{
  std::array<Pose, 3> nodes;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto p = node_pose(distances[k]);
    if (!p) {
      return std::numeric_limits<double>::infinity();
    }
    nodes[k] = *p;
  }
  return cost_with_nodes(nodes);
}

namespace
{

// Nelder-Mead on the gap vector (near, mid - near, far - mid).
std::array<double, 3> refine(const NodeDistanceWindow & window, const std::array<double, 3> & x0,
  const NodeDistanceOptions & options, double & best_cost)
{
  using Vec = Eigen::Vector3d;
  auto objective = [&](const Vec & g) {
      if (g.minCoeff() < options.min_gap) {
        return std::numeric_limits<double>::infinity();
      }
      const std::array<double, 3> d{g[0], g[0] + g[1], g[0] + g[1] + g[2]};
      if (d[2] > window.max_distance()) {
        return std::numeric_limits<double>::infinity();
      }
      return window.cost(d);
    };
  std::array<Vec, 4> simplex;
  std::array<double, 4> f{};
  simplex[0] = Vec(x0[0], x0[1] - x0[0], x0[2] - x0[1]);
  for (int k = 0; k < 3; ++k) {
    simplex[k + 1] = simplex[0];
    simplex[k + 1][k] += 0.5 * options.grid_step;
  }
  for (int k = 0; k < 4; ++k) {
    f[k] = objective(simplex[k]);
  }
  for (int it = 0; it < options.refine_iterations; ++it) {
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) {return f[a] < f[b];});
    const int best = order[0];
    const int worst = order[3];
    const int second = order[2];
    if (std::isfinite(f[worst]) && f[worst] - f[best] < 1e-10) {
      break;
    }
    Vec centroid = Vec::Zero();
    for (int k = 0; k < 3; ++k) {
      centroid += simplex[order[k]];
    }
    centroid /= 3.0;
    const Vec xr = centroid + (centroid - simplex[worst]);
    const double fr = objective(xr);
    if (fr < f[best]) {
      const Vec xe = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = objective(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        f[worst] = fe;
      } else {
        simplex[worst] = xr;
        f[worst] = fr;
      }
      continue;
    }
    if (fr < f[second]) {
      simplex[worst] = xr;
      f[worst] = fr;
      continue;
    }
    const Vec xc = centroid + 0.5 * (simplex[worst] - centroid);
    const double fc = objective(xc);
    if (fc < f[worst]) {
      simplex[worst] = xc;
      f[worst] = fc;
      continue;
    }
    for (int k = 0; k < 4; ++k) {
      if (k != best) {
        simplex[k] = simplex[best] + 0.5 * (simplex[k] - simplex[best]);
        f[k] = objective(simplex[k]);
      }
    }
  }
  const int best = static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
  const Vec & g = simplex[best];
  best_cost = f[best];
  return {g[0], g[0] + g[1], g[0] + g[1] + g[2]};
}

}  // namespace

NodeDistanceResult optimize_node_distances(const DriveLog & log, const NodePointParams & initial,
  const NodeDistanceOptions & options)
{
  initial.validate();
  if (options.window_samples < 2 || !(options.grid_step > 0.0)) {
    throw ValidationError("window must span at least two samples and the grid step must be > 0");
  }
  if (log.size() < options.window_samples) {
    throw EmptyDataError("drive log has " + std::to_string(log.size()) +
            " samples, one window needs " + std::to_string(options.window_samples));
  }
  NodeDistanceResult out;
  std::array<double, 3> sum{};
  std::size_t informative = 0;
  for (std::size_t start = 0; start + options.window_samples <= log.size();
    start += options.window_samples)
  {
    const NodeDistanceWindow window(log, start, options);
    if (!window.usable()) {
      ++out.skipped_windows;
      continue;
    }
    std::vector<double> grid;
    for (double d = options.grid_step; d <= window.max_distance() + 1e-9; d += options.grid_step) {
      grid.push_back(d);
    }
    const kernels::GridResult gr = options.parallel ?
      kernels::node_grid_search_omp(window, grid) :
      kernels::node_grid_search_serial(window, grid);
    if (gr.evaluated == 0) {
      ++out.skipped_windows;
      continue;
    }
    WindowOptimum w;
    w.start_index = start;
    w.grid_cost = gr.best_cost;
    if (gr.max_cost - gr.min_cost < options.flat_tolerance) {
      w.flat = true;
      w.params = initial;
      w.cost = gr.best_cost;
      out.windows.push_back(w);
      continue;
    }
    double cost = gr.best_cost;
    auto d = refine(window, gr.best, options, cost);
    if (!(cost <= gr.best_cost)) {
      d = gr.best;
      cost = gr.best_cost;
    }
    w.params = NodePointParams::from_array(d);
    w.cost = cost;
    out.windows.push_back(w);
    out.cost_trace.push_back(cost);
    for (std::size_t k = 0; k < 3; ++k) {
      sum[k] += d[k];
    }
    ++informative;
  }
  if (out.windows.empty()) {
    throw EmptyDataError("no window has human samples covering the comparison horizon");
  }
  if (informative == 0) {
    out.params = initial;
    out.flat_cost = true;
    return out;
  }
  for (auto & v : sum) {
    v /= static_cast<double>(informative);
  }
  out.params = NodePointParams::from_array(sum);
  return out;
}

namespace
{

struct CountTask
{
  const Corridor * corridor;
  PlanningFrame frame;
  double origin_s;
};

double plan_error(const CountTask & task, std::span<const double> distances,
  std::span<const double> offsets, const NodeCountOptions & options)
{
  PlannerOptions popt;
  popt.origin_heading = OriginHeading::kRoad;
  popt.origin_search = std::pair{task.origin_s - 1.0, task.origin_s + 1.0};
  const NodePlan plan = plan_through_nodes(*task.corridor, task.frame, distances, offsets, popt);
  const double len = plan.path.length();
  double sum = 0.0;
  std::size_t n = 0;
  double hint = task.origin_s;
  for (double s = 0.0; s <= len + 1e-9; s += options.sample_step) {
    const Point2 p = from_planning_frame(plan.path.pose_at(std::min(s, len)).position(), task.frame);
    const Projection pr = task.corridor->project(p, hint - 5.0, hint + 10.0);
    hint = pr.s;
    sum += std::abs(pr.lateral);
    ++n;
  }
  return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

std::vector<NodeCountPoint> count_study(const std::vector<CountTask> & tasks,
  std::span<const int> counts, const NodeCountOptions & options)
{
  if (tasks.empty()) {
    throw EmptyDataError("no planning origin has enough preview for the node-count study");
  }
  std::vector<NodeCountPoint> out;
  std::vector<std::vector<double>> distance_sets;
  for (int count : counts) {
    if (count < 1) {
      throw ValidationError("node count must be positive");
    }
    std::vector<double> distances(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
      distances[static_cast<std::size_t>(j)] = options.span * (j + 1) / count;
    }
    const std::vector<double> offsets(distances.size(), 0.0);
    NodeCountPoint pt;
    pt.count = count;
    double err = 0.0;
    for (const auto & t : tasks) {
      err += plan_error(t, distances, offsets, options);
    }
    pt.mean_error = err / static_cast<double>(tasks.size());
    pt.mean_time = std::numeric_limits<double>::infinity();
    out.push_back(pt);
    distance_sets.push_back(std::move(distances));
  }
  // Repeats cycle over all counts so slow phases of the machine hit every count.
  PlannerOptions popt;
  popt.origin_heading = OriginHeading::kRoad;
  for (int r = 0; r < std::max(1, options.repeats); ++r) {
    for (std::size_t c = 0; c < out.size(); ++c) {
      const auto & distances = distance_sets[c];
      const std::vector<double> offsets(distances.size(), 0.0);
      const auto t0 = std::chrono::steady_clock::now();
      double sink = 0.0;
      for (const auto & t : tasks) {
        popt.origin_search = std::pair{t.origin_s - 1.0, t.origin_s + 1.0};
        sink += plan_through_nodes(*t.corridor, t.frame, distances, offsets, popt).path.length();
      }
      const auto t1 = std::chrono::steady_clock::now();
      if (sink < 0.0) {
        break;
      }
      out[c].mean_time = std::min(out[c].mean_time,
          std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(tasks.size()));
    }
  }
  double max_err = 0.0;
  double max_time = 0.0;
  for (const auto & p : out) {
    max_err = std::max(max_err, p.mean_error);
    max_time = std::max(max_time, p.mean_time);
  }
  for (auto & p : out) {
    p.normalized_error = max_err > 0.0 ? p.mean_error / max_err : 0.0;
    p.normalized_time = max_time > 0.0 ? p.mean_time / max_time : 0.0;
  }
  return out;
}

}  // namespace

std::vector<NodeCountPoint> node_count_tradeoff(const Corridor & road, std::span<const int> counts,
  const NodeCountOptions & options)
{
  if (!(options.span > 0.0) || !(options.origin_spacing > 0.0) || !(options.sample_step > 0.0)) {
    throw ValidationError("node-count study needs positive span, spacing and sample step");
  }
  std::vector<CountTask> tasks;
  for (double s = 0.0; s + options.span <= road.length(); s += options.origin_spacing) {
    tasks.push_back({&road, PlanningFrame{road.pose_at(s)}, s});
  }
  return count_study(tasks, counts, options);
}

std::vector<NodeCountPoint> node_count_tradeoff(const DriveLog & log, std::span<const int> counts,
  int retrigger, const NodeCountOptions & options)
{
  if (retrigger < 1) {
    throw ValidationError("retrigger must be at least 1");
  }
  std::vector<Corridor> corridors;
  std::vector<double> origins;
  for (const auto & rec : log.records) {
    if (rec.cycle % retrigger != 0) {
      continue;
    }
    Corridor c = perceived_corridor(rec);
    const double s0 = c.project({0.0, 0.0}, 0.0, 20.0).s;
    if (s0 + options.span <= c.length()) {
      corridors.push_back(std::move(c));
      origins.push_back(s0);
    }
  }
  std::vector<CountTask> tasks;
  for (std::size_t k = 0; k < corridors.size(); ++k) {
    tasks.push_back({&corridors[k], PlanningFrame{corridors[k].pose_at(origins[k])}, origins[k]});
  }
  return count_study(tasks, counts, options);
}

std::string calibration_to_json(const CalibrationFile & file)
{
  nlohmann::ordered_json j;
  std::vector<double> gains;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      gains.push_back(file.result.gains.p(r, c));
    }
  }
  j["gains"] = gains;
  j["residual_rms"] = file.result.residual_rms;
  j["rank"] = file.result.rank;
  j["condition_number"] = file.result.condition_number;
  j["node_distances"] = file.params.as_array();
  j["provenance"] = {{"log_file", file.provenance.log_file},
    {"retrigger", file.provenance.retrigger}, {"timestamp", file.provenance.timestamp}};
  return j.dump(2) + "\n";
}

CalibrationFile calibration_from_json(std::string_view text)
{
  CalibrationFile out;
  try {
    const auto j = nlohmann::json::parse(text);
    const auto gains = j.at("gains").get<std::vector<double>>();
    if (gains.size() != 9) {
      throw ValidationError("calibration gains must have 9 entries");
    }
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        out.result.gains.p(r, c) = gains[static_cast<std::size_t>(3 * r + c)];
      }
    }
    out.result.residual_rms = j.value("residual_rms", 0.0);
    out.result.rank = j.value("rank", 3);
    out.result.condition_number = j.value("condition_number", 0.0);
    if (j.contains("node_distances")) {
      out.params = NodePointParams::from_array(j.at("node_distances").get<std::array<double, 3>>());
    }
    if (j.contains("provenance")) {
      const auto & p = j.at("provenance");
      out.provenance.log_file = p.value("log_file", "");
      out.provenance.retrigger = p.value("retrigger", kDefaultRetrigger);
      out.provenance.timestamp = p.value("timestamp", "");
    }
  } catch (const nlohmann::json::exception & e) {
    throw ValidationError(std::string("calibration file: ") + e.what());
  }
  out.params.validate();
  if (!out.result.gains.finite()) {
    throw ValidationError("calibration gains are not finite");
  }
  return out;
}

}  // namespace curvepath
