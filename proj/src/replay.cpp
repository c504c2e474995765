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

#include "curvepath/replay.hpp"

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "curvepath/errors.hpp"
#include "csv_util.hpp"

namespace curvepath
{

ReplayMode parse_replay_mode(const std::string & name)
{
  if (name == "estimation") {
    return ReplayMode::kEstimation;
  }
  if (name == "validation") {
    return ReplayMode::kValidation;
  }
  throw ValidationError("unknown replay mode '" + name + "'");
}

const char * replay_mode_name(ReplayMode mode)
{
  return mode == ReplayMode::kEstimation ? "estimation" : "validation";
}

namespace
{

double offset_to_midline(const DriveRecord & rec, const Pose & ego)
{
  return lateral_offset(rec.lane, to_planning_frame(ego, PlanningFrame{rec.pose}).position());
}

PlannedPath plan_cycle(const DriveLog & log, std::size_t i, const Corridor & corridor,
  const PlanningFrame & frame, const GainMatrix & gains, const NodePointParams & params,
  ReplayMode mode, const ReplayOptions & options)
{
  if (mode == ReplayMode::kValidation) {
    return plan_path(corridor, gains, params, frame, options.planner);
  }
  const auto range = options.planner.origin_search.value_or(
    std::pair<double, double>{0.0, corridor.length()});
  const double origin_s = corridor.project(frame.origin.position(), range.first, range.second).s;
  const auto d = params.as_array();
  const std::array<double, 3> node_s{origin_s + d[0], origin_s + d[1], origin_s + d[2]};
  if (node_s[2] > corridor.length() + 1e-9) {
    throw InsufficientPreviewError("far node beyond the perceived corridor");
  }
  const auto samples = project_human_path(log, i, corridor, node_s[2]);
  const auto measured = measure_offsets(samples, node_s);
  if (!measured) {
    throw InsufficientPreviewError("logged human path does not reach the far node");
  }
  const OffsetVector offsets{(*measured)[0], (*measured)[1], (*measured)[2]};
  return plan_path_with_offsets(corridor, offsets, params, frame, options.planner);
}

}  // namespace

SimTrace run_replay(const DriveLog & log, const GainMatrix & gains, const NodePointParams & params,
  int retrigger, ReplayMode mode, const ReplayOptions & options)
{
  if (log.empty()) {
    throw EmptyDataError("drive log has no records");
  }
  if (retrigger < 1) {
    throw ValidationError("retrigger must be at least 1");
  }
  params.validate();
  if (mode == ReplayMode::kValidation && !gains.finite()) {
    throw ValidationError("gain matrix has non-finite entries");
  }
  SimTrace trace;
  Pose ego = log.records.front().pose;
  const PlannedPath * active = nullptr;
  double progress = 0.0;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const DriveRecord & rec = log.records[i];
    if (active == nullptr) {
      ego = rec.pose;
    }
    if (rec.cycle % retrigger == 0) {
      try {
        const Corridor corridor = perceived_corridor(rec, options.corridor_step);
        const PlanningFrame frame{to_planning_frame(ego, PlanningFrame{rec.pose})};
        PlannedPath plan = plan_cycle(log, i, corridor, frame, gains, params, mode, options);
        plan.frame = PlanningFrame{ego};
        const int id = static_cast<int>(trace.replans.size());
        trace.replans.push_back({rec.cycle, id, std::move(plan)});
        active = &trace.replans.back().plan;
        progress = 0.0;
      } catch (const Error & e) {
        trace.gaps.push_back({rec.cycle, e.what()});
        active = trace.replans.empty() ? nullptr : &trace.replans.back().plan;
      }
    }
    TraceSample smp;
    smp.cycle = rec.cycle;
    smp.pose = ego;
    smp.offset = offset_to_midline(rec, ego);
    smp.path_id = trace.replans.empty() ? -1 : trace.replans.back().path_id;
    trace.samples.push_back(smp);
    if (active != nullptr) {
      progress += rec.speed * log.sample_time;
      ego = active->global_pose(progress);
    }
  }
  if (trace.replans.empty()) {
    throw EmptyDataError("no replan succeeded: " +
            (trace.gaps.empty() ? std::string("no retrigger instant") : trace.gaps.front().reason));
  }
  return trace;
}

SimTrace human_trace(const DriveLog & log)
{
  SimTrace trace;
  trace.samples.reserve(log.size());
  for (const auto & rec : log.records) {
    trace.samples.push_back({rec.cycle, rec.pose, offset_to_midline(rec, rec.pose), -1});
  }
  return trace;
}

void write_trace_csv(std::ostream & out, const SimTrace & trace)
{
  out << kTraceHeader << '\n';
  for (const auto & s : trace.samples) {
    out << s.cycle << ',' << format_number(s.pose.x) << ',' << format_number(s.pose.y) << ',' <<
      format_number(s.pose.theta) << ',' << format_number(s.offset) << ',' << s.path_id << '\n';
  }
}

SimTrace read_trace_csv(std::istream & in)
{
  std::string raw;
  if (!std::getline(in, raw) || detail::trim(raw) != kTraceHeader) {
    throw ParseError("expected header '" + std::string(kTraceHeader) + "'", 1);
  }
  SimTrace trace;
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty()) {
      continue;
    }
    const auto f = detail::split(line);
    if (f.size() != 6) {
      throw ParseError("expected 6 columns, found " + std::to_string(f.size()), line_no);
    }
    TraceSample s;
    s.cycle = detail::parse_int(f[0], line_no);
    s.pose = Pose(detail::parse_double(f[1], line_no, "x"), detail::parse_double(f[2], line_no, "y"),
      detail::parse_double(f[3], line_no, "theta"));
    s.offset = detail::parse_double(f[4], line_no, "offset");
    s.path_id = static_cast<int>(detail::parse_int(f[5], line_no));
    trace.samples.push_back(s);
  }
  if (trace.samples.empty()) {
    throw EmptyDataError("trace has no samples");
  }
  return trace;
}

void write_replans_jsonl(std::ostream & out, const SimTrace & trace)
{
  auto pose_json = [](const Pose & p) {
      return nlohmann::ordered_json::array({p.x, p.y, p.theta});
    };
  for (const auto & r : trace.replans) {
    nlohmann::ordered_json j;
    j["cycle"] = r.cycle;
    j["path_id"] = r.path_id;
    j["frame"] = pose_json(r.plan.frame.origin);
    j["curvature_inputs"] = {r.plan.input.kappa_on, r.plan.input.kappa_nm, r.plan.input.kappa_mf};
    j["offsets"] = {r.plan.offsets.delta_n, r.plan.offsets.delta_m, r.plan.offsets.delta_f};
    j["offsets_plausible"] = r.plan.offsets_plausible;
    auto nodes = nlohmann::ordered_json::array();
    for (const auto & p : r.plan.node_poses) {
      nodes.push_back(pose_json(p));
    }
    j["node_poses"] = nodes;
    j["path_length"] = r.plan.path.length();
    out << j.dump() << '\n';
  }
  for (const auto & g : trace.gaps) {
    nlohmann::ordered_json j;
    j["cycle"] = g.cycle;
    j["gap"] = g.reason;
    out << j.dump() << '\n';
  }
}

}  // namespace curvepath
