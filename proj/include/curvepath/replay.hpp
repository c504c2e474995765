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

#ifndef CURVEPATH__REPLAY_HPP_
#define CURVEPATH__REPLAY_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "curvepath/calibration.hpp"
#include "curvepath/drive_log.hpp"
#include "curvepath/driver_model.hpp"

namespace curvepath
{

enum class ReplayMode
{
  kEstimation,  ///< node offsets measured on the logged human path
  kValidation,  ///< node offsets from the gain matrix
};

ReplayMode parse_replay_mode(const std::string & name);
const char * replay_mode_name(ReplayMode mode);

struct ReplayOptions
{
  PlannerOptions planner;
  double corridor_step{kDefaultCorridorStep};
};

struct TraceSample
{
  std::int64_t cycle{0};
  Pose pose;
  double offset{0.0};  ///< to the perceived midline, positive left
  int path_id{-1};     ///< -1 before the first plan
};

struct ReplanRecord
{
  std::int64_t cycle{0};
  int path_id{0};
  PlannedPath plan;  ///< frame is the global ego pose at the replan
};

struct GapEvent
{
  std::int64_t cycle{0};
  std::string reason;
};

struct SimTrace
{
  std::vector<TraceSample> samples;
  std::vector<ReplanRecord> replans;
  std::vector<GapEvent> gaps;
};

/// Cyclic replanning over a drive log. At every cycle divisible by `retrigger`
/// a new path is planned from the simulated ego pose on that cycle's perceived
/// corridor; in between the ego advances speed * sample_time along the active
/// path. A replan that fails keeps the previous path and is recorded as a gap.
/// Throws EmptyDataError when no replan succeeds.
SimTrace run_replay(const DriveLog & log, const GainMatrix & gains, const NodePointParams & params,
  int retrigger, ReplayMode mode, const ReplayOptions & options = {});

/// The logged human path as a trace (path_id -1).
SimTrace human_trace(const DriveLog & log);

inline constexpr std::string_view kTraceHeader = "cycle,x,y,theta,offset,path_id";

void write_trace_csv(std::ostream & out, const SimTrace & trace);
SimTrace read_trace_csv(std::istream & in);
/// One JSON object per line: cycle, path id, frame, curvature inputs, offsets, node poses.
void write_replans_jsonl(std::ostream & out, const SimTrace & trace);

}  // namespace curvepath

#endif  // CURVEPATH__REPLAY_HPP_
