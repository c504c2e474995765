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

#ifndef CURVEPATH__DRIVE_LOG_HPP_
#define CURVEPATH__DRIVE_LOG_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curvepath/geometry.hpp"

namespace curvepath
{

inline constexpr double kDefaultSampleTime = 0.05;
inline constexpr std::string_view kDriveLogHeader = "cycle,t,x,y,theta,speed,c0,c1,c2,c3,lane_width";

/// One perception/ego cycle. `lane` is the midline seen from `pose`.
struct DriveRecord
{
  std::int64_t cycle{0};
  double t{0.0};
  Pose pose;
  double speed{0.0};
  LanePolynomial lane;
  double lane_width{kDefaultLaneWidth};
};

struct DriveLog
{
  std::vector<DriveRecord> records;
  double sample_time{kDefaultSampleTime};

  std::size_t size() const {return records.size();}
  bool empty() const {return records.empty();}
  /// Throws IntegrityError on non-contiguous cycles, negative speed or bad sample time.
  void validate() const;
};

/// Fixed notation with at least nine significant digits that parses back to the same double.
std::string format_number(double value);

DriveLog parse_drive_log(std::istream & in);
DriveLog load_drive_log(const std::filesystem::path & path);
void write_drive_log(std::ostream & out, const DriveLog & log);
void save_drive_log(const std::filesystem::path & path, const DriveLog & log);

/// Midline corridor of a record, expressed in that record's vehicle frame.
Corridor perceived_corridor(const DriveRecord & record, double step = kDefaultCorridorStep);

/// A logged ego pose re-expressed in a reference record's vehicle frame and
/// projected onto that record's perceived corridor.
struct HumanSample
{
  std::size_t index{0};
  Pose local;
  double s{0.0};
  double lateral{0.0};
};

/// Projects records from..end onto `local_corridor` (the perceived corridor of
/// record `from`) and stops at the first sample at or beyond `s_max`.
std::vector<HumanSample> project_human_path(const DriveLog & log, std::size_t from,
  const Corridor & local_corridor, double s_max);

/// Human lateral offset at arc length s, linearly interpolated between the
/// bracketing samples. Empty when the samples do not reach s.
std::optional<double> measure_offset(std::span<const HumanSample> samples, double s);

std::optional<std::array<double, 3>> measure_offsets(std::span<const HumanSample> samples,
  const std::array<double, 3> & node_arclengths);

/// Human pose at arc length s on the G1 clothoid through the bracketing samples.
std::optional<Pose> interpolate_human_pose(std::span<const HumanSample> samples,
  const Corridor & local_corridor, double s);

}  // namespace curvepath

#endif  // CURVEPATH__DRIVE_LOG_HPP_
