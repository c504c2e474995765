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

#ifndef CURVEPATH__EVALUATION_HPP_
#define CURVEPATH__EVALUATION_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "curvepath/drive_log.hpp"
#include "curvepath/geometry.hpp"
#include "curvepath/replay.hpp"

namespace curvepath
{

enum class CurveDirection
{
  kLeft,
  kRight,
};

struct CurveSegment
{
  double start{0.0};
  double end{0.0};
  double peak_kappa{0.0};
  CurveDirection direction{CurveDirection::kLeft};
};

struct CurveDetection
{
  double kappa_threshold{0.001};
  double min_length{50.0};
};

/// Maximal runs of |kappa| >= threshold with one sign, at least min_length long.
std::vector<CurveSegment> detect_curve_segments(const Corridor & corridor,
  const CurveDetection & detection = {});

struct VehicleSpec
{
  double width{1.8};
};

struct SegmentSafety
{
  CurveSegment segment;
  std::size_t samples{0};
  double violation_ratio{0.0};
  double min_border_distance{0.0};
};

struct SafetyReport
{
  double border_violation_ratio{0.0};
  /// Worst case over the route.
  double min_border_distance{0.0};
  std::size_t samples{0};
  std::size_t violations{0};
  std::vector<SegmentSafety> segments;
};

/// Vehicle reduced to two side-edge points at +-width/2 around the ego offset,
/// measured against `corridor`.
SafetyReport safety_metrics(const SimTrace & trace, const Corridor & corridor,
  const VehicleSpec & vehicle, const std::vector<CurveSegment> & segments);

struct PerformanceOptions
{
  /// Both offsets inside this band count as the same side.
  double zero_band{0.01};
  /// Extra reference path kept on both sides of a segment [m].
  double boundary_margin{5.0};
};

struct PerformanceReport
{
  double avg_distance{0.0};
  double max_distance{0.0};
  double side_correctness{0.0};
  std::size_t samples{0};
};

/// Planned samples inside the segments against the nearest point of the human
/// polyline restricted to the same segment. Throws ValidationError when no
/// segment holds samples of both traces.
PerformanceReport performance_metrics(const SimTrace & planned, const SimTrace & human,
  const Corridor & corridor, const std::vector<CurveSegment> & segments,
  const PerformanceOptions & options = {});

/// Every trace sample projected on the corridor (sequential windowed projection).
std::vector<Projection> project_trace(const SimTrace & trace, const Corridor & corridor);

struct CaseStudyRow
{
  double s{0.0};
  double planned_offset{0.0};
  double ref_offset{0.0};
  double planned_kappa{0.0};
  double ref_kappa{0.0};
  double corridor_kappa{0.0};
};

struct CaseStudy
{
  CurveSegment segment;
  std::vector<CaseStudyRow> rows;
};

/// Offsets and curvatures of the planned and reference traces around one curve
/// segment, padded by `padding` metres on both sides.
CaseStudy case_study_data(const SimTrace & trace, const SimTrace & human, const Corridor & corridor,
  const CurveSegment & segment, double padding = 100.0);

/// Writes offsets.csv (s,planned,ref) and curvature.csv (s,planned,ref,cor,planned_minus_cor).
void emit_case_study(const CaseStudy & data, const std::filesystem::path & dir);

/// Global midline reconstructed from the perceived lanes of a log.
Corridor corridor_from_log(const DriveLog & log);

struct DriverReport
{
  std::string driver_id;
  SafetyReport safety;
  PerformanceReport performance;
};

inline constexpr std::string_view kSafetyHeader =
  "driver_id,border_violation_pct,min_border_distance_m";
inline constexpr std::string_view kPerformanceHeader =
  "driver_id,avg_distance_m,max_distance_m,side_correctness_pct";

void write_safety_csv(std::ostream & out, const std::vector<DriverReport> & reports);
void write_performance_csv(std::ostream & out, const std::vector<DriverReport> & reports);
std::string safety_json(const std::vector<DriverReport> & reports);
std::string performance_json(const std::vector<DriverReport> & reports);

/// Parses both report CSVs back (rows matched by driver id, order of the safety file).
std::vector<DriverReport> read_reports_csv(std::istream & safety, std::istream & performance);

}  // namespace curvepath

#endif  // CURVEPATH__EVALUATION_HPP_
