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

#include "curvepath/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "curvepath/errors.hpp"
#include "curvepath/kernels.hpp"
#include "csv_util.hpp"

namespace curvepath
{

std::vector<CurveSegment> detect_curve_segments(const Corridor & corridor,
  const CurveDetection & detection)
{
  if (!(detection.kappa_threshold > 0.0) || !(detection.min_length > 0.0)) {
    throw ValidationError("curve detection thresholds must be positive");
  }
  std::vector<CurveSegment> out;
  const auto samples = corridor.samples();
  std::size_t i = 0;
  while (i < samples.size()) {
    const double k = samples[i].kappa;
    if (std::abs(k) < detection.kappa_threshold) {
      ++i;
      continue;
    }
    const bool left = k > 0.0;
    std::size_t j = i;
    double peak = 0.0;
    while (j < samples.size() && std::abs(samples[j].kappa) >= detection.kappa_threshold &&
      (samples[j].kappa > 0.0) == left)
    {
      peak = std::max(peak, std::abs(samples[j].kappa));
      ++j;
    }
    const double start = samples[i].s;
    const double end = samples[j - 1].s;
    if (end - start >= detection.min_length) {
      out.push_back({start, end, peak, left ? CurveDirection::kLeft : CurveDirection::kRight});
    }
    i = j;
  }
  return out;
}

std::vector<Projection> project_trace(const SimTrace & trace, const Corridor & corridor)
{
  std::vector<Projection> out;
  out.reserve(trace.samples.size());
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const Point2 p = trace.samples[i].pose.position();
    out.push_back(i == 0 ? corridor.project(p) :
      corridor.project(p, out.back().s - 10.0, out.back().s + 30.0));
  }
  return out;
}

namespace
{

bool inside(const CurveSegment & seg, double s)
{
  return s >= seg.start && s <= seg.end;
}

}  // namespace

SafetyReport safety_metrics(const SimTrace & trace, const Corridor & corridor,
  const VehicleSpec & vehicle, const std::vector<CurveSegment> & segments)
{
  if (!(vehicle.width > 0.0)) {
    throw ValidationError("vehicle width must be positive");
  }
  SafetyReport report;
  report.min_border_distance = std::numeric_limits<double>::infinity();
  const double half_lane = 0.5 * corridor.lane_width();
  const auto proj = project_trace(trace, corridor);
  report.segments.reserve(segments.size());
  for (const auto & seg : segments) {
    report.segments.push_back({seg, 0, 0.0, std::numeric_limits<double>::infinity()});
  }
  std::vector<std::size_t> seg_violations(segments.size(), 0);
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const double outer_edge = std::abs(proj[i].lateral) + 0.5 * vehicle.width;
    const bool violating = outer_edge > half_lane;
    const double border = std::max(0.0, half_lane - outer_edge);
    ++report.samples;
    report.violations += violating ? 1 : 0;
    report.min_border_distance = std::min(report.min_border_distance, border);
    for (std::size_t k = 0; k < segments.size(); ++k) {
      if (inside(segments[k], proj[i].s)) {
        auto & ss = report.segments[k];
        ++ss.samples;
        seg_violations[k] += violating ? 1 : 0;
        ss.min_border_distance = std::min(ss.min_border_distance, border);
      }
    }
  }
  if (report.samples == 0) {
    throw EmptyDataError("trace has no samples");
  }
  report.border_violation_ratio = static_cast<double>(report.violations) /
    static_cast<double>(report.samples);
  for (std::size_t k = 0; k < segments.size(); ++k) {
    auto & ss = report.segments[k];
    if (ss.samples > 0) {
      ss.violation_ratio = static_cast<double>(seg_violations[k]) /
        static_cast<double>(ss.samples);
    } else {
      ss.min_border_distance = 0.0;
    }
  }
  return report;
}

PerformanceReport performance_metrics(const SimTrace & planned, const SimTrace & human,
  const Corridor & corridor, const std::vector<CurveSegment> & segments,
  const PerformanceOptions & options)
{
  const auto ps = project_trace(planned, corridor);
  const auto hs = project_trace(human, corridor);
  PerformanceReport report;
  double sum = 0.0;
  std::size_t same_side = 0;
  for (const auto & seg : segments) {
    std::vector<Point2> line;
    std::vector<double> line_offset;
    // The reference polyline reaches a little past the segment so that
    // planned samples at the boundary still find their counterpart.
    const CurveSegment padded{seg.start - options.boundary_margin,
      seg.end + options.boundary_margin, seg.peak_kappa, seg.direction};
    for (std::size_t j = 0; j < human.samples.size(); ++j) {
      if (inside(padded, hs[j].s)) {
        line.push_back(human.samples[j].pose.position());
        line_offset.push_back(hs[j].lateral);
      }
    }
    if (line.empty()) {
      continue;
    }
    for (std::size_t i = 0; i < planned.samples.size(); ++i) {
      if (!inside(seg, ps[i].s)) {
        continue;
      }
      const auto hit = kernels::closest_on_polyline(planned.samples[i].pose.position(), line);
      const double ref = line.size() == 1 ? line_offset[0] :
        line_offset[hit.piece] + hit.t * (line_offset[hit.piece + 1] - line_offset[hit.piece]);
      const double own = ps[i].lateral;
      const bool both_small = std::abs(own) < options.zero_band && std::abs(ref) < options.zero_band;
      if (both_small || own * ref > 0.0) {
        ++same_side;
      }
      sum += hit.distance;
      report.max_distance = std::max(report.max_distance, hit.distance);
      ++report.samples;
    }
  }
  if (report.samples == 0) {
    throw ValidationError("no curve segment holds samples of both traces");
  }
  report.avg_distance = sum / static_cast<double>(report.samples);
  report.side_correctness = static_cast<double>(same_side) / static_cast<double>(report.samples);
  return report;
}

namespace
{

std::vector<double> trace_curvature(const SimTrace & trace)
{
  const auto & t = trace.samples;
  std::vector<double> k(t.size(), 0.0);
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double ds = distance(t[i - 1].pose.position(), t[i].pose.position()) +
      distance(t[i].pose.position(), t[i + 1].pose.position());
    if (ds > 0.0) {
      k[i] = angle_difference(t[i + 1].pose.theta, t[i - 1].pose.theta) / ds;
    }
  }
  if (t.size() >= 3) {
    k.front() = k[1];
    k.back() = k[t.size() - 2];
  }
  return k;
}

double interpolate_by_s(const std::vector<double> & s, const std::vector<double> & v, double at)
{
  if (s.empty()) {
    return 0.0;
  }
  const auto it = std::upper_bound(s.begin(), s.end(), at);
  if (it == s.begin()) {
    return v.front();
  }
  if (it == s.end()) {
    return v.back();
  }
  const auto j = static_cast<std::size_t>(it - s.begin());
  const double r = s[j] > s[j - 1] ? (at - s[j - 1]) / (s[j] - s[j - 1]) : 0.0;
  return v[j - 1] + r * (v[j] - v[j - 1]);
}

}  // namespace

CaseStudy case_study_data(const SimTrace & trace, const SimTrace & human, const Corridor & corridor,
  const CurveSegment & segment, double padding)
{
  CaseStudy out;
  out.segment = segment;
  const auto pp = project_trace(trace, corridor);
  const auto hp = project_trace(human, corridor);
  std::vector<double> hs;
  std::vector<double> h_offset;
  for (const auto & p : hp) {
    // Keep the reference abscissa monotone for interpolation.
    hs.push_back(hs.empty() ? p.s : std::max(p.s, hs.back()));
    h_offset.push_back(p.lateral);
  }
  const auto pk = trace_curvature(trace);
  const auto hk = trace_curvature(human);
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const double s = pp[i].s;
    if (s < segment.start - padding || s > segment.end + padding) {
      continue;
    }
    CaseStudyRow row;
    row.s = s;
    row.planned_offset = pp[i].lateral;
    row.ref_offset = interpolate_by_s(hs, h_offset, s);
    row.planned_kappa = pk[i];
    row.ref_kappa = interpolate_by_s(hs, hk, s);
    row.corridor_kappa = corridor.kappa_at(s);
    out.rows.push_back(row);
  }
  if (out.rows.empty()) {
    throw ValidationError("trace has no samples around the case-study segment");
  }
  return out;
}

void emit_case_study(const CaseStudy & data, const std::filesystem::path & dir)
{
  std::filesystem::create_directories(dir);
  std::ofstream off(dir / "offsets.csv");
  std::ofstream cur(dir / "curvature.csv");
  if (!off || !cur) {
    throw ValidationError("cannot write case-study files in " + dir.string());
  }
  off << "s,planned,ref\n";
  cur << "s,planned,ref,cor,planned_minus_cor\n";
  for (const auto & r : data.rows) {
    off << format_number(r.s) << ',' << format_number(r.planned_offset) << ',' <<
      format_number(r.ref_offset) << '\n';
    cur << format_number(r.s) << ',' << format_number(r.planned_kappa) << ',' <<
      format_number(r.ref_kappa) << ',' << format_number(r.corridor_kappa) << ',' <<
      format_number(r.planned_kappa - r.corridor_kappa) << '\n';
  }
}

Corridor corridor_from_log(const DriveLog & log)
{
  std::vector<CorridorSample> samples;
  double heading = 0.0;
  for (const auto & rec : log.records) {
    const LanePolynomial & lane = rec.lane;
    const double slope = lane.slope(0.0);
    const Pose local(0.0, lane.value(0.0), std::atan(slope));
    const Pose global = from_planning_frame(local, PlanningFrame{rec.pose});
    CorridorSample smp;
    smp.pose = global;
    smp.kappa = lane.second_derivative(0.0) / std::pow(1.0 + slope * slope, 1.5);
    if (samples.empty()) {
      heading = global.theta;
      smp.s = 0.0;
    } else {
      const double ds = distance(samples.back().pose.position(), global.position());
      if (!(ds > 1e-9)) {
        continue;
      }
      heading += angle_difference(global.theta, samples.back().pose.theta);
      smp.s = samples.back().s + ds;
    }
    smp.heading = heading;
    samples.push_back(smp);
  }
  return Corridor(std::move(samples), log.empty() ? kDefaultLaneWidth : log.records.front().lane_width);
}

void write_safety_csv(std::ostream & out, const std::vector<DriverReport> & reports)
{
  out << kSafetyHeader << '\n';
  for (const auto & r : reports) {
    out << r.driver_id << ',' << format_number(100.0 * r.safety.border_violation_ratio) << ',' <<
      format_number(r.safety.min_border_distance) << '\n';
  }
}

void write_performance_csv(std::ostream & out, const std::vector<DriverReport> & reports)
{
  out << kPerformanceHeader << '\n';
  for (const auto & r : reports) {
    out << r.driver_id << ',' << format_number(r.performance.avg_distance) << ',' <<
      format_number(r.performance.max_distance) << ',' <<
      format_number(100.0 * r.performance.side_correctness) << '\n';
  }
}

std::string safety_json(const std::vector<DriverReport> & reports)
{
  auto j = nlohmann::ordered_json::array();
  for (const auto & r : reports) {
    nlohmann::ordered_json row;
    row["driver_id"] = r.driver_id;
    row["border_violation_pct"] = 100.0 * r.safety.border_violation_ratio;
    row["min_border_distance_m"] = r.safety.min_border_distance;
    j.push_back(row);
  }
  return j.dump(2) + "\n";
}

std::string performance_json(const std::vector<DriverReport> & reports)
{
  auto j = nlohmann::ordered_json::array();
  for (const auto & r : reports) {
    nlohmann::ordered_json row;
    row["driver_id"] = r.driver_id;
    row["avg_distance_m"] = r.performance.avg_distance;
    row["max_distance_m"] = r.performance.max_distance;
    row["side_correctness_pct"] = 100.0 * r.performance.side_correctness;
    j.push_back(row);
  }
  return j.dump(2) + "\n";
}

namespace
{

std::vector<std::vector<std::string>> read_table(std::istream & in, std::string_view header,
  std::size_t columns)
{
  std::string raw;
  if (!std::getline(in, raw) || detail::trim(raw) != header) {
    throw ParseError("expected header '" + std::string(header) + "'", 1);
  }
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty()) {
      continue;
    }
    const auto f = detail::split(line);
    if (f.size() != columns) {
      throw ParseError("expected " + std::to_string(columns) + " columns", line_no);
    }
    std::vector<std::string> row(f.begin(), f.end());
    // Validate the numeric columns here so the line number is available.
    for (std::size_t c = 1; c < columns; ++c) {
      detail::parse_double(f[c], line_no, "value");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double number(const std::string & field)
{
  return detail::parse_double(field, 0, "value");
}

}  // namespace

std::vector<DriverReport> read_reports_csv(std::istream & safety, std::istream & performance)
{
  const auto srows = read_table(safety, kSafetyHeader, 3);
  const auto prows = read_table(performance, kPerformanceHeader, 4);
  std::map<std::string, const std::vector<std::string> *> perf;
  for (const auto & r : prows) {
    perf[r[0]] = &r;
  }
  std::vector<DriverReport> out;
  for (const auto & r : srows) {
    DriverReport rep;
    rep.driver_id = r[0];
    rep.safety.border_violation_ratio = number(r[1]) / 100.0;
    rep.safety.min_border_distance = number(r[2]);
    const auto it = perf.find(r[0]);
    if (it == perf.end()) {
      throw ValidationError("driver " + r[0] + " missing from the performance report");
    }
    rep.performance.avg_distance = number((*it->second)[1]);
    rep.performance.max_distance = number((*it->second)[2]);
    rep.performance.side_correctness = number((*it->second)[3]) / 100.0;
    out.push_back(rep);
  }
  return out;
}

}  // namespace curvepath
