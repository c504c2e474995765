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

#include "curvepath/drive_log.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "curvepath/clothoid.hpp"
#include "curvepath/errors.hpp"
#include "csv_util.hpp"

namespace curvepath
{

using detail::parse_double;
using detail::parse_int;
using detail::split;
using detail::trim;

void DriveLog::validate() const
{
  if (!(sample_time > 0.0)) {
    throw IntegrityError("drive log sample time must be positive");
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto & r = records[i];
    if (i > 0 && r.cycle != records[i - 1].cycle + 1) {
      throw IntegrityError("non-contiguous cycle index " + std::to_string(r.cycle) + " after " +
              std::to_string(records[i - 1].cycle));
    }
    if (!(r.speed >= 0.0)) {
      throw IntegrityError("negative speed at cycle " + std::to_string(r.cycle));
    }
    if (!(r.lane_width > 0.0)) {
      throw IntegrityError("non-positive lane width at cycle " + std::to_string(r.cycle));
    }
  }
}

std::string format_number(double value)
{
  if (!std::isfinite(value)) {
    throw ValidationError("cannot format non-finite number");
  }
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  const std::string_view shortest(buf, static_cast<std::size_t>(res.ptr - buf));
  const auto dot = shortest.find('.');
  const int decimals = dot == std::string_view::npos ?
    0 : static_cast<int>(shortest.size() - dot - 1);
  int needed = 9;
  if (value != 0.0) {
    const int exponent = static_cast<int>(std::floor(std::log10(std::abs(value))));
    needed = std::max(0, 8 - exponent);
  }
  const int precision = std::clamp(std::max({decimals, needed, 1}), 1, 400);
  res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}


DriveLog parse_drive_log(std::istream & in)
{
  std::string raw;
  std::size_t line_no = 0;
  if (!std::getline(in, raw)) {
    throw ParseError("missing header", 1);
  }
  ++line_no;
  if (trim(raw) != kDriveLogHeader) {
    throw ParseError("unexpected header, expected '" + std::string(kDriveLogHeader) + "'", 1);
  }
  constexpr std::array<std::string_view, 11> names = {"cycle", "t", "x", "y", "theta", "speed",
    "c0", "c1", "c2", "c3", "lane_width"};

  DriveLog log;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) {
      continue;
    }
    const auto fields = split(line);
    if (fields.size() != names.size()) {
      throw ParseError("expected " + std::to_string(names.size()) + " columns, found " +
              std::to_string(fields.size()), line_no);
    }
    DriveRecord r;
    r.cycle = parse_int(fields[0], line_no);
    r.t = parse_double(fields[1], line_no, names[1]);
    const double x = parse_double(fields[2], line_no, names[2]);
    const double y = parse_double(fields[3], line_no, names[3]);
    const double theta = parse_double(fields[4], line_no, names[4]);
    r.pose = Pose(x, y, theta);
    r.speed = parse_double(fields[5], line_no, names[5]);
    r.lane.c0 = parse_double(fields[6], line_no, names[6]);
    r.lane.c1 = parse_double(fields[7], line_no, names[7]);
    r.lane.c2 = parse_double(fields[8], line_no, names[8]);
    r.lane.c3 = parse_double(fields[9], line_no, names[9]);
    r.lane_width = parse_double(fields[10], line_no, names[10]);
    log.records.push_back(r);
  }
  if (log.records.empty()) {
    throw EmptyDataError("drive log has no records");
  }
  if (log.records.size() >= 2) {
    log.sample_time = log.records[1].t - log.records[0].t;
  }
  log.validate();
  return log;
}

DriveLog load_drive_log(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open drive log " + path.string());
  }
  return parse_drive_log(in);
}

void write_drive_log(std::ostream & out, const DriveLog & log)
{
  out << kDriveLogHeader << '\n';
  for (const auto & r : log.records) {
    out << r.cycle << ',' << format_number(r.t) << ',' << format_number(r.pose.x) << ',' <<
      format_number(r.pose.y) << ',' << format_number(r.pose.theta) << ',' <<
      format_number(r.speed) << ',' << format_number(r.lane.c0) << ',' <<
      format_number(r.lane.c1) << ',' << format_number(r.lane.c2) << ',' <<
      format_number(r.lane.c3) << ',' << format_number(r.lane_width) << '\n';
  }
}

void save_drive_log(const std::filesystem::path & path, const DriveLog & log)
{
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("cannot write drive log " + path.string());
  }
  write_drive_log(out, log);
}

Corridor perceived_corridor(const DriveRecord & record, double step)
{
  return corridor_from_polynomial(record.lane, step, record.lane_width);
}

std::vector<HumanSample> project_human_path(const DriveLog & log, std::size_t from,
  const Corridor & local_corridor, double s_max)
{
  std::vector<HumanSample> out;
  if (from >= log.records.size()) {
    return out;
  }
  const PlanningFrame frame{log.records[from].pose};
  double prev_s = 0.0;
  for (std::size_t j = from; j < log.records.size(); ++j) {
    HumanSample smp;
    smp.index = j;
    smp.local = to_planning_frame(log.records[j].pose, frame);
    const double lo = j == from ? 0.0 : prev_s - 5.0;
    const double hi = j == from ? 20.0 : prev_s + 25.0;
    const Projection p = local_corridor.project(smp.local.position(), lo, hi);
    smp.s = p.s;
    smp.lateral = p.lateral;
    prev_s = p.s;
    out.push_back(smp);
    if (p.s >= s_max || p.s >= local_corridor.length()) {
      break;
    }
  }
  return out;
}

std::optional<double> measure_offset(std::span<const HumanSample> samples, double s)
{
  for (std::size_t j = 0; j + 1 < samples.size(); ++j) {
    const auto & a = samples[j];
    const auto & b = samples[j + 1];
    if (a.s <= s && s <= b.s) {
      if (b.s == a.s) {
        return a.lateral;
      }
      const double r = (s - a.s) / (b.s - a.s);
      return a.lateral + r * (b.lateral - a.lateral);
    }
  }
  if (!samples.empty() && samples.back().s == s) {
    return samples.back().lateral;
  }
  return std::nullopt;
}

std::optional<std::array<double, 3>> measure_offsets(std::span<const HumanSample> samples,
  const std::array<double, 3> & node_arclengths)
{
  std::array<double, 3> out{};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto v = measure_offset(samples, node_arclengths[k]);
    if (!v) {
      return std::nullopt;
    }
    out[k] = *v;
  }
  return out;
}

std::optional<Pose> interpolate_human_pose(std::span<const HumanSample> samples,
  const Corridor & local_corridor, double s)
{
  for (std::size_t j = 0; j + 1 < samples.size(); ++j) {
    const auto & a = samples[j];
    const auto & b = samples[j + 1];
    if (!(a.s <= s && s <= b.s)) {
      continue;
    }
    if (s == a.s) {
      return a.local;
    }
    if (s == b.s) {
      return b.local;
    }
    const ClothoidSegment seg = fit_g1(a.local, b.local);
    const double rate = seg.length / (b.s - a.s);
    double u = (s - a.s) * rate;
    for (int it = 0; it < 4; ++it) {
      const Pose p = evaluate_unchecked(seg, u);
      const double ps = local_corridor.project(p.position(), a.s - 1.0, b.s + 1.0).s;
      u = std::clamp(u + (s - ps) * rate, 0.0, seg.length);
    }
    return evaluate_unchecked(seg, u);
  }
  return std::nullopt;
}

}  // namespace curvepath
