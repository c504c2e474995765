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

#include "curvepath/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "curvepath/calibration.hpp"
#include "curvepath/drive_log.hpp"
#include "curvepath/errors.hpp"
#include "curvepath/evaluation.hpp"
#include "curvepath/replay.hpp"
#include "curvepath/scenario.hpp"
#include "curvepath/synthetic.hpp"

namespace curvepath
{

namespace
{

namespace fs = std::filesystem;

std::string read_file(const fs::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path & path, const std::string & text)
{
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("cannot write " + path.string());
  }
  out << text;
}

// --config <file.json>: every key becomes "--key value" ahead of the command
// line, so explicit flags still win.
std::vector<std::string> expand_config(const std::vector<std::string> & args)
{
  std::vector<std::string> out;
  std::optional<std::string> config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (!config || out.empty()) {
    return out;
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(*config));
  } catch (const nlohmann::json::exception & e) {
    throw ValidationError("config " + *config + ": " + e.what());
  }
  if (!j.is_object()) {
    throw ValidationError("config " + *config + " must hold a JSON object");
  }
  std::vector<std::string> injected;
  for (const auto & [key, value] : j.items()) {
    const std::string flag = "--" + key;
    auto scalar = [](const nlohmann::json & v) {
        return v.is_string() ? v.get<std::string>() : v.dump();
      };
    if (value.is_boolean()) {
      if (value.get<bool>()) {
        injected.push_back(flag);
      }
    } else if (value.is_array()) {
      injected.push_back(flag);
      for (const auto & v : value) {
        injected.push_back(scalar(v));
      }
    } else {
      injected.push_back(flag);
      injected.push_back(scalar(value));
    }
  }
  out.insert(out.begin() + 1, injected.begin(), injected.end());
  return out;
}

std::string timestamp_now()
{
  std::time_t t = std::time(nullptr);
  if (const char * epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

ScenarioSpec named_scenario(const std::string & name)
{
  if (name == "route") {
    return route_scenario();
  }
  if (name == "s-curve") {
    return s_curve_scenario();
  }
  if (name == "straight") {
    return straight_scenario(2000.0);
  }
  throw ValidationError("unknown scenario '" + name + "' (route, s-curve, straight)");
}

std::vector<double> matrix_row_major(const Eigen::Matrix3d & p)
{
  std::vector<double> v;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      v.push_back(p(r, c));
    }
  }
  return v;
}

NodePointParams params_from(const std::vector<double> & d)
{
  if (d.size() != 3) {
    throw ValidationError("expected three node distances");
  }
  NodePointParams p{d[0], d[1], d[2]};
  p.validate();
  return p;
}

struct Common
{
  std::uint64_t seed{1};
  int retrigger{kDefaultRetrigger};
};

void add_common(CLI::App * cmd, Common & common)
{
  cmd->add_option("--seed", common.seed, "random seed")->capture_default_str();
  cmd->add_option("--config", "JSON file with option values (keys are long option names)");
}

void add_retrigger(CLI::App * cmd, Common & common)
{
  cmd->add_option("--retrigger", common.retrigger, "replanning period in cycles")
  ->capture_default_str()->check(CLI::PositiveNumber);
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs
{
  std::string out;
  std::string scenario{"route"};
  std::string scenario_file;
  int drivers{15};
  double noise{0.05};
  std::size_t cycles{0};
  std::vector<double> distances{10.0, 39.0, 137.0};
};

int run_synth(const SynthArgs & a, const Common & common, std::ostream & out)
{
  const ScenarioSpec spec = a.scenario_file.empty() ? named_scenario(a.scenario) :
    load_scenario(a.scenario_file);
  const NodePointParams params = params_from(a.distances);
  const Corridor road = build_scenario_road(spec);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_file(dir / "scenario.json", scenario_to_json(spec));

  std::mt19937_64 rng(common.seed);
  std::uniform_real_distribution<double> diag(10.0, 40.0);
  std::uniform_real_distribution<double> off(-8.0, 8.0);
  std::vector<SyntheticDriverSpec> drivers(static_cast<std::size_t>(std::max(0, a.drivers)));
  for (auto & d : drivers) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        d.gains_true.p(r, c) = r == c ? diag(rng) : off(rng);
      }
    }
    d.offset_noise_sigma = a.noise;
    d.seed = rng();
  }
  SyntheticLogOptions opts;
  opts.speed = spec.speed;
  opts.max_cycles = a.cycles;
  std::vector<std::string> errors(drivers.size());
  std::vector<DriveLog> logs(drivers.size());
  const auto n = static_cast<std::int64_t>(drivers.size());
  #pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      logs[i] = generate_synthetic_driver_log(road, drivers[i], params, common.retrigger, opts);
    } catch (const std::exception & e) {
      errors[i] = e.what();
    }
  }
  nlohmann::ordered_json cohort;
  cohort["scenario"] = "scenario.json";
  cohort["retrigger"] = common.retrigger;
  cohort["node_distances"] = params.as_array();
  cohort["seed"] = common.seed;
  auto list = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < drivers.size(); ++i) {
    if (!errors[i].empty()) {
      throw ValidationError("driver " + std::to_string(i + 1) + ": " + errors[i]);
    }
    std::ostringstream id;
    id << "driver_" << std::setw(2) << std::setfill('0') << i + 1;
    const std::string file = id.str() + ".csv";
    save_drive_log(dir / file, logs[i]);
    nlohmann::ordered_json d;
    d["id"] = id.str();
    d["log"] = file;
    d["seed"] = drivers[i].seed;
    d["noise_sigma"] = drivers[i].offset_noise_sigma;
    d["gains_true"] = matrix_row_major(drivers[i].gains_true.p);
    list.push_back(d);
  }
  cohort["drivers"] = list;
  write_file(dir / "cohort.json", cohort.dump(2) + "\n");
  out << "wrote " << drivers.size() << " driver logs to " << dir.string() << '\n';
  return kExitSuccess;
}

// ---- calibrate ------------------------------------------------------------

struct CalibrateArgs
{
  std::vector<std::string> logs;
  std::string out;
  std::vector<double> distances{10.0, 39.0, 137.0};
  bool optimize{false};
  bool sweep{false};
  std::string sweep_out;
  std::string scenario_file;
  int max_nodes{10};
};

int run_calibrate(const CalibrateArgs & a, const Common & common, std::ostream & out)
{
  NodePointParams params = params_from(a.distances);
  std::vector<DriveLog> logs;
  for (const auto & f : a.logs) {
    logs.push_back(load_drive_log(f));
  }
  if (a.sweep) {
    std::vector<int> counts;
    for (int k = 1; k <= a.max_nodes; ++k) {
      counts.push_back(k);
    }
    std::vector<NodeCountPoint> pts;
    if (!a.scenario_file.empty()) {
      const Corridor road = build_scenario_road(load_scenario(a.scenario_file));
      pts = node_count_tradeoff(road, counts);
    } else {
      pts = node_count_tradeoff(logs.front(), counts, common.retrigger);
    }
    std::ostringstream csv;
    csv << "nodes,mean_error_m,mean_time_s,normalized_error,normalized_time\n";
    for (const auto & p : pts) {
      csv << p.count << ',' << format_number(p.mean_error) << ',' << format_number(p.mean_time) <<
        ',' << format_number(p.normalized_error) << ',' << format_number(p.normalized_time) << '\n';
    }
    if (a.sweep_out.empty()) {
      out << csv.str();
    } else {
      write_file(a.sweep_out, csv.str());
    }
  }
  if (a.optimize) {
    std::array<double, 3> sum{};
    std::size_t windows = 0;
    for (const auto & log : logs) {
      const auto r = optimize_node_distances(log, params);
      for (const auto & w : r.windows) {
        if (w.flat) {
          continue;
        }
        const auto d = w.params.as_array();
        for (std::size_t k = 0; k < 3; ++k) {
          sum[k] += d[k];
        }
        ++windows;
      }
    }
    if (windows > 0) {
      for (auto & v : sum) {
        v /= static_cast<double>(windows);
      }
      params = NodePointParams::from_array(sum);
      params.validate();
    }
    out << "node distances: " << format_number(params.d_near) << ' ' <<
      format_number(params.d_mid) << ' ' << format_number(params.d_far) << " (" << windows <<
      " informative windows)\n";
  }
  RegressionDataset data;
  bool first = true;
  for (const auto & log : logs) {
    auto d = assemble_dataset(log, params, common.retrigger);
    data = first ? std::move(d) : RegressionDataset::concatenate(data, d);
    first = false;
  }
  CalibrationFile file;
  file.result = fit_gain_matrix(data);
  file.params = params;
  for (std::size_t i = 0; i < a.logs.size(); ++i) {
    file.provenance.log_file += (i ? ";" : "") + a.logs[i];
  }
  file.provenance.retrigger = common.retrigger;
  file.provenance.timestamp = timestamp_now();
  out << "columns: " << data.size() << " skipped: " << data.skipped << " rank: " <<
    file.result.rank << " residual_rms: " << format_number(file.result.residual_rms) << '\n';
  if (!a.out.empty()) {
    write_file(a.out, calibration_to_json(file));
  }
  return kExitSuccess;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs
{
  std::string log;
  std::string calibration;
  std::string mode{"validation"};
  std::string out;
  std::string replans;
  std::string origin_heading{"vehicle"};
  std::vector<double> distances;
};

PlannerOptions planner_options(const std::string & heading)
{
  PlannerOptions p;
  if (heading == "road") {
    p.origin_heading = OriginHeading::kRoad;
  } else if (heading != "vehicle") {
    throw ValidationError("origin heading must be vehicle or road");
  }
  return p;
}

SimTrace simulate(const DriveLog & log, const SimulateArgs & a, const Common & common)
{
  const ReplayMode mode = parse_replay_mode(a.mode);
  GainMatrix gains;
  NodePointParams params;
  if (!a.calibration.empty()) {
    const auto cal = calibration_from_json(read_file(a.calibration));
    gains = cal.result.gains;
    params = cal.params;
  } else if (mode == ReplayMode::kValidation) {
    throw ValidationError("validation mode needs --calibration");
  }
  if (!a.distances.empty()) {
    params = params_from(a.distances);
  }
  ReplayOptions opts;
  opts.planner = planner_options(a.origin_heading);
  return run_replay(log, gains, params, common.retrigger, mode, opts);
}

int run_simulate(const SimulateArgs & a, const Common & common, std::ostream & out)
{
  const DriveLog log = load_drive_log(a.log);
  const SimTrace trace = simulate(log, a, common);
  std::ostringstream csv;
  write_trace_csv(csv, trace);
  write_file(a.out, csv.str());
  if (!a.replans.empty()) {
    std::ostringstream jl;
    write_replans_jsonl(jl, trace);
    write_file(a.replans, jl.str());
  }
  out << "cycles: " << trace.samples.size() << " replans: " << trace.replans.size() <<
    " gaps: " << trace.gaps.size() << '\n';
  return kExitSuccess;
}

// ---- evaluate -------------------------------------------------------------

struct EvaluateArgs
{
  std::string cohort;
  std::string out;
  double width{1.8};
  double kappa_threshold{0.001};
  double min_length{50.0};
};

int run_evaluate(const EvaluateArgs & a, const Common & common, std::ostream & out)
{
  const fs::path dir(a.cohort);
  nlohmann::json cohort;
  try {
    cohort = nlohmann::json::parse(read_file(dir / "cohort.json"));
  } catch (const nlohmann::json::exception & e) {
    throw ValidationError(std::string("cohort.json: ") + e.what());
  }
  std::optional<Corridor> road;
  const std::string scenario = cohort.value("scenario", "");
  if (!scenario.empty() && fs::exists(dir / scenario)) {
    road = build_scenario_road(load_scenario((dir / scenario).string()));
  }
  NodePointParams params;
  if (cohort.contains("node_distances")) {
    params = params_from(cohort.at("node_distances").get<std::vector<double>>());
  }
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto & d : cohort.at("drivers")) {
    entries.emplace_back(d.at("id").get<std::string>(), d.at("log").get<std::string>());
  }
  if (entries.empty()) {
    throw EmptyDataError("cohort has no drivers");
  }
  const VehicleSpec vehicle{a.width};
  const CurveDetection detection{a.kappa_threshold, a.min_length};
  std::vector<DriverReport> reports(entries.size());
  std::vector<std::string> errors(entries.size());
  const auto n = static_cast<std::int64_t>(entries.size());
  #pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      const DriveLog log = load_drive_log(dir / entries[i].second);
      const auto cal = fit_gain_matrix(assemble_dataset(log, params, common.retrigger));
      const SimTrace trace = run_replay(log, cal.gains, params, common.retrigger,
        ReplayMode::kValidation);
      const SimTrace human = human_trace(log);
      const Corridor corridor = road ? *road : corridor_from_log(log);
      const auto segments = detect_curve_segments(corridor, detection);
      reports[i].driver_id = entries[i].first;
      reports[i].safety = safety_metrics(trace, corridor, vehicle, segments);
      reports[i].performance = performance_metrics(trace, human, corridor, segments);
    } catch (const std::exception & e) {
      errors[i] = entries[i].first + ": " + e.what();
    }
  }
  for (const auto & e : errors) {
    if (!e.empty()) {
      throw ValidationError(e);
    }
  }
  const fs::path od(a.out);
  std::ostringstream safety;
  std::ostringstream perf;
  write_safety_csv(safety, reports);
  write_performance_csv(perf, reports);
  write_file(od / "safety.csv", safety.str());
  write_file(od / "performance.csv", perf.str());
  write_file(od / "safety.json", safety_json(reports));
  write_file(od / "performance.json", performance_json(reports));
  out << "evaluated " << reports.size() << " drivers into " << od.string() << '\n';
  return kExitSuccess;
}

// ---- case-study -----------------------------------------------------------

struct CaseStudyArgs
{
  SimulateArgs sim;
  std::string scenario_file;
  std::string out;
  std::size_t segment{0};
  double padding{100.0};
};

int run_case_study(const CaseStudyArgs & a, const Common & common, std::ostream & out)
{
  const DriveLog log = load_drive_log(a.sim.log);
  const SimTrace trace = simulate(log, a.sim, common);
  const Corridor corridor = a.scenario_file.empty() ? corridor_from_log(log) :
    build_scenario_road(load_scenario(a.scenario_file));
  const auto segments = detect_curve_segments(corridor);
  if (a.segment >= segments.size()) {
    throw ValidationError("segment " + std::to_string(a.segment) + " requested, " +
            std::to_string(segments.size()) + " curve segments detected");
  }
  const auto data = case_study_data(trace, human_trace(log), corridor, segments[a.segment],
    a.padding);
  emit_case_study(data, a.out);
  const auto & seg = segments[a.segment];
  out << "segment " << a.segment << ": s = [" << format_number(seg.start) << ", " <<
    format_number(seg.end) << "] " << (seg.direction == CurveDirection::kLeft ? "left" : "right") <<
    ", " << data.rows.size() << " rows\n";
  return kExitSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Human-like lane-keeping path planning toolkit", "curvepath"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  Common common;

  SynthArgs synth;
  auto * c_synth = app.add_subcommand("synth", "generate a scenario and a synthetic driver cohort");
  add_common(c_synth, common);
  add_retrigger(c_synth, common);
  c_synth->add_option("--out", synth.out, "output directory")->required();
  c_synth->add_option("--scenario", synth.scenario, "route, s-curve or straight")
  ->capture_default_str()->check(CLI::IsMember({"route", "s-curve", "straight"}));
  c_synth->add_option("--scenario-file", synth.scenario_file, "scenario JSON");
  c_synth->add_option("--drivers", synth.drivers, "cohort size")->capture_default_str()
  ->check(CLI::NonNegativeNumber);
  c_synth->add_option("--noise", synth.noise, "offset noise sigma [m]")->capture_default_str()
  ->check(CLI::NonNegativeNumber);
  c_synth->add_option("--cycles", synth.cycles, "max records per log (0: whole road)")
  ->capture_default_str();
  c_synth->add_option("--node-distances", synth.distances, "near mid far [m]")->expected(3)
  ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  CalibrateArgs cal;
  auto * c_cal = app.add_subcommand("calibrate", "fit the gain matrix from drive logs");
  add_common(c_cal, common);
  add_retrigger(c_cal, common);
  c_cal->add_option("--log", cal.logs, "drive log CSV (repeatable)")->required()
  ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->check(CLI::ExistingFile);
  c_cal->add_option("--out", cal.out, "calibration JSON");
  c_cal->add_option("--node-distances", cal.distances, "near mid far [m]")->expected(3)
  ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_cal->add_flag("--optimize-distances", cal.optimize, "search node distances first");
  c_cal->add_flag("--sweep-nodes", cal.sweep, "node-count error/time study");
  c_cal->add_option("--sweep-out", cal.sweep_out, "CSV for the node-count study");
  c_cal->add_option("--scenario-file", cal.scenario_file, "run the node-count study on this road");
  c_cal->add_option("--max-nodes", cal.max_nodes, "largest node count in the study")
  ->capture_default_str()->check(CLI::PositiveNumber);

  SimulateArgs sim;
  auto * c_sim = app.add_subcommand("simulate", "replay a drive log with cyclic replanning");
  add_common(c_sim, common);
  add_retrigger(c_sim, common);
  c_sim->add_option("--log", sim.log, "drive log CSV")->required()->check(CLI::ExistingFile);
  c_sim->add_option("--calibration", sim.calibration, "calibration JSON")
  ->check(CLI::ExistingFile);
  c_sim->add_option("--mode", sim.mode, "estimation or validation")->capture_default_str()
  ->check(CLI::IsMember({"estimation", "validation"}));
  c_sim->add_option("--out", sim.out, "trace CSV")->required();
  c_sim->add_option("--replans", sim.replans, "per-replan JSON lines");
  c_sim->add_option("--origin-heading", sim.origin_heading, "vehicle or road")
  ->capture_default_str()->check(CLI::IsMember({"vehicle", "road"}));
  c_sim->add_option("--node-distances", sim.distances, "near mid far [m]")->expected(3)
  ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  EvaluateArgs ev;
  auto * c_ev = app.add_subcommand("evaluate", "safety and performance reports over a cohort");
  add_common(c_ev, common);
  add_retrigger(c_ev, common);
  c_ev->add_option("--cohort", ev.cohort, "directory written by synth")->required()
  ->check(CLI::ExistingDirectory);
  c_ev->add_option("--out", ev.out, "report directory")->required();
  c_ev->add_option("--width", ev.width, "vehicle width [m]")->capture_default_str()
  ->check(CLI::PositiveNumber);
  c_ev->add_option("--kappa-threshold", ev.kappa_threshold, "curve detection [1/m]")
  ->capture_default_str()->check(CLI::PositiveNumber);
  c_ev->add_option("--min-length", ev.min_length, "minimum curve length [m]")
  ->capture_default_str()->check(CLI::PositiveNumber);

  CaseStudyArgs cs;
  auto * c_cs = app.add_subcommand("case-study", "offset and curvature data around one curve");
  add_common(c_cs, common);
  add_retrigger(c_cs, common);
  c_cs->add_option("--log", cs.sim.log, "drive log CSV")->required()->check(CLI::ExistingFile);
  c_cs->add_option("--calibration", cs.sim.calibration, "calibration JSON")
  ->check(CLI::ExistingFile);
  c_cs->add_option("--mode", cs.sim.mode, "estimation or validation")->capture_default_str()
  ->check(CLI::IsMember({"estimation", "validation"}));
  c_cs->add_option("--origin-heading", cs.sim.origin_heading, "vehicle or road")
  ->capture_default_str()->check(CLI::IsMember({"vehicle", "road"}));
  c_cs->add_option("--scenario-file", cs.scenario_file, "road of the log");
  c_cs->add_option("--out", cs.out, "output directory")->required();
  c_cs->add_option("--segment", cs.segment, "curve segment index")->capture_default_str();
  c_cs->add_option("--padding", cs.padding, "metres before and after the segment")
  ->capture_default_str()->check(CLI::NonNegativeNumber);

  try {
    std::vector<std::string> argv = expand_config(args);
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitSuccess;
  } catch (const CLI::ParseError & e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  } catch (const Error & e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (c_synth->parsed()) {
      return run_synth(synth, common, out);
    }
    if (c_cal->parsed()) {
      return run_calibrate(cal, common, out);
    }
    if (c_sim->parsed()) {
      return run_simulate(sim, common, out);
    }
    if (c_ev->parsed()) {
      return run_evaluate(ev, common, out);
    }
    if (c_cs->parsed()) {
      return run_case_study(cs, common, out);
    }
  } catch (const RankDeficiencyError & e) {
    err << "error: rank deficiency: " << e.what() << '\n';
    return kExitData;
  } catch (const Error & e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace curvepath
