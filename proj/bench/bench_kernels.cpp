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


#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "curvepath/calibration.hpp"
#include "curvepath/kernels.hpp"
#include "curvepath/scenario.hpp"
#include "curvepath/synthetic.hpp"

namespace
{

using namespace curvepath;

std::vector<kernels::G1Problem> g1_problems(std::size_t n)
{
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<kernels::G1Problem> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Pose a(100 * u(gen), 100 * u(gen), 3 * u(gen));
    const double dir = a.theta + u(gen);
    const double len = 80.0 + 60.0 * u(gen);
    out.push_back({a, Pose(a.x + len * std::cos(dir), a.y + len * std::sin(dir), dir + u(gen))});
  }
  return out;
}

template<auto Fn>
void BM_G1Batch(benchmark::State & state)
{
  const auto problems = g1_problems(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Fn(problems, G1Options{}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_G1Batch<kernels::fit_g1_batch_serial>)->Name("g1_batch/serial")->Arg(1000)->Arg(10000);
BENCHMARK(BM_G1Batch<kernels::fit_g1_batch_omp>)->Name("g1_batch/omp")->Arg(1000)->Arg(10000);

struct PolylineData
{
  std::vector<Point2> line;
  std::vector<Point2> queries;
};

PolylineData polyline_data(std::size_t n)
{
  const Corridor road = build_scenario_road(route_scenario(), 1.0);
  PolylineData d;
  for (const auto & smp : road.samples()) {
    d.line.push_back(smp.pose.position());
  }
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> s(0.0, road.length());
  std::uniform_real_distribution<double> lat(-2.0, 2.0);
  for (std::size_t i = 0; i < n; ++i) {
    d.queries.push_back(offset_point(road.pose_at(s(gen)), lat(gen)).position());
  }
  return d;
}

template<auto Fn>
void BM_Polyline(benchmark::State & state)
{
  const auto d = polyline_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Fn(d.queries, d.line));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Polyline<kernels::polyline_distances_serial>)->Name("polyline/serial")->Arg(500);
BENCHMARK(BM_Polyline<kernels::polyline_distances_omp>)->Name("polyline/omp")->Arg(500);

const NodeDistanceWindow & grid_window()
{
  static const NodeDistanceWindow window = [] {
      const std::vector<double> kappas{0.004, -0.003, 0.0045};
      const Corridor road = build_scenario_road(repeated_s_curve_scenario(kappas, 100.0));
      const DriveLog log = generate_node_reference_log(road, NodePointParams{}, 8);
      return NodeDistanceWindow(log, 0, NodeDistanceOptions{});
    }();
  return window;
}

template<auto Fn>
void BM_Grid(benchmark::State & state)
{
  const auto & window = grid_window();
  std::vector<double> grid;
  for (double d = 5.0; d <= window.max_distance(); d += static_cast<double>(state.range(0))) {
    grid.push_back(d);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(Fn(window, grid));
  }
}
BENCHMARK(BM_Grid<kernels::node_grid_search_serial>)->Name("node_grid/serial")->Arg(10)->Arg(5)
->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Grid<kernels::node_grid_search_omp>)->Name("node_grid/omp")->Arg(10)->Arg(5)
->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
