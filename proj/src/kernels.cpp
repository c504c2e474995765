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

#include "curvepath/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "curvepath/errors.hpp"

namespace curvepath::kernels
{

namespace
{

G1Outcome solve_one(const G1Problem & p, const G1Options & options)
{
  G1Outcome out;
  try {
    out.segment = fit_g1(p.start, p.end, options);
    out.ok = true;
  } catch (const ConvergenceError & e) {
    out.residual = e.residual();
  } catch (const Error &) {
    out.residual = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace

std::vector<G1Outcome> fit_g1_batch_serial(std::span<const G1Problem> problems,
  const G1Options & options)
{
  std::vector<G1Outcome> out(problems.size());
  for (std::size_t i = 0; i < problems.size(); ++i) {
    out[i] = solve_one(problems[i], options);
  }
  return out;
}

std::vector<G1Outcome> fit_g1_batch_omp(std::span<const G1Problem> problems,
  const G1Options & options)
{
  std::vector<G1Outcome> out(problems.size());
  const auto n = static_cast<std::int64_t>(problems.size());
  #pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = solve_one(problems[static_cast<std::size_t>(i)], options);
  }
  return out;
}

PolylineHit closest_on_polyline(Point2 q, std::span<const Point2> polyline)
{
  PolylineHit best;
  best.distance = std::numeric_limits<double>::infinity();
  if (polyline.size() == 1) {
    best.distance = distance(q, polyline[0]);
    return best;
  }
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const Point2 a = polyline[i];
    const Point2 b = polyline[i + 1];
    const double vx = b.x - a.x;
    const double vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? ((q.x - a.x) * vx + (q.y - a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double d = std::hypot(q.x - (a.x + t * vx), q.y - (a.y + t * vy));
    if (d < best.distance) {
      best = {i, t, d};
    }
  }
  return best;
}

std::vector<double> polyline_distances_serial(std::span<const Point2> queries,
  std::span<const Point2> polyline)
{
  std::vector<double> out(queries.size(), std::numeric_limits<double>::infinity());
  if (polyline.empty()) {
    return out;
  }
  for (std::size_t i = 0; i < queries.size(); ++i) {
    out[i] = closest_on_polyline(queries[i], polyline).distance;
  }
  return out;
}

std::vector<double> polyline_distances_omp(std::span<const Point2> queries,
  std::span<const Point2> polyline)
{
  std::vector<double> out(queries.size(), std::numeric_limits<double>::infinity());
  if (polyline.empty()) {
    return out;
  }
  const auto n = static_cast<std::int64_t>(queries.size());
  #pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = closest_on_polyline(queries[k], polyline).distance;
  }
  return out;
}

namespace
{

struct GridSetup
{
  std::vector<std::optional<Pose>> poses;
  std::vector<std::array<std::size_t, 3>> triples;
};

GridSetup grid_setup(const NodeDistanceWindow & window, std::span<const double> grid)
{
  GridSetup setup;
  setup.poses.reserve(grid.size());
  for (double d : grid) {
    setup.poses.push_back(d <= window.max_distance() ? window.node_pose(d) : std::nullopt);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      for (std::size_t k = j + 1; k < grid.size(); ++k) {
        if (setup.poses[i] && setup.poses[j] && setup.poses[k]) {
          setup.triples.push_back({i, j, k});
        }
      }
    }
  }
  return setup;
}

double triple_cost(const NodeDistanceWindow & window, const GridSetup & setup,
  const std::array<std::size_t, 3> & t)
{
  return window.cost_with_nodes({*setup.poses[t[0]], *setup.poses[t[1]], *setup.poses[t[2]]});
}

GridResult reduce(std::span<const double> grid, const GridSetup & setup,
  const std::vector<double> & costs)
{
  GridResult out;
  out.best_cost = std::numeric_limits<double>::infinity();
  out.min_cost = std::numeric_limits<double>::infinity();
  out.max_cost = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < costs.size(); ++n) {
    const double c = costs[n];
    if (!std::isfinite(c)) {
      continue;
    }
    ++out.evaluated;
    out.max_cost = std::max(out.max_cost, c);
    if (c < out.best_cost) {
      out.best_cost = c;
      const auto & t = setup.triples[n];
      out.best = {grid[t[0]], grid[t[1]], grid[t[2]]};
    }
  }
  out.min_cost = out.best_cost;
  return out;
}

}  // namespace

GridResult node_grid_search_serial(const NodeDistanceWindow & window, std::span<const double> grid)
{
  const GridSetup setup = grid_setup(window, grid);
  std::vector<double> costs(setup.triples.size());
  for (std::size_t n = 0; n < setup.triples.size(); ++n) {
    costs[n] = triple_cost(window, setup, setup.triples[n]);
  }
  return reduce(grid, setup, costs);
}

GridResult node_grid_search_omp(const NodeDistanceWindow & window, std::span<const double> grid)
{
  const GridSetup setup = grid_setup(window, grid);
  std::vector<double> costs(setup.triples.size());
  const auto n = static_cast<std::int64_t>(setup.triples.size());
  #pragma omp parallel for schedule(dynamic, 32)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    costs[k] = triple_cost(window, setup, setup.triples[k]);
  }
  return reduce(grid, setup, costs);
}

}  // namespace curvepath::kernels
