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

#ifndef CURVEPATH__KERNELS_HPP_
#define CURVEPATH__KERNELS_HPP_

// Data-parallel inner loops. Every kernel has a plain serial version that the
// tests treat as the reference and an OpenMP version with identical results.

#include <array>
#include <span>
#include <vector>

#include "curvepath/calibration.hpp"
#include "curvepath/clothoid.hpp"
#include "curvepath/geometry.hpp"

namespace curvepath::kernels
{

struct G1Problem
{
  Pose start;
  Pose end;
};

struct G1Outcome
{
  ClothoidSegment segment;
  bool ok{false};
  double residual{0.0};
};

std::vector<G1Outcome> fit_g1_batch_serial(std::span<const G1Problem> problems,
  const G1Options & options = {});
std::vector<G1Outcome> fit_g1_batch_omp(std::span<const G1Problem> problems,
  const G1Options & options = {});

/// Distance from every query point to the polyline through `polyline`.
std::vector<double> polyline_distances_serial(std::span<const Point2> queries,
  std::span<const Point2> polyline);
std::vector<double> polyline_distances_omp(std::span<const Point2> queries,
  std::span<const Point2> polyline);

/// Index of the closest polyline piece and the distance to it.
struct PolylineHit
{
  std::size_t piece{0};
  double t{0.0};
  double distance{0.0};
};
PolylineHit closest_on_polyline(Point2 q, std::span<const Point2> polyline);

struct GridResult
{
  std::array<double, 3> best{};
  double best_cost{0.0};
  double min_cost{0.0};
  double max_cost{0.0};
  std::size_t evaluated{0};
};

/// Exhaustive search over ordered triples of `grid` distances. Ties go to the
/// lexicographically first triple in both versions.
GridResult node_grid_search_serial(const NodeDistanceWindow & window, std::span<const double> grid);
GridResult node_grid_search_omp(const NodeDistanceWindow & window, std::span<const double> grid);

}  // namespace curvepath::kernels

#endif  // CURVEPATH__KERNELS_HPP_
