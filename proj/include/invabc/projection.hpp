#pragma once

#include <cstdint>
#include <vector>

#include "invabc/random.hpp"

namespace invabc {

/// One road segment: identifier, age since construction, and a polyline of
/// planar (x, y) coordinates in metres.
struct Segment {
  long long id = 0;
  double age = 0.0;
  std::vector<std::pair<double, double>> polyline;
};

struct RoadNetwork {
  std::vector<Segment> segments;
};

/// Binary suitability grid. `origin` is the lower-left corner; rows are stored
/// top-first (row 0 has the highest y), matching the text serialization.
struct HabitatRaster {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double cell_size = 1.0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> cells;  // row-major, nonzero = suitable

  void validate() const;
  bool suitable(int row, int col) const {
    return cells[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(col)] != 0;
  }
  double center_x(int col) const {
    return origin_x + (static_cast<double>(col) + 0.5) * cell_size;
  }
  double center_y(int row) const {
    return origin_y + (static_cast<double>(height - row) - 0.5) * cell_size;
  }
};

/// Candidate introduction site sampled along the network.
struct SeedPoint {
  double x = 0.0;
  double y = 0.0;
  double age = 0.0;
};

struct ProjectionResult {
  std::vector<std::uint8_t> invaded;  // same shape as the habitat grid
  double invaded_km2 = 0.0;
  double fraction = 0.0;  // of suitable cells
  long long points_used = 0;
  long long suitable_cells = 0;
  long long invaded_cells = 0;
};

/// Points at arc-length multiples of `spacing` along every segment, both
/// endpoints always included, inheriting the segment age. Degenerate segments
/// (fewer than two vertices or zero length) are skipped and counted.
std::vector<SeedPoint> seed_points(const RoadNetwork& network,
                                   double spacing = 10.0,
                                   int* skipped = nullptr);

/// Invade each point independently with probability 1 - exp(-lambda * spacing
/// * T), T = age + horizon_years; an invaded point spreads a disk of radius
/// nu * (T - t) for a uniform introduction time t. Exactly two rng draws are
/// consumed per point regardless of outcome, so runs at different (lambda,
/// nu, horizon_years) couple monotonically under a shared seed. Only suitable
/// cells are marked and counted.
ProjectionResult project(Rng& rng, const std::vector<SeedPoint>& points,
                         const HabitatRaster& habitat, double lambda, double nu,
                         double horizon_years, double spacing = 10.0);

}  // namespace invabc
