#include "invabc/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace invabc {

void HabitatRaster::validate() const {
  if (width < 1 || height < 1)
    throw std::invalid_argument("HabitatRaster: grid must be nonempty");
  if (!(cell_size > 0.0))
    throw std::invalid_argument("HabitatRaster: cell_size must be > 0");
  if (cells.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw std::invalid_argument("HabitatRaster: cell count does not match dims");
}

namespace {

// Point at arc length d along a polyline with cumulative lengths `cum`.
std::pair<double, double> point_at(
    const std::vector<std::pair<double, double>>& line,
    const std::vector<double>& cum, double d) {
  const auto it = std::lower_bound(cum.begin(), cum.end(), d);
  std::size_t seg = (it == cum.begin())
                        ? 0
                        : static_cast<std::size_t>(it - cum.begin()) - 1;
  seg = std::min(seg, line.size() - 2);
  const double seg_len = cum[seg + 1] - cum[seg];
  const double frac = (seg_len > 0.0) ? (d - cum[seg]) / seg_len : 0.0;
  return {line[seg].first + frac * (line[seg + 1].first - line[seg].first),
          line[seg].second + frac * (line[seg + 1].second - line[seg].second)};
}

}  // namespace

std::vector<SeedPoint> seed_points(const RoadNetwork& network, double spacing,
                                   int* skipped) {
  if (!(spacing > 0.0))
    throw std::invalid_argument("seed_points: spacing must be > 0");
  if (skipped) *skipped = 0;
  std::vector<SeedPoint> points;
  for (const auto& seg : network.segments) {
    if (seg.polyline.size() < 2) {
      if (skipped) ++*skipped;
      continue;
    }
    std::vector<double> cum{0.0};
    cum.reserve(seg.polyline.size());
    for (std::size_t i = 1; i < seg.polyline.size(); ++i) {
      const double dx = seg.polyline[i].first - seg.polyline[i - 1].first;
      const double dy = seg.polyline[i].second - seg.polyline[i - 1].second;
      cum.push_back(cum.back() + std::hypot(dx, dy));
    }
    const double total = cum.back();
    if (!(total > 0.0)) {
      if (skipped) ++*skipped;
      continue;
    }
    // multiples of spacing, then the far endpoint if it is not one already
    const auto n = static_cast<long long>(total / spacing + 1e-9);
    for (long long i = 0; i <= n; ++i) {
      const double d = std::min(static_cast<double>(i) * spacing, total);
      const auto [x, y] = point_at(seg.polyline, cum, d);
      points.push_back({x, y, seg.age});
    }
    if (static_cast<double>(n) * spacing < total - 1e-9 * std::max(1.0, total)) {
      const auto [x, y] = point_at(seg.polyline, cum, total);
      points.push_back({x, y, seg.age});
    }
  }
  return points;
}

ProjectionResult project(Rng& rng, const std::vector<SeedPoint>& points,
                         const HabitatRaster& habitat, double lambda, double nu,
                         double horizon_years, double spacing) {
  habitat.validate();
  if (!(lambda > 0.0))
    throw std::invalid_argument("project: lambda must be > 0");
  if (!(nu > 0.0)) throw std::invalid_argument("project: nu must be > 0");
  if (!(horizon_years >= 0.0))
    throw std::invalid_argument("project: horizon_years must be >= 0");
  if (!(spacing > 0.0))
    throw std::invalid_argument("project: spacing must be > 0");

  ProjectionResult res;
  res.invaded.assign(habitat.cells.size(), 0);
  const double cs = habitat.cell_size;

  for (const auto& pt : points) {
    // fixed draw budget per point keeps parameter sweeps coupled
    const double u_invade = rng.uniform();
    const double u_time = rng.uniform();
    const double T = pt.age + horizon_years;
    if (!(T > 0.0)) continue;
    if (u_invade >= 1.0 - std::exp(-lambda * spacing * T)) continue;
    ++res.points_used;
    const double radius = nu * T * (1.0 - u_time);
    if (!(radius > 0.0)) continue;

    const int col_lo = static_cast<int>(std::floor((pt.x - radius - habitat.origin_x) / cs));
    const int col_hi = static_cast<int>(std::floor((pt.x + radius - habitat.origin_x) / cs));
    const double top_y = habitat.origin_y + habitat.height * cs;
    const int row_lo = static_cast<int>(std::floor((top_y - (pt.y + radius)) / cs));
    const int row_hi = static_cast<int>(std::floor((top_y - (pt.y - radius)) / cs));
    const double r2 = radius * radius;
    for (int row = std::max(0, row_lo); row <= std::min(habitat.height - 1, row_hi); ++row) {
      const double dy = habitat.center_y(row) - pt.y;
      for (int col = std::max(0, col_lo); col <= std::min(habitat.width - 1, col_hi); ++col) {
        const double dx = habitat.center_x(col) - pt.x;
        if (dx * dx + dy * dy <= r2 && habitat.suitable(row, col))
          res.invaded[static_cast<std::size_t>(row) * static_cast<std::size_t>(habitat.width) +
                      static_cast<std::size_t>(col)] = 1;
      }
    }
  }

  for (std::size_t i = 0; i < habitat.cells.size(); ++i) {
    if (habitat.cells[i] != 0) ++res.suitable_cells;
    if (res.invaded[i] != 0) ++res.invaded_cells;
  }
  res.invaded_km2 = static_cast<double>(res.invaded_cells) * cs * cs / 1e6;
  res.fraction = (res.suitable_cells > 0)
                     ? static_cast<double>(res.invaded_cells) /
                           static_cast<double>(res.suitable_cells)
                     : 0.0;
  return res;
}

}  // namespace invabc
