#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "invabc/model.hpp"
#include "invabc/projection.hpp"
#include "invabc/samplers.hpp"
#include "invabc/study.hpp"

namespace invabc {

/// Everything a run can be configured with, resolved to concrete values.
/// Parsed from a flat `key = value` file; unknown keys are rejected.
struct RunSettings {
  ChainConfig chain;

  // simulate
  int groups = 1;
  int roads_per_group = 10;
  std::vector<double> road_ages;  // cycled across roads when nonempty
  int age_min = 6;
  int age_max = 56;
  std::vector<double> true_lambdas{0.0001};  // broadcast if a single value
  double true_nu = 14.0;
  double true_sigma2 = 4.0;
  int n_z = 26;

  // oracle
  double oracle_lambda = 0.01;
  double oracle_nu = 1.0;
  double oracle_age = 2.0;
  double grid_min = 1e-4;
  double grid_max = 1.0;
  int grid_points = 200;

  // study
  long long replicates = 50;
  int threads = 1;

  // projection
  double spacing = 10.0;
  double proj_lambda = 1e-4;
  double proj_nu = 14.0;
  double horizon_years = 0.0;
};

/// Parse `key = value` lines ('#' comments allowed). Unknown keys, duplicate
/// definitions, type mismatches, and out-of-range values raise data_error
/// naming the key and line.
RunSettings parse_config(const std::string& path);
RunSettings parse_config_text(const std::string& text,
                              const std::string& origin);
/// Apply one `key=value` override in place (CLI flags).
void apply_setting(RunSettings& s, const std::string& key,
                   const std::string& value);
/// Render every setting back out, deterministically ordered; parseable.
std::string render_settings(const RunSettings& s);

/// Columns `group,road,age,y1..y6`, header required, y strictly 0/1, duplicate
/// (group, road) rejected; errors carry line numbers.
std::vector<RoadRecord> parse_transect_csv(const std::string& path);
void write_transect_csv(const std::string& path,
                        const std::vector<RoadRecord>& roads);

/// One spread rate per line; at least two required. Negative values are kept
/// but reported through `warnings`.
TemporalData parse_temporal(const std::string& path,
                            std::vector<std::string>* warnings = nullptr);
void write_temporal(const std::string& path, const TemporalData& temporal);

/// Combine parsed pieces and derive the group count; every group in 1..G must
/// own at least one road.
Dataset assemble_dataset(std::vector<RoadRecord> roads, TemporalData temporal);

/// `id,age,x0,y0,x1,y1,...`, one segment per line, no header.
RoadNetwork parse_network_csv(const std::string& path);
void write_network_csv(const std::string& path, const RoadNetwork& network);

/// Labeled header (origin, cell_size, dims) then `height` rows of 0/1 digits,
/// top row first.
HabitatRaster parse_habitat(const std::string& path);
void write_habitat(const std::string& path, const HabitatRaster& raster);

/// 64-bit FNV-1a of a file's bytes (input provenance in run metadata).
std::uint64_t fnv1a_file(const std::string& path);

/// Shortest decimal form that round-trips the exact double.
std::string format_double(double v);

/// Fixed-bin histogram rendered as a standalone vector graphic.
void write_histogram_svg(const std::string& path, const std::string& title,
                         const std::vector<double>& values, int bins = 40);

/// Raster mask rendered as a standalone vector graphic.
void write_mask_svg(const std::string& path, const HabitatRaster& habitat,
                    const std::vector<std::uint8_t>& invaded);

}  // namespace invabc
