#include "invabc/capi.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "invabc/errors.hpp"
#include "invabc/io.hpp"
#include "invabc/model.hpp"
#include "invabc/oracle.hpp"
#include "invabc/projection.hpp"
#include "invabc/samplers.hpp"
#include "invabc/simulate.hpp"
#include "invabc/study.hpp"

struct invabc_config {
  invabc::RunSettings s;
};
struct invabc_dataset {
  invabc::Dataset d;
};
struct invabc_trace {
  invabc::ChainTrace t;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
invabc_status wrap(F&& body) {
  try {
    body();
    g_last_error.clear();
    return INVABC_OK;
  } catch (const invabc::data_error& e) {
    g_last_error = e.what();
    return INVABC_EDATA;
  } catch (const invabc::io_error& e) {
    g_last_error = e.what();
    return INVABC_EIO;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return INVABC_EINVAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return INVABC_ERUNTIME;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::runtime_error("out of memory");
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<double> resolved_lambdas(const invabc::RunSettings& s) {
  require(s.groups >= 1, "groups must be >= 1");
  if (s.true_lambdas.size() == 1)
    return std::vector<double>(static_cast<std::size_t>(s.groups),
                               s.true_lambdas[0]);
  require(static_cast<int>(s.true_lambdas.size()) == s.groups,
          "true_lambdas must give one rate total or one per group");
  return s.true_lambdas;
}

std::vector<invabc::RoadPlan> build_plan(const invabc::RunSettings& s,
                                         invabc::Rng& rng) {
  require(s.roads_per_group >= 1, "roads_per_group must be >= 1");
  if (s.road_ages.empty())
    return invabc::default_road_plan(rng, s.groups, s.roads_per_group,
                                     s.age_min, s.age_max);
  std::vector<invabc::RoadPlan> plan;
  std::size_t idx = 0;
  for (int g = 1; g <= s.groups; ++g)
    for (int j = 0; j < s.roads_per_group; ++j, ++idx)
      plan.push_back({g, s.road_ages[idx % s.road_ages.size()]});
  return plan;
}

void open_for_write(std::ofstream& out, const char* path) {
  out.open(path, std::ios::binary);
  if (!out) throw invabc::io_error(std::string("cannot write ") + path);
}

void write_trace_header(std::ofstream& out, int n_groups,
                        std::size_t n_roads) {
  out << "iteration";
  for (int g = 1; g <= n_groups; ++g) out << ",lambda_" << g;
  out << ",nu,sigma2";
  for (std::size_t r = 1; r <= n_roads; ++r) out << ",k_" << r;
  out << "\n";
}

void write_state_row(std::ofstream& out, long long iteration,
                     const invabc::ChainState& state) {
  out << iteration;
  for (const double l : state.params.lambdas)
    out << "," << invabc::format_double(l);
  out << "," << invabc::format_double(state.params.nu) << ","
      << invabc::format_double(state.params.sigma2);
  for (const auto& road : state.roads) out << "," << road.k;
  out << "\n";
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string summary_text(const invabc::ChainTrace& t) {
  const auto rows = invabc::summarize_trace(t);
  std::ostringstream out;
  out << pad("parameter", 12) << pad("median", 24) << pad("q2.5", 24)
      << pad("q97.5", 24) << "mean\n";
  for (const auto& p : rows)
    out << pad(p.name, 12) << pad(invabc::format_double(p.median), 24)
        << pad(invabc::format_double(p.lower), 24)
        << pad(invabc::format_double(p.upper), 24)
        << invabc::format_double(p.mean) << "\n";
  out << "rows = " << t.rows() << "\n";
  auto rate = [&](const char* name, long long accepts, long long proposals) {
    if (proposals <= 0) return;
    out << name << " = " << accepts << "/" << proposals << " ("
        << invabc::format_double(static_cast<double>(accepts) /
                                 static_cast<double>(proposals))
        << ")\n";
  };
  rate("nu_acceptance", t.nu_accepts, t.nu_proposals);
  rate("birth_death_acceptance", t.bd_accepts, t.bd_proposals);
  rate("position_acceptance", t.pos_accepts, t.pos_proposals);
  if (t.nu_retries_exhausted > 0)
    out << "nu_retries_exhausted = " << t.nu_retries_exhausted << "\n";
  if (t.attempts_total > 0)
    out << "attempts_total = " << t.attempts_total << "\n";
  return out.str();
}

invabc_status run_sampler(const invabc_config* cfg, const invabc_dataset* ds,
                          const char* trace_csv, const char* latents_csv,
                          bool rejection, invabc_trace** out) {
  return wrap([&] {
    require(cfg && ds && out, "null argument");
    *out = nullptr;
    const auto& s = cfg->s;
    const auto& data = ds->d;

    std::ofstream trace_out, latents_out;
    const bool stream_latents =
        latents_csv != nullptr && s.chain.record_latents && !rejection;
    if (trace_csv) {
      open_for_write(trace_out, trace_csv);
      write_trace_header(trace_out, data.n_groups, data.roads.size());
    }
    if (stream_latents) {
      open_for_write(latents_out, latents_csv);
      latents_out << "iteration,road,index,s,t\n";
    }
    invabc::RowCallback on_row;
    if (trace_csv)
      on_row = [&](long long iteration, const invabc::ChainState& state) {
        write_state_row(trace_out, iteration, state);
        if (stream_latents)
          for (std::size_t r = 0; r < state.roads.size(); ++r)
            for (std::size_t i = 0; i < state.roads[r].introductions.size();
                 ++i)
              latents_out << iteration << "," << (r + 1) << "," << i << ","
                          << invabc::format_double(
                                 state.roads[r].introductions[i].s)
                          << ","
                          << invabc::format_double(
                                 state.roads[r].introductions[i].t)
                          << "\n";
      };

    invabc::Rng rng(s.chain.seed);
    auto trace = rejection
                     ? invabc::rejection_abc(rng, data, s.chain, {}, on_row)
                     : invabc::run_chain(rng, data, s.chain, {}, on_row);
    *out = new invabc_trace{std::move(trace)};
  });
}

}  // namespace

extern "C" {

const char* invabc_last_error(void) { return g_last_error.c_str(); }

invabc_status invabc_config_new(invabc_config** out) {
  return wrap([&] {
    require(out != nullptr, "null argument");
    *out = new invabc_config{};
  });
}

invabc_status invabc_config_load(const char* path, invabc_config** out) {
  return wrap([&] {
    require(path && out, "null argument");
    *out = new invabc_config{invabc::parse_config(path)};
  });
}

invabc_status invabc_config_set(invabc_config* cfg, const char* key,
                                const char* value) {
  return wrap([&] {
    require(cfg && key && value, "null argument");
    invabc::apply_setting(cfg->s, key, value);
  });
}

invabc_status invabc_config_render(const invabc_config* cfg, char** out) {
  return wrap([&] {
    require(cfg && out, "null argument");
    *out = dup_string(invabc::render_settings(cfg->s));
  });
}

void invabc_config_free(invabc_config* cfg) { delete cfg; }

invabc_status invabc_dataset_load(const char* transect_csv,
                                  const char* temporal_path,
                                  invabc_dataset** out, char** warnings) {
  return wrap([&] {
    require(transect_csv && temporal_path && out, "null argument");
    if (warnings) *warnings = nullptr;
    auto roads = invabc::parse_transect_csv(transect_csv);
    std::vector<std::string> notes;
    auto temporal =
        invabc::parse_temporal(temporal_path, warnings ? &notes : nullptr);
    *out = new invabc_dataset{
        invabc::assemble_dataset(std::move(roads), std::move(temporal))};
    if (warnings && !notes.empty()) {
      std::string joined;
      for (std::size_t i = 0; i < notes.size(); ++i) {
        if (i) joined += "\n";
        joined += notes[i];
      }
      *warnings = dup_string(joined);
    }
  });
}

invabc_status invabc_dataset_simulate(const invabc_config* cfg,
                                      invabc_dataset** out) {
  return wrap([&] {
    require(cfg && out, "null argument");
    const auto& s = cfg->s;
    invabc::ModelParams truth;
    truth.lambdas = resolved_lambdas(s);
    truth.nu = s.true_nu;
    truth.sigma2 = s.true_sigma2;
    invabc::Rng rng(s.chain.seed);
    const auto plan = build_plan(s, rng);
    *out = new invabc_dataset{
        invabc::simulate_dataset(rng, truth, plan, s.n_z)};
  });
}

invabc_status invabc_dataset_write(const invabc_dataset* ds,
                                   const char* transect_csv,
                                   const char* temporal_path,
                                   const char* latents_csv) {
  return wrap([&] {
    require(ds && transect_csv && temporal_path, "null argument");
    invabc::write_transect_csv(transect_csv, ds->d.roads);
    invabc::write_temporal(temporal_path, ds->d.temporal);
    if (latents_csv) {
      std::ofstream out;
      open_for_write(out, latents_csv);
      out << "road,index,s,t\n";
      for (std::size_t r = 0; r < ds->d.latent.size(); ++r)
        for (std::size_t i = 0; i < ds->d.latent[r].introductions.size(); ++i)
          out << (r + 1) << "," << i << ","
              << invabc::format_double(ds->d.latent[r].introductions[i].s)
              << ","
              << invabc::format_double(ds->d.latent[r].introductions[i].t)
              << "\n";
    }
  });
}

invabc_status invabc_dataset_n_roads(const invabc_dataset* ds, int* out) {
  return wrap([&] {
    require(ds && out, "null argument");
    *out = static_cast<int>(ds->d.roads.size());
  });
}

invabc_status invabc_dataset_n_groups(const invabc_dataset* ds, int* out) {
  return wrap([&] {
    require(ds && out, "null argument");
    *out = ds->d.n_groups;
  });
}

void invabc_dataset_free(invabc_dataset* ds) { delete ds; }

invabc_status invabc_infer(const invabc_config* cfg, const invabc_dataset* ds,
                           const char* trace_csv, const char* latents_csv,
                           invabc_trace** out) {
  return run_sampler(cfg, ds, trace_csv, latents_csv, false, out);
}

invabc_status invabc_rejection(const invabc_config* cfg,
                               const invabc_dataset* ds, const char* trace_csv,
                               invabc_trace** out) {
  return run_sampler(cfg, ds, trace_csv, nullptr, true, out);
}

invabc_status invabc_trace_rows(const invabc_trace* t, long long* out) {
  return wrap([&] {
    require(t && out, "null argument");
    *out = static_cast<long long>(t->t.rows());
  });
}

invabc_status invabc_trace_write_csv(const invabc_trace* t, const char* path) {
  return wrap([&] {
    require(t && path, "null argument");
    std::ofstream out;
    open_for_write(out, path);
    write_trace_header(out, t->t.n_groups, t->t.n_roads);
    for (std::size_t row = 0; row < t->t.rows(); ++row) {
      out << row;
      for (int g = 0; g < t->t.n_groups; ++g)
        out << ","
            << invabc::format_double(
                   t->t.lambdas[static_cast<std::size_t>(g)][row]);
      out << "," << invabc::format_double(t->t.nu[row]) << ","
          << invabc::format_double(t->t.sigma2[row]);
      for (std::size_t r = 0; r < t->t.n_roads; ++r)
        out << "," << t->t.k[r][row];
      out << "\n";
    }
  });
}

invabc_status invabc_trace_summary(const invabc_trace* t, char** out) {
  return wrap([&] {
    require(t && out, "null argument");
    *out = dup_string(summary_text(t->t));
  });
}

invabc_status invabc_trace_histograms(const invabc_trace* t, const char* dir) {
  return wrap([&] {
    require(t && dir, "null argument");
    require(t->t.rows() > 0, "empty trace");
    const std::string base = std::string(dir) + "/";
    for (int g = 0; g < t->t.n_groups; ++g) {
      const std::string name = "lambda_" + std::to_string(g + 1);
      invabc::write_histogram_svg(base + "hist_" + name + ".svg", name,
                                  t->t.lambdas[static_cast<std::size_t>(g)]);
    }
    invabc::write_histogram_svg(base + "hist_nu.svg", "nu", t->t.nu);
    invabc::write_histogram_svg(base + "hist_sigma2.svg", "sigma2",
                                t->t.sigma2);
  });
}

void invabc_trace_free(invabc_trace* t) { delete t; }

invabc_status invabc_oracle_table(const invabc_config* cfg, const char* path) {
  return wrap([&] {
    require(cfg && path, "null argument");
    const auto& s = cfg->s;
    const invabc::TransectLayout layout;
    const auto cells =
        invabc::horizon_partition(layout, s.oracle_nu, s.oracle_age);
    const double area =
        invabc::horizon_area(layout, s.oracle_nu, s.oracle_age);
    std::ofstream out;
    open_for_write(out, path);
    out << "pattern,runs,ones,likelihood\n";
    for (int p = 0; p < 64; ++p) {
      const auto y = static_cast<invabc::Pattern6>(p);
      out << invabc::pattern_string(y, layout.quadrat_count) << ","
          << invabc::pattern_runs(y, layout.quadrat_count) << ","
          << invabc::pattern_ones(y, layout.quadrat_count) << ","
          << invabc::format_double(invabc::exact_likelihood(
                 y, s.oracle_lambda, cells, area, layout.quadrat_count))
          << "\n";
    }
  });
}

invabc_status invabc_oracle_grid(const invabc_config* cfg,
                                 const invabc_dataset* ds, const char* path) {
  return wrap([&] {
    require(cfg && ds && path, "null argument");
    const auto& s = cfg->s;
    require(ds->d.n_groups == 1,
            "gridded posterior needs a single-group dataset");
    require(s.grid_points >= 2, "grid_points must be >= 2");
    require(s.grid_min > 0.0 && s.grid_max > s.grid_min,
            "grid bounds must satisfy 0 < grid_min < grid_max");
    std::vector<double> grid(static_cast<std::size_t>(s.grid_points));
    const double lo = std::log(s.grid_min), hi = std::log(s.grid_max);
    for (int j = 0; j < s.grid_points; ++j)
      grid[static_cast<std::size_t>(j)] =
          std::exp(lo + (hi - lo) * j / (s.grid_points - 1));
    std::vector<invabc::Summary> obs;
    std::vector<double> ages;
    for (const auto& r : ds->d.roads) {
      obs.push_back(invabc::summarize(r.observed));
      ages.push_back(r.age_T);
    }
    const auto weights =
        invabc::exact_posterior_grid(obs, ages, s.oracle_nu, grid);
    std::ofstream out;
    open_for_write(out, path);
    out << "lambda,weight\n";
    for (std::size_t j = 0; j < grid.size(); ++j)
      out << invabc::format_double(grid[j]) << ","
          << invabc::format_double(weights[j]) << "\n";
  });
}

invabc_status invabc_study(const invabc_config* cfg, const char* path) {
  return wrap([&] {
    require(cfg && path, "null argument");
    const auto& s = cfg->s;
    invabc::ModelParams truth;
    truth.lambdas = resolved_lambdas(s);
    truth.nu = s.true_nu;
    truth.sigma2 = s.true_sigma2;
    invabc::Rng rng(s.chain.seed);
    const auto plan = build_plan(s, rng);
    invabc::StudyConfig study;
    study.replicates = s.replicates;
    study.n_z = s.n_z;
    study.threads = s.threads;
    const auto rows = invabc::coverage_study(rng, truth, plan, study, s.chain);
    std::ofstream out;
    open_for_write(out, path);
    out << "parameter,coverage,std_error,n_effective_replicates\n";
    for (const auto& r : rows)
      out << r.parameter << "," << invabc::format_double(r.coverage) << ","
          << invabc::format_double(r.std_error) << "," << r.n_effective
          << "\n";
  });
}

invabc_status invabc_project(const invabc_config* cfg, const char* network_csv,
                             const char* habitat_path, const char* invaded_out,
                             const char* summary_csv, const char* mask_svg,
                             double* out_invaded_km2, double* out_fraction) {
  return wrap([&] {
    require(cfg && network_csv && habitat_path && invaded_out && summary_csv &&
                mask_svg,
            "null argument");
    const auto& s = cfg->s;
    const auto network = invabc::parse_network_csv(network_csv);
    const auto habitat = invabc::parse_habitat(habitat_path);
    int skipped = 0;
    const auto points = invabc::seed_points(network, s.spacing, &skipped);
    invabc::Rng rng(s.chain.seed);
    const auto result =
        invabc::project(rng, points, habitat, s.proj_lambda, s.proj_nu,
                        s.horizon_years, s.spacing);

    invabc::HabitatRaster invaded = habitat;
    invaded.cells = result.invaded;
    invabc::write_habitat(invaded_out, invaded);

    std::ofstream out;
    open_for_write(out, summary_csv);
    out << "lambda,nu,horizon_years,points_used,segments_skipped,"
           "suitable_cells,invaded_cells,invaded_km2,fraction\n";
    out << invabc::format_double(s.proj_lambda) << ","
        << invabc::format_double(s.proj_nu) << ","
        << invabc::format_double(s.horizon_years) << "," << result.points_used
        << "," << skipped << "," << result.suitable_cells << ","
        << result.invaded_cells << ","
        << invabc::format_double(result.invaded_km2) << ","
        << invabc::format_double(result.fraction) << "\n";

    invabc::write_mask_svg(mask_svg, habitat, result.invaded);
    if (out_invaded_km2) *out_invaded_km2 = result.invaded_km2;
    if (out_fraction) *out_fraction = result.fraction;
  });
}

invabc_status invabc_hash_file(const char* path, uint64_t* out) {
  return wrap([&] {
    require(path && out, "null argument");
    *out = invabc::fnv1a_file(path);
  });
}

void invabc_string_free(char* s) { std::free(s); }

}  // extern "C"
