// invabc: transdimensional ABC for road-mediated invasion data.
// Thin shell over the C API: parses arguments, prepares a run directory with
// reproducibility metadata, dispatches, and maps statuses to exit codes.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "invabc/capi.h"

namespace fs = std::filesystem;

namespace {

int exit_code_for(invabc_status st) {
  switch (st) {
    case INVABC_OK:
      return 0;
    case INVABC_ERUNTIME:
      return 3;
    default:
      return 2;  // EINVAL, EDATA, EIO: bad input of one kind or another
  }
}

[[noreturn]] void die(invabc_status st) {
  std::cerr << "error: " << invabc_last_error() << "\n";
  std::exit(exit_code_for(st));
}

void check(invabc_status st) {
  if (st != INVABC_OK) die(st);
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;  // key=value, applied in order
  std::string seed;                    // convenience for `--set seed=`
  std::string threads;                 // convenience for `--set threads=`
};

void add_common(CLI::App* sub, CommonArgs* args) {
  sub->add_option("--config", args->config_path,
                  "key = value settings file (defaults used when omitted)");
  sub->add_option("--out", args->out_dir, "run directory (created if missing)")
      ->required();
  sub->add_option("--set", args->overrides,
                  "override one setting, key=value (repeatable)");
  sub->add_option("--seed", args->seed, "shorthand for --set seed=N");
  sub->add_option("--threads", args->threads,
                  "shorthand for --set threads=N");
}

invabc_config* build_config(const CommonArgs& args) {
  invabc_config* cfg = nullptr;
  if (args.config_path.empty())
    check(invabc_config_new(&cfg));
  else
    check(invabc_config_load(args.config_path.c_str(), &cfg));
  if (!args.seed.empty())
    check(invabc_config_set(cfg, "seed", args.seed.c_str()));
  if (!args.threads.empty())
    check(invabc_config_set(cfg, "threads", args.threads.c_str()));
  for (const auto& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
      std::exit(1);
    }
    check(invabc_config_set(cfg, kv.substr(0, eq).c_str(),
                            kv.substr(eq + 1).c_str()));
  }
  return cfg;
}

std::string hash_hex(const std::string& path) {
  uint64_t h = 0;
  check(invabc_hash_file(path.c_str(), &h));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Reproducibility metadata: the exact invocation, a content hash per input
// file, and the fully resolved settings. No timestamps, so reruns are
// byte-identical.
void write_run_metadata(const std::string& dir, const std::string& command,
                        const CommonArgs& args,
                        const std::vector<std::pair<std::string, std::string>>&
                            inputs,
                        const invabc_config* cfg) {
  std::ofstream out(dir + "/run.txt", std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << dir << "/run.txt\n";
    std::exit(2);
  }
  out << "command = " << command << "\n";
  if (!args.config_path.empty())
    out << "input config " << args.config_path
        << " fnv1a=" << hash_hex(args.config_path) << "\n";
  for (const auto& [label, path] : inputs)
    out << "input " << label << " " << path << " fnv1a=" << hash_hex(path)
        << "\n";
  char* rendered = nullptr;
  check(invabc_config_render(cfg, &rendered));
  out << "\n" << rendered;
  invabc_string_free(rendered);
}

std::string join_path(const std::string& dir, const char* name) {
  return dir + "/" + name;
}

invabc_dataset* load_dataset(const std::string& transects,
                             const std::string& temporal) {
  invabc_dataset* ds = nullptr;
  char* warnings = nullptr;
  check(invabc_dataset_load(transects.c_str(), temporal.c_str(), &ds,
                            &warnings));
  if (warnings) {
    std::cerr << "warning: " << warnings << "\n";
    invabc_string_free(warnings);
  }
  return ds;
}

void print_and_save_summary(invabc_trace* trace, const std::string& dir) {
  char* text = nullptr;
  check(invabc_trace_summary(trace, &text));
  std::cout << text;
  std::ofstream out(join_path(dir, "summary.txt"), std::ios::binary);
  out << text;
  invabc_string_free(text);
  check(invabc_trace_histograms(trace, dir.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
  std::string command;
  for (int i = 0; i < argc; ++i) {
    if (i) command += " ";
    command += argv[i];
  }

  CLI::App app{"Bayesian inference for roadside invasion transect data"};
  app.require_subcommand(1);

  CommonArgs sim_args, infer_args, rej_args, oracle_args, study_args,
      proj_args;
  std::string transects, temporal, network, habitat;
  std::string oracle_transects, oracle_temporal;

  auto* sim = app.add_subcommand(
      "simulate", "draw a synthetic dataset from the generative model");
  add_common(sim, &sim_args);

  auto* infer = app.add_subcommand(
      "infer", "transdimensional MCMC posterior for a dataset");
  add_common(infer, &infer_args);
  infer->add_option("--transects", transects, "road transect CSV")->required();
  infer->add_option("--temporal", temporal, "spread-rate file")->required();

  auto* rej = app.add_subcommand(
      "rejection", "prior-rejection ABC baseline for a dataset");
  add_common(rej, &rej_args);
  rej->add_option("--transects", transects, "road transect CSV")->required();
  rej->add_option("--temporal", temporal, "spread-rate file")->required();

  auto* oracle = app.add_subcommand(
      "oracle", "exact pattern likelihoods and gridded rate posterior");
  add_common(oracle, &oracle_args);
  auto* opt_ot = oracle->add_option("--transects", oracle_transects,
                                    "optional dataset for the gridded posterior");
  auto* opt_oz = oracle->add_option("--temporal", oracle_temporal,
                                    "spread-rate file accompanying --transects");
  opt_ot->needs(opt_oz);
  opt_oz->needs(opt_ot);

  auto* study = app.add_subcommand(
      "study", "simulate-and-refit credible-interval coverage study");
  add_common(study, &study_args);

  auto* proj = app.add_subcommand(
      "project", "project invasion from a road network onto habitat");
  add_common(proj, &proj_args);
  proj->add_option("--network", network, "road network CSV")->required();
  proj->add_option("--habitat", habitat, "habitat raster file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  CommonArgs* args = nullptr;
  if (sim->parsed()) args = &sim_args;
  if (infer->parsed()) args = &infer_args;
  if (rej->parsed()) args = &rej_args;
  if (oracle->parsed()) args = &oracle_args;
  if (study->parsed()) args = &study_args;
  if (proj->parsed()) args = &proj_args;

  invabc_config* cfg = build_config(*args);
  std::error_code ec;
  fs::create_directories(args->out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << args->out_dir << ": "
              << ec.message() << "\n";
    return 2;
  }
  const std::string dir = args->out_dir;

  std::vector<std::pair<std::string, std::string>> inputs;
  if (infer->parsed() || rej->parsed()) {
    inputs.emplace_back("transects", transects);
    inputs.emplace_back("temporal", temporal);
  }
  if (oracle->parsed() && !oracle_transects.empty()) {
    inputs.emplace_back("transects", oracle_transects);
    inputs.emplace_back("temporal", oracle_temporal);
  }
  if (proj->parsed()) {
    inputs.emplace_back("network", network);
    inputs.emplace_back("habitat", habitat);
  }
  write_run_metadata(dir, command, *args, inputs, cfg);

  if (sim->parsed()) {
    invabc_dataset* ds = nullptr;
    check(invabc_dataset_simulate(cfg, &ds));
    check(invabc_dataset_write(ds, join_path(dir, "transects.csv").c_str(),
                               join_path(dir, "temporal.txt").c_str(),
                               join_path(dir, "latents.csv").c_str()));
    int n_roads = 0, n_groups = 0;
    check(invabc_dataset_n_roads(ds, &n_roads));
    check(invabc_dataset_n_groups(ds, &n_groups));
    std::cout << "simulated " << n_roads << " roads in " << n_groups
              << (n_groups == 1 ? " group" : " groups") << " -> " << dir
              << "\n";
    invabc_dataset_free(ds);
  } else if (infer->parsed() || rej->parsed()) {
    invabc_dataset* ds = load_dataset(transects, temporal);
    invabc_trace* trace = nullptr;
    if (infer->parsed())
      check(invabc_infer(cfg, ds, join_path(dir, "trace.csv").c_str(),
                         join_path(dir, "latents.csv").c_str(), &trace));
    else
      check(invabc_rejection(cfg, ds, join_path(dir, "trace.csv").c_str(),
                             &trace));
    print_and_save_summary(trace, dir);
    invabc_trace_free(trace);
    invabc_dataset_free(ds);
  } else if (oracle->parsed()) {
    check(invabc_oracle_table(cfg, join_path(dir, "table.csv").c_str()));
    std::cout << "pattern likelihood table -> " << dir << "/table.csv\n";
    if (!oracle_transects.empty()) {
      invabc_dataset* ds = load_dataset(oracle_transects, oracle_temporal);
      check(invabc_oracle_grid(cfg, ds, join_path(dir, "grid.csv").c_str()));
      std::cout << "gridded rate posterior -> " << dir << "/grid.csv\n";
      invabc_dataset_free(ds);
    }
  } else if (study->parsed()) {
    check(invabc_study(cfg, join_path(dir, "coverage.csv").c_str()));
    std::ifstream in(join_path(dir, "coverage.csv"));
    std::cout << in.rdbuf();
  } else if (proj->parsed()) {
    double km2 = 0.0, fraction = 0.0;
    check(invabc_project(cfg, network.c_str(), habitat.c_str(),
                         join_path(dir, "invaded.txt").c_str(),
                         join_path(dir, "summary.csv").c_str(),
                         join_path(dir, "mask.svg").c_str(), &km2, &fraction));
    std::cout << "invaded " << km2 << " km^2 (" << fraction
              << " of suitable cells) -> " << dir << "\n";
  }

  invabc_config_free(cfg);
  return 0;
}
