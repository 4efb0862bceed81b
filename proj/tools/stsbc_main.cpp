// Command line front end: Monte Carlo BER sweeps, required-Eb/N0 search
// at a target BER, and the two preconfigured comparison grids.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "stsbc/harness.hpp"

namespace {

using nlohmann::json;
using namespace stsbc;

struct Options {
  std::string scheme = "alamouti";
  int mod = 4;
  std::string rc = "1/2";
  double beta_db = 0.0;
  std::string ebn0_db = "0:10:1";
  double target_ber = 1e-3;
  std::uint64_t min_frame_errors = 100;
  std::uint64_t max_bits = 200'000'000;
  int iterations = 5;
  std::uint64_t seed = 1;
  std::string detector = "mmse-ic";
  std::string fading = "codeword";
  std::string out = "points.csv";
  std::uint64_t frame_bits = 9000;
  int figure_id = 2;
  bool serial = false;
};

// Configuration file mirrors the flags (keys without the leading --);
// explicitly given flags override file values.
void load_config(const std::string& path, Options& o) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  json j = json::parse(in);
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("scheme", o.scheme);
  get("mod", o.mod);
  get("rc", o.rc);
  get("beta-db", o.beta_db);
  get("ebn0-db", o.ebn0_db);
  get("target-ber", o.target_ber);
  get("min-frame-errors", o.min_frame_errors);
  get("max-bits", o.max_bits);
  get("iterations", o.iterations);
  get("seed", o.seed);
  get("detector", o.detector);
  get("out", o.out);
  get("frame-bits", o.frame_bits);
  get("serial", o.serial);
}

std::vector<double> parse_grid(const std::string& spec) {
  double a = 0, b = 0, step = 1;
  const int n = std::sscanf(spec.c_str(), "%lf:%lf:%lf", &a, &b, &step);
  if (n == 1) return {a};
  if (n != 3 || step <= 0) {
    throw CLI::ValidationError("--ebn0-db", "expected A:B:STEP, got " + spec);
  }
  std::vector<double> grid;
  for (double v = a; v <= b + 1e-9; v += step) grid.push_back(v);
  return grid;
}

SimConfig to_sim_config(const Options& o) {
  SimConfig cfg;
  cfg.scheme = scheme_from_name(o.scheme);
  cfg.mod_order = o.mod;
  cfg.rate = code_rate_from_string(o.rc);
  cfg.beta_db = o.beta_db;
  cfg.iterations = o.iterations;
  cfg.detector = detector_from_name(o.detector);
  cfg.seed = o.seed;
  cfg.frame_info_bits = o.frame_bits;
  cfg.stop.min_frame_errors = o.min_frame_errors;
  cfg.stop.max_bits = o.max_bits;
  return cfg;
}

void add_common_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--scheme", o.scheme)->check(CLI::IsMember({"alamouti", "sm", "golden", "3d"}));
  cmd->add_option("--mod", o.mod)->check(CLI::IsMember({4, 16, 64, 256}));
  cmd->add_option("--rc", o.rc)->check(CLI::IsMember({"1/2", "2/3", "3/4"}));
  cmd->add_option("--beta-db", o.beta_db);
  cmd->add_option("--target-ber", o.target_ber);
  cmd->add_option("--min-frame-errors", o.min_frame_errors);
  cmd->add_option("--max-bits", o.max_bits);
  cmd->add_option("--iterations", o.iterations);
  cmd->add_option("--seed", o.seed);
  cmd->add_option("--detector", o.detector)->check(CLI::IsMember({"mmse-ic", "exhaustive"}));
  cmd->add_option("--out", o.out);
  cmd->add_option("--frame-bits", o.frame_bits);
  cmd->add_flag("--serial", o.serial, "run the serial reference path");
}

int run_simulate(const Options& o) {
  const SimConfig cfg = to_sim_config(o);
  const auto grid = parse_grid(o.ebn0_db);
  const ExecMode mode = o.serial ? ExecMode::Serial : ExecMode::Parallel;
  std::vector<BerPoint> points;
  for (double db : grid) {
    points.push_back(run_ber_point(cfg, db, mode));
    std::cout << csv_row(points.back()) << std::endl;
  }
  write_csv(o.out, points);
  return 0;
}

int run_required(const Options& o) {
  const SimConfig cfg = to_sim_config(o);
  const ExecMode mode = o.serial ? ExecMode::Serial : ExecMode::Parallel;
  const auto res = required_ebn0(cfg, o.target_ber, {}, mode);
  write_csv(o.out, res.evaluated);
  if (!res.ok()) {
    std::cout << "required_ebn0: target " << o.target_ber << " not bracketed (";
    std::cout << (res.status == RequiredEbn0Result::Status::BelowRange ? "below" : "above");
    std::cout << " the search range)" << std::endl;
    return 2;
  }
  std::printf("required_ebn0 %s mod=%d rc=%s beta=%.1f dB target=%g -> %.2f dB\n",
              o.scheme.c_str(), o.mod, o.rc.c_str(), o.beta_db, o.target_ber, res.ebn0_db);
  return 0;
}

int run_figure(const Options& o) {
  const ExecMode mode = o.serial ? ExecMode::Serial : ExecMode::Parallel;
  const auto grid = figure_grid(o.figure_id, to_sim_config(o));
  std::printf("# scheme mod rc eta beta_db required_ebn0_db\n");
  for (const auto& cfg : grid) {
    const auto res = required_ebn0(cfg, o.target_ber, {}, mode);
    write_csv(o.out, res.evaluated);
    if (res.ok()) {
      std::printf("%s %d %s %.3g %.1f %.2f\n", scheme_name(cfg.scheme), cfg.mod_order,
                  code_rate_name(cfg.rate), cfg.eta(), cfg.beta_db, res.ebn0_db);
    } else {
      std::printf("%s %d %s %.3g %.1f out-of-range\n", scheme_name(cfg.scheme), cfg.mod_order,
                  code_rate_name(cfg.rate), cfg.eta(), cfg.beta_db);
    }
    std::fflush(stdout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link-level Monte Carlo simulator for space-time block coded "
               "MIMO transmission in single frequency networks"};
  app.require_subcommand(1);

  Options o;
  std::string config_path;

  // Resolve the config file before the flag parse so flags override it.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string_view(argv[i]) == "--config") config_path = argv[i + 1];
  }
  try {
    if (!config_path.empty()) load_config(config_path, o);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 1;
  }

  auto* sim = app.add_subcommand("simulate", "BER over an Eb/N0 grid");
  add_common_flags(sim, o);
  sim->add_option("--ebn0-db", o.ebn0_db, "grid A:B:STEP or a single value");
  sim->add_option("--config", config_path, "JSON config mirroring the flags");

  auto* req = app.add_subcommand("required-ebn0", "Eb/N0 needed for a target BER");
  add_common_flags(req, o);
  req->add_option("--config", config_path);

  auto* fig = app.add_subcommand("figure", "run a preconfigured comparison grid");
  fig->add_option("--id", o.figure_id, "grid id (2 or 3)")->check(CLI::IsMember({2, 3}));
  add_common_flags(fig, o);
  fig->add_option("--config", config_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return run_simulate(o);
    if (req->parsed()) return run_required(o);
    if (fig->parsed()) return run_figure(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
