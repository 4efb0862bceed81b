// Times the Monte Carlo engine's serial reference against the OpenMP
// path on a fixed workload and checks that both produce the same point.

#include <chrono>
#include <cstdio>
#include <string>

#include "stsbc/harness.hpp"

using namespace stsbc;

namespace {

double time_point(const SimConfig& cfg, double ebn0_db, ExecMode mode, BerPoint& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = run_ber_point(cfg, ebn0_db, mode);
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  SimConfig cfg;
  cfg.scheme = SchemeId::Golden;
  cfg.mod_order = 16;
  cfg.rate = CodeRate::R12;
  cfg.beta_db = -6.0;
  cfg.iterations = 5;
  cfg.seed = 99;
  cfg.frame_info_bits = 9000;
  cfg.stop.min_frame_errors = 1'000'000;  // run to the bit budget
  cfg.stop.max_bits = argc > 1 ? std::stoull(argv[1]) : 600'000;
  const double ebn0_db = 6.0;

  std::printf("workload: %s %d-QAM rc=%s beta=%.0f dB, %llu info bits, %d workers\n",
              scheme_name(cfg.scheme), cfg.mod_order, code_rate_name(cfg.rate), cfg.beta_db,
              static_cast<unsigned long long>(cfg.stop.max_bits), worker_count());

  BerPoint serial, parallel;
  const double ts = time_point(cfg, ebn0_db, ExecMode::Serial, serial);
  const double tp = time_point(cfg, ebn0_db, ExecMode::Parallel, parallel);

  std::printf("serial   : %7.2f s  (%.0f bits/s)\n", ts, serial.bits / ts);
  std::printf("parallel : %7.2f s  (%.0f bits/s)\n", tp, parallel.bits / tp);
  std::printf("speedup  : %7.2fx\n", ts / tp);

  if (csv_row(serial) != csv_row(parallel)) {
    std::printf("MISMATCH: serial and parallel runs disagree\n%s\n%s\n", csv_row(serial).c_str(),
                csv_row(parallel).c_str());
    return 1;
  }
  std::printf("serial and parallel outputs are identical\n");
  return 0;
}
