#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stsbc/receiver.hpp"

namespace stsbc {

struct StoppingRule {
  std::uint64_t min_frame_errors = 100;
  std::uint64_t min_bit_errors = 0;
  std::uint64_t max_bits = 200'000'000;
};

struct SimConfig {
  SchemeId scheme = SchemeId::Alamouti;
  int mod_order = 4;
  CodeRate rate = CodeRate::R12;
  double beta_db = 0.0;
  int m_r = 2;
  int iterations = 5;
  DetectorKind detector = DetectorKind::MmseIc;
  FadingGranularity fading = FadingGranularity::QuasiStaticPerCodeword;
  std::uint64_t seed = 1;
  size_t frame_info_bits = 9000;
  StoppingRule stop;

  // Information bits per channel use: R * Rc * log2 M.
  double eta() const;
  ReceiverConfig receiver() const;
};

struct BerPoint {
  std::string scheme;
  int mod_order = 0;
  std::string rate;
  double eta = 0.0;
  double beta_db = 0.0;
  double ebn0_db = 0.0;
  std::uint64_t bits = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t frames = 0;
  std::uint64_t frame_errors = 0;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::vector<double> iteration_ber;

  double ber() const { return bits ? static_cast<double>(bit_errors) / bits : 0.0; }
  double ci95() const;  // binomial normal-approximation half width
};

enum class ExecMode { Serial, Parallel };

// Monte Carlo BER at one Eb/N0 point. Frames are simulated in fixed-size
// batches with one RNG stream per frame index, so the result is
// bit-identical between the serial and the OpenMP path and independent
// of the worker count.
BerPoint run_ber_point(const SimConfig& cfg, double ebn0_db, ExecMode mode = ExecMode::Parallel);

struct SearchOptions {
  double start_db = 4.0;
  double coarse_step_db = 2.0;
  double fine_step_db = 0.5;
  double min_db = -4.0;
  double max_db = 44.0;
};

struct RequiredEbn0Result {
  enum class Status { Ok, BelowRange, AboveRange };
  Status status = Status::Ok;
  double ebn0_db = 0.0;
  std::vector<BerPoint> evaluated;  // all points visited, ascending Eb/N0
  std::optional<BerPoint> bracket_lo, bracket_hi;

  bool ok() const { return status == Status::Ok; }
};

// Brackets the target BER on a fine grid and interpolates linearly in
// log10(BER) versus dB between the two bracketing points.
RequiredEbn0Result required_ebn0_search(const std::function<BerPoint(double)>& eval,
                                        double target_ber, const SearchOptions& opt);

RequiredEbn0Result required_ebn0(const SimConfig& cfg, double target_ber,
                                 const SearchOptions& opt = {},
                                 ExecMode mode = ExecMode::Parallel);

// CSV with the fixed column order
// scheme,mod,rc,eta,beta_db,ebn0_db,bits,bit_errors,frame_errors,ber,ci95,iters,seed.
// Appends without a header when the file already has content.
void write_csv(const std::filesystem::path& path, const std::vector<BerPoint>& points);
std::string csv_header();
std::string csv_row(const BerPoint& p);

// Preconfigured comparison grids over beta in {0,-3,...,-15} dB:
// grid 2 is the single-layer set at eta = 4, grid 3 the double-layer
// comparison at eta = 4 and eta = 6.
std::vector<SimConfig> figure_grid(int id, const SimConfig& base);

// Uncoded coherent BPSK over a 1x1 Rayleigh channel with the same noise
// calibration (eta = 1); closed-form reference lives in the tests.
double uncoded_bpsk_rayleigh_ber(double ebn0_db, std::uint64_t min_bit_errors,
                                 std::uint64_t max_bits, std::uint64_t seed);

// Worker threads: OpenMP's limit, optionally capped by STSBC_THREADS.
int worker_count();

}  // namespace stsbc
