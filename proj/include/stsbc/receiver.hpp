#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stsbc/detector.hpp"
#include "stsbc/fec.hpp"
#include "stsbc/modem.hpp"
#include "stsbc/stbc.hpp"

namespace stsbc {

// Frame layout: info bits -> convolutional code -> puncturing ->
// interleaver -> Gray mapping -> consecutive groups of Q symbols per
// codeword. The info length is adjusted so that every stage divides
// exactly (no pad bits).
struct FrameGeometry {
  size_t info_bits = 0;      // K
  size_t mother_pairs = 0;   // K + 6
  size_t coded_bits = 0;     // after puncturing
  size_t n_codewords = 0;
  int bits_per_codeword = 0; // Q * log2 M
};

// Largest K <= target_info_bits compatible with the puncture period and
// the codeword bit granularity.
FrameGeometry frame_geometry(SchemeId scheme, int mod_order, CodeRate rate,
                             size_t target_info_bits);

struct ReceiverConfig {
  SchemeId scheme = SchemeId::Alamouti;
  int mod_order = 4;
  CodeRate rate = CodeRate::R12;
  int iterations = 5;
  DetectorKind detector = DetectorKind::MmseIc;
  bool exact_llr = false;
  bool early_exit = false;  // stop once hard decisions re-encode consistently
  double llr_clamp = 50.0;
};

// Transmit-side helper: encodes, interleaves, maps and groups one frame.
std::vector<Codeword> modulate_frame(std::span<const std::uint8_t> info, const Interleaver& il,
                                     const ReceiverConfig& cfg, const FrameGeometry& geom);

struct FrameDiagnostics {
  std::vector<std::uint64_t> iteration_bit_errors;  // vs truth, per iteration run
  int iterations_run = 0;
};

// Iterative demodulation of one frame. Iteration 1 detects with uniform
// priors; later iterations feed the decoder's coded extrinsics back as
// detector priors. Returns hard info-bit decisions.
std::vector<std::uint8_t> demodulate_frame(std::span<const CMat> received,
                                           std::span<const ChannelRealization> channels,
                                           const NoiseSpec& noise, const Interleaver& il,
                                           const ReceiverConfig& cfg, const FrameGeometry& geom,
                                           const std::vector<std::uint8_t>* truth_info,
                                           FrameDiagnostics* diag);

}  // namespace stsbc
