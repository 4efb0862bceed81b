#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace stsbc {

using cplx = std::complex<double>;

// Square QAM with an independent binary-reflected Gray code per axis.
// A symbol label carries the I-axis bits first (MSB first), then the
// Q-axis bits. Level index 0 is the most positive amplitude.
struct Constellation {
  int order = 0;        // M
  int bits = 0;         // log2 M
  int axis_levels = 0;  // sqrt M
  int axis_bits = 0;    // bits / 2
  double norm = 1.0;    // amplitude divisor giving unit average energy

  std::vector<cplx> points;      // indexed by bit label
  std::vector<double> amp;       // PAM amplitude per level index
  std::vector<int> axis_label;   // Gray label per level index
  std::vector<int> level_of;     // level index per Gray label

  // Cached tables for M in {4, 16, 64, 256}; throws otherwise.
  static const Constellation& get(int order);
};

// Maps bits (multiple of log2 M) onto Gray-labelled QAM symbols.
std::vector<cplx> map_bits(const Constellation& c, std::span<const std::uint8_t> bits);

// Nearest-point hard decision, returning the point's bit label.
void hard_demap(const Constellation& c, cplx y, std::uint8_t* bits_out);

// Probability vector over the M constellation points.
using SymbolPrior = std::vector<double>;

// Per-symbol point priors from per-bit LLRs (positive LLR means bit 0).
// llrs.size() must be a multiple of log2 M.
std::vector<SymbolPrior> priors_from_llrs(const Constellation& c, std::span<const double> llrs);

// Mean and variance of a soft symbol: E[x] and E[|x|^2] - |E[x]|^2.
std::pair<cplx, double> soft_symbol_stats(const Constellation& c, const SymbolPrior& prior);

}  // namespace stsbc
