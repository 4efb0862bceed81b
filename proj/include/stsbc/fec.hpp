#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace stsbc {

// Rate-1/2 mother code: constraint length 7, feedforward, generators
// 171/133 (octal), zero-state start and zero-tail termination.
struct ConvCode {
  static constexpr int kConstraint = 7;
  static constexpr int kMemory = 6;
  static constexpr int kStates = 64;
  static constexpr unsigned kGenX = 0171;  // 1 + D + D^2 + D^3 + D^6
  static constexpr unsigned kGenY = 0133;  // 1 + D^2 + D^3 + D^5 + D^6
  static constexpr int kTail = kMemory;
};

// Output is the (x, y) stream pair interleaved per input bit:
// out[2t] = x_t, out[2t+1] = y_t, for len(info) + 6 tail steps.
std::vector<std::uint8_t> conv_encode(std::span<const std::uint8_t> info);

enum class CodeRate { R12, R23, R34 };

CodeRate code_rate_from_string(std::string_view s);  // "1/2" | "2/3" | "3/4"
const char* code_rate_name(CodeRate r);
double code_rate_value(CodeRate r);

struct PuncturePattern {
  int period;                      // in (x, y) pairs
  std::vector<std::uint8_t> keep_x;
  std::vector<std::uint8_t> keep_y;
  int kept_per_period;
};

const PuncturePattern& puncture_pattern(CodeRate r);

// Number of transmitted bits for a mother stream of `pairs` (x, y) pairs.
// `pairs` must be a multiple of the pattern period.
size_t punctured_length(size_t pairs, CodeRate r);

std::vector<std::uint8_t> puncture(std::span<const std::uint8_t> coded, CodeRate r);

// Selects the same kept positions out of a per-bit metadata sequence
// (used to forward coded-bit extrinsics through the puncturer).
std::vector<double> puncture_values(std::span<const double> coded, CodeRate r);

// Re-inserts zero LLRs (erasures) at punctured positions. `pairs` is the
// mother-stream length in (x, y) pairs; throws on a length mismatch.
std::vector<double> depuncture(std::span<const double> llrs, CodeRate r, size_t pairs);

// Seeded pseudo-random bijection over coded-bit indices (Fisher-Yates).
class Interleaver {
 public:
  Interleaver(size_t n, std::uint64_t seed);

  size_t size() const { return perm_.size(); }
  const std::vector<std::uint32_t>& permutation() const { return perm_; }

  template <typename T>
  std::vector<T> apply(std::span<const T> in) const {
    std::vector<T> out(in.size());
    for (size_t i = 0; i < in.size(); ++i) out[i] = in[perm_[i]];
    return out;
  }

  template <typename T>
  std::vector<T> invert(std::span<const T> in) const {
    std::vector<T> out(in.size());
    for (size_t i = 0; i < in.size(); ++i) out[perm_[i]] = in[i];
    return out;
  }

 private:
  std::vector<std::uint32_t> perm_;
};

// Soft-in/soft-out decoding over the 64-state trellis. LLR convention:
// positive means bit 0 is more likely. Max-log by default; `exact`
// switches the path reductions to log-sum-exp.
struct SisoConfig {
  bool exact = false;
  double llr_clamp = 50.0;
};

struct SisoResult {
  std::vector<double> extrinsic_coded;  // mother domain, 2*(K+6)
  std::vector<double> posterior_info;   // K
};

// apriori_coded has 2*(K+6) entries; apriori_info is either empty (all
// zero) or K entries. Throws on inconsistent lengths.
SisoResult bcjr_decode(std::span<const double> apriori_coded,
                       std::span<const double> apriori_info, const SisoConfig& cfg = {});

// Hard maximum-likelihood sequence decoding from coded-bit LLRs
// (mother domain, 2*(info_len+6) entries). Reference for the SISO path.
std::vector<std::uint8_t> viterbi_decode(std::span<const double> coded_llrs, size_t info_len);

}  // namespace stsbc
