#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "stsbc/channel.hpp"
#include "stsbc/modem.hpp"
#include "stsbc/stbc.hpp"

namespace stsbc {

using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Real-equivalent observation model. With X = sum_k u_k G_k and
// Y = H X + W, stacking real and imaginary parts of Y gives
//   realvec(Y) = Heq u + realvec(W),  Heq[:,k] = realvec(H G_k),
// where u = (Re s1, Im s1, ..., Re sQ, Im sQ). The per-component noise
// variance is n0/2.
struct EquivalentChannel {
  RMat h;          // (2 * m_r * n_time) x (2 * n_syms)
  int n_syms = 0;  // Q
};

// Stacking order: component 2*(t*m_r + r) is Re Y(r,t), +1 is Im Y(r,t).
RVec real_vec(const CMat& m);

EquivalentChannel build_equivalent(const ChannelRealization& ch, const DispersionSet& disp);

enum class DetectorKind { MmseIc, Exhaustive };

DetectorKind detector_from_name(std::string_view name);
const char* detector_name(DetectorKind k);

struct DetectorConfig {
  bool exact_llr = false;   // log-sum-exp instead of max-log in the bit LLRs
  double llr_clamp = 50.0;
  double reg_floor = 1e-12;  // added to the filter matrix diagonal
};

// Soft interference cancellation with per-component MMSE filtering.
// apriori holds one LLR per coded bit of the codeword (Q * log2 M,
// positive = bit 0); the returned extrinsics exclude each bit's own
// prior. n0 is the complex-domain noise power.
std::vector<double> mmse_ic_detect(const EquivalentChannel& eq, const RVec& y, double n0,
                                   std::span<const double> apriori, const Constellation& c,
                                   const DetectorConfig& cfg = {});

// Exact max-log extrinsics by enumerating all M^Q symbol vectors.
// Throws std::invalid_argument when M^Q exceeds 2^20.
std::vector<double> exhaustive_maxlog_detect(const EquivalentChannel& eq, const RVec& y, double n0,
                                             std::span<const double> apriori,
                                             const Constellation& c,
                                             const DetectorConfig& cfg = {});

}  // namespace stsbc
