#include "stsbc/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stsbc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double clamp_llr(double v, double c) { return std::clamp(v, -c, c); }

inline double reduce(double a, double b, bool exact) {
  if (!exact) return std::min(a, b);
  if (a == kInf) return b;
  if (b == kInf) return a;
  const double m = std::min(a, b);
  return m - std::log1p(std::exp(-(std::max(a, b) - m)));
}

// Prior weight of a level: sum of bit-value * LLR over the axis bits.
// Shared additive constants cancel in every LLR difference.
struct AxisPrior {
  double mean = 0.0;
  double var = 0.0;
  std::vector<double> weight;  // per level index, bit-prior cost
  std::vector<double> prob;    // per level index
};

AxisPrior axis_prior(const Constellation& c, std::span<const double> bit_llrs) {
  const int lv = c.axis_levels;
  AxisPrior ap;
  ap.weight.resize(lv);
  ap.prob.resize(lv);
  double wmin = kInf;
  for (int i = 0; i < lv; ++i) {
    const int label = c.axis_label[i];
    double w = 0.0;
    for (int b = 0; b < c.axis_bits; ++b) {
      if ((label >> (c.axis_bits - 1 - b)) & 1) w += bit_llrs[b];
    }
    ap.weight[i] = w;
    wmin = std::min(wmin, w);
  }
  double sum = 0.0;
  for (int i = 0; i < lv; ++i) {
    ap.prob[i] = std::exp(-(ap.weight[i] - wmin));
    sum += ap.prob[i];
  }
  double e2 = 0.0;
  for (int i = 0; i < lv; ++i) {
    ap.prob[i] /= sum;
    ap.mean += ap.prob[i] * c.amp[i];
    e2 += ap.prob[i] * c.amp[i] * c.amp[i];
  }
  ap.var = std::max(e2 - ap.mean * ap.mean, 0.0);
  return ap;
}

}  // namespace

RVec real_vec(const CMat& m) {
  RVec v(2 * m.size());
  Eigen::Index k = 0;
  for (Eigen::Index t = 0; t < m.cols(); ++t) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      v(k++) = m(r, t).real();
      v(k++) = m(r, t).imag();
    }
  }
  return v;
}

EquivalentChannel build_equivalent(const ChannelRealization& ch, const DispersionSet& disp) {
  const Eigen::Index n_time = disp.gens[0].cols();
  if (ch.at_slot(0).cols() != disp.gens[0].rows() ||
      (!ch.quasi_static() && ch.per_slot.size() != static_cast<size_t>(n_time))) {
    throw std::invalid_argument("build_equivalent: channel/dispersion dimension mismatch");
  }
  const Eigen::Index rows = 2 * ch.at_slot(0).rows() * n_time;
  EquivalentChannel eq;
  eq.n_syms = disp.n_syms;
  eq.h.resize(rows, static_cast<Eigen::Index>(disp.gens.size()));
  if (ch.quasi_static()) {
    for (size_t k = 0; k < disp.gens.size(); ++k) {
      eq.h.col(static_cast<Eigen::Index>(k)) = real_vec(ch.h * disp.gens[k]);
    }
  } else {
    CMat faded(ch.at_slot(0).rows(), n_time);
    for (size_t k = 0; k < disp.gens.size(); ++k) {
      for (Eigen::Index t = 0; t < n_time; ++t) {
        faded.col(t) = ch.at_slot(t) * disp.gens[k].col(t);
      }
      eq.h.col(static_cast<Eigen::Index>(k)) = real_vec(faded);
    }
  }
  return eq;
}

DetectorKind detector_from_name(std::string_view name) {
  if (name == "mmse-ic") return DetectorKind::MmseIc;
  if (name == "exhaustive") return DetectorKind::Exhaustive;
  throw std::invalid_argument("unknown detector: " + std::string(name));
}

const char* detector_name(DetectorKind k) {
  return k == DetectorKind::MmseIc ? "mmse-ic" : "exhaustive";
}

// Per real component k the receiver forms
//   z_k = f^T (y - Heq m + h_k m_k) / g_k,   f = A^-1 h_k,
//   A = Heq diag(v) Heq^T + (n0/2) I,        g_k = h_k^T A^-1 h_k,
// which is the MMSE estimate after cancelling the soft means of all
// other components. The unbiased output obeys z_k = u_k + nu with
// Var(nu) = 1/g_k - v_k, independent of component k's own prior (both
// its mean and its variance cancel). The bit LLRs are read off z_k with
// a prior-free metric over the component's own levels, so the output is
// extrinsic at symbol granularity: none of the symbol's own priors
// enter its LLRs, they only shape the cancellation of the others.
std::vector<double> mmse_ic_detect(const EquivalentChannel& eq, const RVec& y, double n0,
                                   std::span<const double> apriori, const Constellation& c,
                                   const DetectorConfig& cfg) {
  const int nd = static_cast<int>(eq.h.cols());  // 2Q
  const int q = eq.n_syms;
  if (nd != 2 * q) throw std::invalid_argument("mmse_ic_detect: malformed equivalent channel");
  if (y.size() != eq.h.rows()) throw std::invalid_argument("mmse_ic_detect: observation size");
  if (apriori.size() != static_cast<size_t>(q) * c.bits) {
    throw std::invalid_argument("mmse_ic_detect: prior size mismatch");
  }
  const int h_bits = c.axis_bits;

  std::vector<AxisPrior> priors(nd);
  RVec mean(nd), var(nd);
  for (int k = 0; k < nd; ++k) {
    const int sym = k / 2;
    const int axis = k % 2;  // 0 = I (first half of the symbol's bits)
    priors[k] = axis_prior(c, apriori.subspan(static_cast<size_t>(sym) * c.bits + axis * h_bits,
                                              static_cast<size_t>(h_bits)));
    mean(k) = priors[k].mean;
    var(k) = priors[k].var;
  }

  const double noise_var = 0.5 * n0 + cfg.reg_floor;
  RMat a = eq.h * var.asDiagonal() * eq.h.transpose();
  a.diagonal().array() += noise_var;
  Eigen::LLT<RMat> llt(a);
  const RMat f = llt.solve(eq.h);          // one solve for all components
  const RVec ymc = y - eq.h * mean;        // all soft means cancelled

  std::vector<double> out(apriori.size(), 0.0);
  for (int k = 0; k < nd; ++k) {
    const int sym = k / 2;
    const int axis = k % 2;
    const double g = eq.h.col(k).dot(f.col(k));
    double* bits_out = &out[static_cast<size_t>(sym) * c.bits + axis * h_bits];
    if (g <= cfg.reg_floor) continue;  // component not observed; no information

    const double z = f.col(k).dot(ymc) / g + mean(k);
    const double sigma2 = std::max(1.0 / g - var(k), cfg.reg_floor);
    const double inv2s = 1.0 / (2.0 * sigma2);

    for (int b = 0; b < h_bits; ++b) {
      double m0 = kInf, m1 = kInf;
      for (int i = 0; i < c.axis_levels; ++i) {
        const double d = z - c.amp[i];
        const double t = d * d * inv2s;
        if ((c.axis_label[i] >> (h_bits - 1 - b)) & 1) {
          m1 = reduce(m1, t, cfg.exact_llr);
        } else {
          m0 = reduce(m0, t, cfg.exact_llr);
        }
      }
      bits_out[b] = clamp_llr(m1 - m0, cfg.llr_clamp);
    }
  }
  return out;
}

std::vector<double> exhaustive_maxlog_detect(const EquivalentChannel& eq, const RVec& y, double n0,
                                             std::span<const double> apriori,
                                             const Constellation& c, const DetectorConfig& cfg) {
  const int q = eq.n_syms;
  if (apriori.size() != static_cast<size_t>(q) * c.bits) {
    throw std::invalid_argument("exhaustive_maxlog_detect: prior size mismatch");
  }
  double cand = std::pow(static_cast<double>(c.order), q);
  if (cand > static_cast<double>(1 << 20)) {
    throw std::invalid_argument("exhaustive_maxlog_detect: search space exceeds 2^20 candidates");
  }
  const int n = static_cast<int>(eq.h.rows());
  const double inv_n0 = 1.0 / std::max(n0, 1e-12);
  const int nbits = q * c.bits;

  // Per-symbol, per-label received contribution and prior cost.
  std::vector<RMat> contrib(q);
  std::vector<std::vector<double>> prior_cost(q, std::vector<double>(c.order));
  for (int s = 0; s < q; ++s) {
    contrib[s].resize(n, c.order);
    for (int label = 0; label < c.order; ++label) {
      const cplx p = c.points[label];
      contrib[s].col(label) =
          p.real() * eq.h.col(2 * s) + p.imag() * eq.h.col(2 * s + 1);
      double w = 0.0;
      for (int b = 0; b < c.bits; ++b) {
        if ((label >> (c.bits - 1 - b)) & 1) w += apriori[static_cast<size_t>(s) * c.bits + b];
      }
      prior_cost[s][label] = w;
    }
  }

  std::vector<double> min0(nbits, kInf), min1(nbits, kInf);
  std::vector<int> labels(q, 0);
  RVec residual = y;

  // Depth-first walk over symbol labels with incremental residuals.
  auto walk = [&](auto&& self, int depth, double prior_acc) -> void {
    if (depth == q) {
      const double metric = residual.squaredNorm() * inv_n0 + prior_acc;
      for (int s = 0; s < q; ++s) {
        const int label = labels[s];
        for (int b = 0; b < c.bits; ++b) {
          const int idx = s * c.bits + b;
          if ((label >> (c.bits - 1 - b)) & 1) {
            min1[idx] = std::min(min1[idx], metric);
          } else {
            min0[idx] = std::min(min0[idx], metric);
          }
        }
      }
      return;
    }
    for (int label = 0; label < c.order; ++label) {
      labels[depth] = label;
      residual -= contrib[depth].col(label);
      self(self, depth + 1, prior_acc + prior_cost[depth][label]);
      residual += contrib[depth].col(label);
    }
  };
  walk(walk, 0, 0.0);

  std::vector<double> out(nbits);
  for (int idx = 0; idx < nbits; ++idx) {
    out[idx] = clamp_llr((min1[idx] - min0[idx]) - apriori[idx], cfg.llr_clamp);
  }
  return out;
}

}  // namespace stsbc
