#include "stsbc/modem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stsbc {

namespace {

Constellation make_constellation(int order) {
  Constellation c;
  c.order = order;
  c.bits = static_cast<int>(std::round(std::log2(order)));
  c.axis_bits = c.bits / 2;
  c.axis_levels = 1 << c.axis_bits;

  // Unit average symbol energy: sum over one axis of a^2 equals 1/2.
  const int lv = c.axis_levels;
  c.norm = std::sqrt(2.0 * (static_cast<double>(lv) * lv - 1.0) / 3.0);

  c.amp.resize(lv);
  c.axis_label.resize(lv);
  c.level_of.resize(lv);
  for (int i = 0; i < lv; ++i) {
    c.amp[i] = static_cast<double>(lv - 1 - 2 * i) / c.norm;  // descending from +max
    c.axis_label[i] = i ^ (i >> 1);
    c.level_of[c.axis_label[i]] = i;
  }

  c.points.resize(order);
  for (int label = 0; label < order; ++label) {
    const int ilab = label >> c.axis_bits;
    const int qlab = label & (lv - 1);
    c.points[label] = cplx{c.amp[c.level_of[ilab]], c.amp[c.level_of[qlab]]};
  }
  return c;
}

}  // namespace

const Constellation& Constellation::get(int order) {
  switch (order) {
    case 4: {
      static const Constellation c = make_constellation(4);
      return c;
    }
    case 16: {
      static const Constellation c = make_constellation(16);
      return c;
    }
    case 64: {
      static const Constellation c = make_constellation(64);
      return c;
    }
    case 256: {
      static const Constellation c = make_constellation(256);
      return c;
    }
    default:
      throw std::invalid_argument("unsupported constellation order " + std::to_string(order));
  }
}

std::vector<cplx> map_bits(const Constellation& c, std::span<const std::uint8_t> bits) {
  if (bits.size() % c.bits != 0) {
    throw std::invalid_argument("map_bits: bit count not a multiple of log2(M)");
  }
  std::vector<cplx> out(bits.size() / c.bits);
  size_t p = 0;
  for (auto& sym : out) {
    int label = 0;
    for (int b = 0; b < c.bits; ++b) label = (label << 1) | (bits[p++] & 1);
    sym = c.points[label];
  }
  return out;
}

void hard_demap(const Constellation& c, cplx y, std::uint8_t* bits_out) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int label = 0; label < c.order; ++label) {
    const double d = std::norm(y - c.points[label]);
    if (d < best_d) {
      best_d = d;
      best = label;
    }
  }
  for (int b = 0; b < c.bits; ++b) {
    bits_out[b] = static_cast<std::uint8_t>((best >> (c.bits - 1 - b)) & 1);
  }
}

std::vector<SymbolPrior> priors_from_llrs(const Constellation& c, std::span<const double> llrs) {
  if (llrs.size() % c.bits != 0) {
    throw std::invalid_argument("priors_from_llrs: LLR count not a multiple of log2(M)");
  }
  const size_t n_syms = llrs.size() / c.bits;
  std::vector<SymbolPrior> out(n_syms);
  std::vector<double> lp0(c.bits), lp1(c.bits);
  for (size_t s = 0; s < n_syms; ++s) {
    for (int b = 0; b < c.bits; ++b) {
      const double l = llrs[s * c.bits + b];
      // log P(bit=0) and log P(bit=1) for LLR = log(P0/P1)
      lp0[b] = -std::log1p(std::exp(-l));
      lp1[b] = -std::log1p(std::exp(l));
    }
    SymbolPrior p(c.order);
    double sum = 0.0;
    for (int label = 0; label < c.order; ++label) {
      double lp = 0.0;
      for (int b = 0; b < c.bits; ++b) {
        lp += ((label >> (c.bits - 1 - b)) & 1) ? lp1[b] : lp0[b];
      }
      p[label] = std::exp(lp);
      sum += p[label];
    }
    for (auto& v : p) v /= sum;
    out[s] = std::move(p);
  }
  return out;
}

std::pair<cplx, double> soft_symbol_stats(const Constellation& c, const SymbolPrior& prior) {
  if (prior.size() != static_cast<size_t>(c.order)) {
    throw std::invalid_argument("soft_symbol_stats: prior size mismatch");
  }
  cplx mean{0.0, 0.0};
  double e2 = 0.0;
  for (int label = 0; label < c.order; ++label) {
    mean += prior[label] * c.points[label];
    e2 += prior[label] * std::norm(c.points[label]);
  }
  return {mean, e2 - std::norm(mean)};
}

}  // namespace stsbc
