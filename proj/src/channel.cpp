#include "stsbc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace stsbc {

NoiseSpec noise_from_ebn0(double ebn0_db, double eta) {
  if (eta <= 0.0) throw std::invalid_argument("noise_from_ebn0: eta must be positive");
  return {1.0 / (eta * std::pow(10.0, ebn0_db / 10.0))};
}

namespace {
CMat draw_gains(Rng& rng, int m_r, int n_tx, double site2_amp) {
  const int site2_first = n_tx / 2;
  CMat h(m_r, n_tx);
  for (int c = 0; c < n_tx; ++c) {
    const double amp = c >= site2_first ? site2_amp : 1.0;
    for (int r = 0; r < m_r; ++r) h(r, c) = amp * rng.next_cgaussian(1.0);
  }
  return h;
}
}  // namespace

ChannelRealization draw_channel(Rng& rng, int m_r, SchemeId scheme, double beta_db,
                                FadingGranularity fading) {
  const auto dims = scheme_dims(scheme);
  const double site2_amp = std::pow(10.0, beta_db / 20.0);
  ChannelRealization ch;
  if (fading == FadingGranularity::QuasiStaticPerCodeword) {
    ch.h = draw_gains(rng, m_r, dims.n_tx, site2_amp);
  } else {
    ch.per_slot.reserve(dims.n_time);
    for (int t = 0; t < dims.n_time; ++t) {
      ch.per_slot.push_back(draw_gains(rng, m_r, dims.n_tx, site2_amp));
    }
    ch.h = ch.per_slot.front();
  }
  return ch;
}

CMat apply(const ChannelRealization& ch, const Codeword& x, const NoiseSpec& noise, Rng& rng) {
  if (ch.at_slot(0).cols() != x.entries.rows() ||
      (!ch.quasi_static() &&
       ch.per_slot.size() != static_cast<size_t>(x.entries.cols()))) {
    throw std::invalid_argument("apply: channel/codeword dimension mismatch");
  }
  CMat y(ch.at_slot(0).rows(), x.entries.cols());
  for (Eigen::Index t = 0; t < x.entries.cols(); ++t) {
    y.col(t) = ch.at_slot(t) * x.entries.col(t);
  }
  if (noise.n0 > 0.0) {
    for (Eigen::Index c = 0; c < y.cols(); ++c) {
      for (Eigen::Index r = 0; r < y.rows(); ++r) y(r, c) += rng.next_cgaussian(noise.n0);
    }
  }
  return y;
}

}  // namespace stsbc
