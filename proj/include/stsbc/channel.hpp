#pragma once

#include "stsbc/rng.hpp"
#include "stsbc/stbc.hpp"

namespace stsbc {

// Flat Rayleigh gains per channel use. The default draw keeps the gains
// constant over one codeword's time slots (quasi-static) and independent
// between codewords; the per-slot variant redraws them every slot for
// sensitivity checks. Column order matches the codeword's antenna rows
// (site-1 antennas first); the site-2 columns carry the beta imbalance.
struct ChannelRealization {
  CMat h;                      // m_r x n_tx, used for every slot when per_slot is empty
  std::vector<CMat> per_slot;  // one m_r x n_tx matrix per slot when non-empty

  bool quasi_static() const { return per_slot.empty(); }
  const CMat& at_slot(size_t t) const { return quasi_static() ? h : per_slot[t]; }
};

enum class FadingGranularity { QuasiStaticPerCodeword, IidPerSlot };

struct NoiseSpec {
  double n0 = 0.0;  // complex noise power per receive antenna per use
};

// N0 for unit total transmit energy per channel use: 1/(eta * 10^(EbN0/10)).
NoiseSpec noise_from_ebn0(double ebn0_db, double eta);

// Site-1 columns ~ CN(0,1); site-2 columns ~ CN(0, 10^(beta_db/10)).
// For two-antenna schemes the second antenna is the second site.
ChannelRealization draw_channel(Rng& rng, int m_r, SchemeId scheme, double beta_db,
                                FadingGranularity fading =
                                    FadingGranularity::QuasiStaticPerCodeword);

// Y = H X + W with W ~ CN(0, n0) i.i.d. Throws on dimension mismatch.
CMat apply(const ChannelRealization& ch, const Codeword& x, const NoiseSpec& noise, Rng& rng);

}  // namespace stsbc
