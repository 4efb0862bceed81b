#include "stsbc/receiver.hpp"

#include <stdexcept>

namespace stsbc {

FrameGeometry frame_geometry(SchemeId scheme, int mod_order, CodeRate rate,
                             size_t target_info_bits) {
  const auto& c = Constellation::get(mod_order);
  const auto dims = scheme_dims(scheme);
  const int bits_per_cw = dims.n_syms * c.bits;
  const auto& pat = puncture_pattern(rate);
  for (size_t k = target_info_bits; k > 0; --k) {
    const size_t pairs = k + ConvCode::kTail;
    if (pairs % pat.period != 0) continue;
    const size_t coded = punctured_length(pairs, rate);
    if (coded % bits_per_cw != 0) continue;
    FrameGeometry g;
    g.info_bits = k;
    g.mother_pairs = pairs;
    g.coded_bits = coded;
    g.bits_per_codeword = bits_per_cw;
    g.n_codewords = coded / bits_per_cw;
    return g;
  }
  throw std::invalid_argument("frame_geometry: no feasible frame length");
}

std::vector<Codeword> modulate_frame(std::span<const std::uint8_t> info, const Interleaver& il,
                                     const ReceiverConfig& cfg, const FrameGeometry& geom) {
  if (info.size() != geom.info_bits || il.size() != geom.coded_bits) {
    throw std::invalid_argument("modulate_frame: geometry mismatch");
  }
  const auto& c = Constellation::get(cfg.mod_order);
  const auto coded = conv_encode(info);
  const auto punct = puncture(coded, cfg.rate);
  const auto interleaved = il.apply(std::span<const std::uint8_t>(punct));
  const auto syms = map_bits(c, interleaved);

  const auto dims = scheme_dims(cfg.scheme);
  std::vector<Codeword> out;
  out.reserve(geom.n_codewords);
  for (size_t i = 0; i < geom.n_codewords; ++i) {
    out.push_back(encode(cfg.scheme,
                         std::span<const cplx>(syms).subspan(i * dims.n_syms, dims.n_syms)));
  }
  return out;
}

std::vector<std::uint8_t> demodulate_frame(std::span<const CMat> received,
                                           std::span<const ChannelRealization> channels,
                                           const NoiseSpec& noise, const Interleaver& il,
                                           const ReceiverConfig& cfg, const FrameGeometry& geom,
                                           const std::vector<std::uint8_t>* truth_info,
                                           FrameDiagnostics* diag) {
  if (received.size() != geom.n_codewords || channels.size() != geom.n_codewords ||
      il.size() != geom.coded_bits) {
    throw std::invalid_argument("demodulate_frame: geometry mismatch");
  }
  if (cfg.iterations < 1) throw std::invalid_argument("demodulate_frame: iterations < 1");

  const auto& c = Constellation::get(cfg.mod_order);
  const auto& disp = dispersion(cfg.scheme);
  DetectorConfig det_cfg;
  det_cfg.exact_llr = cfg.exact_llr;
  det_cfg.llr_clamp = cfg.llr_clamp;
  SisoConfig siso_cfg;
  siso_cfg.exact = cfg.exact_llr;
  siso_cfg.llr_clamp = cfg.llr_clamp;

  if (diag) {
    diag->iteration_bit_errors.clear();
    diag->iterations_run = 0;
  }

  std::vector<double> detector_prior(geom.coded_bits, 0.0);  // interleaved domain
  std::vector<double> detector_ext(geom.coded_bits, 0.0);
  std::vector<std::uint8_t> info_hat(geom.info_bits, 0);

  for (int it = 0; it < cfg.iterations; ++it) {
    for (size_t i = 0; i < geom.n_codewords; ++i) {
      const auto eq = build_equivalent(channels[i], disp);
      const RVec y = real_vec(received[i]);
      const std::span<const double> prior(detector_prior.data() + i * geom.bits_per_codeword,
                                          static_cast<size_t>(geom.bits_per_codeword));
      const auto ext = cfg.detector == DetectorKind::Exhaustive
                           ? exhaustive_maxlog_detect(eq, y, noise.n0, prior, c, det_cfg)
                           : mmse_ic_detect(eq, y, noise.n0, prior, c, det_cfg);
      std::copy(ext.begin(), ext.end(), detector_ext.begin() + i * geom.bits_per_codeword);
    }

    const auto deinterleaved = il.invert(std::span<const double>(detector_ext));
    const auto mother = depuncture(deinterleaved, cfg.rate, geom.mother_pairs);
    const auto siso = bcjr_decode(mother, {}, siso_cfg);

    for (size_t k = 0; k < geom.info_bits; ++k) {
      info_hat[k] = siso.posterior_info[k] < 0.0 ? 1 : 0;
    }
    if (diag) {
      diag->iterations_run = it + 1;
      if (truth_info) {
        std::uint64_t errs = 0;
        for (size_t k = 0; k < geom.info_bits; ++k) errs += info_hat[k] != (*truth_info)[k];
        diag->iteration_bit_errors.push_back(errs);
      }
    }
    if (it + 1 == cfg.iterations) break;

    if (cfg.early_exit) {
      // Decisions are final once they re-encode to the decoder's own
      // hard coded-bit view (posterior = extrinsic + prior).
      const auto reenc = conv_encode(info_hat);
      bool consistent = true;
      for (size_t b = 0; b < reenc.size() && consistent; ++b) {
        const double post = siso.extrinsic_coded[b] + mother[b];
        consistent = reenc[b] == (post < 0.0 ? 1 : 0);
      }
      if (consistent) break;
    }

    const auto fed_back = puncture_values(siso.extrinsic_coded, cfg.rate);
    const auto next_prior = il.apply(std::span<const double>(fed_back));
    detector_prior = next_prior;
  }
  return info_hat;
}

}  // namespace stsbc
