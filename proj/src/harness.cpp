#include "stsbc/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stsbc/channel.hpp"
#include "stsbc/rng.hpp"

namespace stsbc {

namespace {

constexpr size_t kFrameBatch = 64;  // fixed batch so stopping is worker-count independent

struct FrameOutcome {
  std::uint64_t bit_errors = 0;
  bool frame_error = false;
  std::vector<std::uint64_t> iteration_bit_errors;
};

std::uint64_t point_salt(const SimConfig& cfg, double ebn0_db) {
  return derive_stream({cfg.seed, std::bit_cast<std::uint64_t>(ebn0_db),
                        std::bit_cast<std::uint64_t>(cfg.beta_db),
                        static_cast<std::uint64_t>(cfg.scheme),
                        static_cast<std::uint64_t>(cfg.mod_order),
                        static_cast<std::uint64_t>(cfg.rate),
                        static_cast<std::uint64_t>(cfg.iterations),
                        static_cast<std::uint64_t>(cfg.fading),
                        static_cast<std::uint64_t>(cfg.m_r), cfg.frame_info_bits});
}

FrameOutcome simulate_frame(const SimConfig& cfg, const FrameGeometry& geom,
                            const NoiseSpec& noise, std::uint64_t salt, std::uint64_t frame_idx) {
  Rng rng(salt, frame_idx);
  const Interleaver il(geom.coded_bits, derive_stream({salt, frame_idx, 0x696cull}));
  const ReceiverConfig rx = cfg.receiver();

  std::vector<std::uint8_t> info(geom.info_bits);
  for (auto& b : info) b = rng.next_bit() ? 1 : 0;

  const auto codewords = modulate_frame(info, il, rx, geom);
  std::vector<ChannelRealization> channels;
  std::vector<CMat> received;
  channels.reserve(codewords.size());
  received.reserve(codewords.size());
  for (const auto& cw : codewords) {
    channels.push_back(draw_channel(rng, cfg.m_r, cfg.scheme, cfg.beta_db, cfg.fading));
    received.push_back(apply(channels.back(), cw, noise, rng));
  }

  FrameDiagnostics diag;
  const auto decoded = demodulate_frame(received, channels, noise, il, rx, geom, &info, &diag);

  FrameOutcome out;
  for (size_t k = 0; k < info.size(); ++k) out.bit_errors += decoded[k] != info[k];
  out.frame_error = out.bit_errors > 0;
  out.iteration_bit_errors = std::move(diag.iteration_bit_errors);
  return out;
}

}  // namespace

double SimConfig::eta() const {
  return code_rate(scheme).value() * code_rate_value(rate) *
         std::log2(static_cast<double>(mod_order));
}

ReceiverConfig SimConfig::receiver() const {
  ReceiverConfig rx;
  rx.scheme = scheme;
  rx.mod_order = mod_order;
  rx.rate = rate;
  rx.iterations = iterations;
  rx.detector = detector;
  return rx;
}

double BerPoint::ci95() const {
  if (bits == 0) return 0.0;
  const double p = ber();
  return 1.96 * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(bits));
}

int worker_count() {
  int n = 1;
#ifdef _OPENMP
  n = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("STSBC_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min<long>(n, cap);
  }
  return std::max(n, 1);
}

BerPoint run_ber_point(const SimConfig& cfg, double ebn0_db, ExecMode mode) {
  const auto geom = frame_geometry(cfg.scheme, cfg.mod_order, cfg.rate, cfg.frame_info_bits);
  const NoiseSpec noise = noise_from_ebn0(ebn0_db, cfg.eta());
  const std::uint64_t salt = point_salt(cfg, ebn0_db);

  BerPoint pt;
  pt.scheme = scheme_name(cfg.scheme);
  pt.mod_order = cfg.mod_order;
  pt.rate = code_rate_name(cfg.rate);
  pt.eta = cfg.eta();
  pt.beta_db = cfg.beta_db;
  pt.ebn0_db = ebn0_db;
  pt.iterations = cfg.iterations;
  pt.seed = cfg.seed;

  std::vector<std::uint64_t> iter_errors;
  std::vector<FrameOutcome> batch(kFrameBatch);
  std::uint64_t next_frame = 0;
  const int workers = worker_count();

  while (true) {
    const size_t n = kFrameBatch;
    if (mode == ExecMode::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
      for (size_t i = 0; i < n; ++i) {
        batch[i] = simulate_frame(cfg, geom, noise, salt, next_frame + i);
      }
    } else {
      for (size_t i = 0; i < n; ++i) {
        batch[i] = simulate_frame(cfg, geom, noise, salt, next_frame + i);
      }
    }
    next_frame += n;

    for (const auto& fo : batch) {
      pt.bits += geom.info_bits;
      pt.bit_errors += fo.bit_errors;
      pt.frames += 1;
      pt.frame_errors += fo.frame_error ? 1 : 0;
      if (iter_errors.size() < fo.iteration_bit_errors.size()) {
        iter_errors.resize(fo.iteration_bit_errors.size(), 0);
      }
      for (size_t k = 0; k < fo.iteration_bit_errors.size(); ++k) {
        iter_errors[k] += fo.iteration_bit_errors[k];
      }
    }

    const bool enough_errors = pt.frame_errors >= cfg.stop.min_frame_errors &&
                               pt.bit_errors >= cfg.stop.min_bit_errors;
    if (enough_errors || pt.bits >= cfg.stop.max_bits) break;
  }

  pt.iteration_ber.reserve(iter_errors.size());
  for (auto e : iter_errors) {
    pt.iteration_ber.push_back(static_cast<double>(e) / static_cast<double>(pt.bits));
  }
  return pt;
}

RequiredEbn0Result required_ebn0_search(const std::function<BerPoint(double)>& eval,
                                        double target_ber, const SearchOptions& opt) {
  if (!(target_ber > 0.0 && target_ber < 0.5)) {
    throw std::invalid_argument("required_ebn0: target BER must be in (0, 0.5)");
  }
  RequiredEbn0Result res;
  auto record = [&](double db) -> const BerPoint& {
    for (const auto& p : res.evaluated) {
      if (p.ebn0_db == db) return p;
    }
    BerPoint p = eval(db);
    auto it = std::upper_bound(res.evaluated.begin(), res.evaluated.end(), p.ebn0_db,
                               [](double v, const BerPoint& q) { return v < q.ebn0_db; });
    return *res.evaluated.insert(it, std::move(p));
  };
  // BER floor for points with zero observed errors; keeps the log
  // interpolation defined while staying below any reachable target.
  auto log_ber = [](const BerPoint& p) {
    const double floor = 0.5 / std::max<std::uint64_t>(p.bits, 1);
    return std::log10(std::max(p.ber(), floor));
  };

  double lo = opt.start_db, hi = opt.start_db;
  double ber_at_start = record(opt.start_db).ber();
  if (ber_at_start > target_ber) {
    // walk up until the target is met
    while (true) {
      hi += opt.coarse_step_db;
      if (hi > opt.max_db + 1e-9) {
        res.status = RequiredEbn0Result::Status::AboveRange;
        return res;
      }
      if (record(hi).ber() <= target_ber) break;
      lo = hi;
    }
  } else {
    // walk down until the target is exceeded
    while (true) {
      lo -= opt.coarse_step_db;
      if (lo < opt.min_db - 1e-9) {
        res.status = RequiredEbn0Result::Status::BelowRange;
        return res;
      }
      if (record(lo).ber() > target_ber) break;
      hi = lo;
    }
  }

  // Shrink the bracket to the fine grid.
  while (hi - lo > opt.fine_step_db + 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (record(mid).ber() > target_ber) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  const BerPoint* plo = nullptr;
  const BerPoint* phi = nullptr;
  for (const auto& p : res.evaluated) {
    if (p.ebn0_db == lo) plo = &p;
    if (p.ebn0_db == hi) phi = &p;
  }
  res.bracket_lo = *plo;
  res.bracket_hi = *phi;
  const double llo = log_ber(*plo), lhi = log_ber(*phi), lt = std::log10(target_ber);
  const double t = llo == lhi ? 1.0 : (lt - llo) / (lhi - llo);
  res.ebn0_db = lo + (hi - lo) * std::clamp(t, 0.0, 1.0);
  res.status = RequiredEbn0Result::Status::Ok;
  return res;
}

RequiredEbn0Result required_ebn0(const SimConfig& cfg, double target_ber,
                                 const SearchOptions& opt, ExecMode mode) {
  return required_ebn0_search(
      [&](double db) { return run_ber_point(cfg, db, mode); }, target_ber, opt);
}

std::string csv_header() {
  return "scheme,mod,rc,eta,beta_db,ebn0_db,bits,bit_errors,frame_errors,ber,ci95,iters,seed";
}

std::string csv_row(const BerPoint& p) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%s,%d,%s,%.6g,%.6g,%.6g,%llu,%llu,%llu,%.8g,%.8g,%d,%llu",
                p.scheme.c_str(), p.mod_order, p.rate.c_str(), p.eta, p.beta_db, p.ebn0_db,
                static_cast<unsigned long long>(p.bits),
                static_cast<unsigned long long>(p.bit_errors),
                static_cast<unsigned long long>(p.frame_errors), p.ber(), p.ci95(), p.iterations,
                static_cast<unsigned long long>(p.seed));
  return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<BerPoint>& points) {
  std::error_code ec;
  const bool has_content = std::filesystem::exists(path, ec) &&
                           std::filesystem::file_size(path, ec) > 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open CSV output: " + path.string());
  if (!has_content) out << csv_header() << '\n';
  for (const auto& p : points) out << csv_row(p) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<SimConfig> figure_grid(int id, const SimConfig& base) {
  static const double betas[] = {0.0, -3.0, -6.0, -9.0, -12.0, -15.0};
  std::vector<SimConfig> out;
  auto add = [&](SchemeId sch, int mod, CodeRate rc) {
    for (double b : betas) {
      SimConfig c = base;
      c.scheme = sch;
      c.mod_order = mod;
      c.rate = rc;
      c.beta_db = b;
      out.push_back(c);
    }
  };
  if (id == 2) {
    add(SchemeId::Alamouti, 64, CodeRate::R23);
    add(SchemeId::SpatialMux, 16, CodeRate::R12);
    add(SchemeId::Golden, 16, CodeRate::R12);
  } else if (id == 3) {
    // eta = 4
    add(SchemeId::ThreeD, 16, CodeRate::R12);
    add(SchemeId::Alamouti, 64, CodeRate::R23);
    add(SchemeId::Golden, 16, CodeRate::R12);
    // eta = 6
    add(SchemeId::ThreeD, 64, CodeRate::R12);
    add(SchemeId::Alamouti, 256, CodeRate::R34);
    add(SchemeId::Golden, 64, CodeRate::R12);
  } else {
    throw std::invalid_argument("figure_grid: id must be 2 or 3");
  }
  return out;
}

double uncoded_bpsk_rayleigh_ber(double ebn0_db, std::uint64_t min_bit_errors,
                                 std::uint64_t max_bits, std::uint64_t seed) {
  const NoiseSpec noise = noise_from_ebn0(ebn0_db, 1.0);
  Rng rng(seed, 0xb85cull);
  std::uint64_t errors = 0, bits = 0;
  while (errors < min_bit_errors && bits < max_bits) {
    const double x = rng.next_bit() ? -1.0 : 1.0;
    const cplx h = rng.next_cgaussian(1.0);
    const cplx y = h * x + rng.next_cgaussian(noise.n0);
    const double stat = (std::conj(h) * y).real();
    errors += (stat < 0.0) != (x < 0.0);
    ++bits;
  }
  return static_cast<double>(errors) / static_cast<double>(bits);
}

}  // namespace stsbc
