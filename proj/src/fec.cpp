#include "stsbc/fec.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stsbc/rng.hpp"

namespace stsbc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Trellis tables. State packs the last six input bits with the newest in
// bit 5; the encoder register for step t is (u_t << 6) | state.
struct Trellis {
  std::array<std::array<std::uint8_t, 2>, ConvCode::kStates> next;
  std::array<std::array<std::uint8_t, 2>, ConvCode::kStates> out_x;
  std::array<std::array<std::uint8_t, 2>, ConvCode::kStates> out_y;
  // Reverse edges: for each state, the two predecessors and their inputs.
  std::array<std::array<std::uint8_t, 2>, ConvCode::kStates> prev;
  std::array<std::array<std::uint8_t, 2>, ConvCode::kStates> prev_in;
};

const Trellis& trellis() {
  static const Trellis t = [] {
    Trellis tr{};
    std::array<int, ConvCode::kStates> fill{};
    for (int s = 0; s < ConvCode::kStates; ++s) {
      for (int u = 0; u < 2; ++u) {
        const unsigned reg = (static_cast<unsigned>(u) << 6) | static_cast<unsigned>(s);
        const int ns = static_cast<int>((s >> 1) | (u << 5));
        tr.next[s][u] = static_cast<std::uint8_t>(ns);
        tr.out_x[s][u] = static_cast<std::uint8_t>(std::popcount(reg & ConvCode::kGenX) & 1);
        tr.out_y[s][u] = static_cast<std::uint8_t>(std::popcount(reg & ConvCode::kGenY) & 1);
        tr.prev[ns][fill[ns]] = static_cast<std::uint8_t>(s);
        tr.prev_in[ns][fill[ns]] = static_cast<std::uint8_t>(u);
        ++fill[ns];
      }
    }
    return tr;
  }();
  return t;
}

double clamp_llr(double v, double c) { return std::clamp(v, -c, c); }

// min in max-log mode, -log(e^-a + e^-b) in exact mode.
inline double reduce(double a, double b, bool exact) {
  if (!exact) return std::min(a, b);
  if (a == kInf) return b;
  if (b == kInf) return a;
  const double m = std::min(a, b);
  return m - std::log1p(std::exp(-(std::max(a, b) - m)));
}

}  // namespace

std::vector<std::uint8_t> conv_encode(std::span<const std::uint8_t> info) {
  if (info.empty()) throw std::invalid_argument("conv_encode: empty input");
  const auto& tr = trellis();
  std::vector<std::uint8_t> out;
  out.reserve(2 * (info.size() + ConvCode::kTail));
  int state = 0;
  auto step = [&](int u) {
    out.push_back(tr.out_x[state][u]);
    out.push_back(tr.out_y[state][u]);
    state = tr.next[state][u];
  };
  for (auto b : info) step(b & 1);
  for (int i = 0; i < ConvCode::kTail; ++i) step(0);
  return out;
}

CodeRate code_rate_from_string(std::string_view s) {
  if (s == "1/2") return CodeRate::R12;
  if (s == "2/3") return CodeRate::R23;
  if (s == "3/4") return CodeRate::R34;
  throw std::invalid_argument("unknown code rate: " + std::string(s));
}

const char* code_rate_name(CodeRate r) {
  switch (r) {
    case CodeRate::R12:
      return "1/2";
    case CodeRate::R23:
      return "2/3";
    case CodeRate::R34:
      return "3/4";
  }
  return "?";
}

double code_rate_value(CodeRate r) {
  switch (r) {
    case CodeRate::R12:
      return 1.0 / 2.0;
    case CodeRate::R23:
      return 2.0 / 3.0;
    case CodeRate::R34:
      return 3.0 / 4.0;
  }
  return 0.0;
}

const PuncturePattern& puncture_pattern(CodeRate r) {
  static const PuncturePattern p12{1, {1}, {1}, 2};
  static const PuncturePattern p23{2, {1, 0}, {1, 1}, 3};
  static const PuncturePattern p34{3, {1, 0, 1}, {1, 1, 0}, 4};
  switch (r) {
    case CodeRate::R12:
      return p12;
    case CodeRate::R23:
      return p23;
    case CodeRate::R34:
      return p34;
  }
  throw std::invalid_argument("unknown code rate");
}

size_t punctured_length(size_t pairs, CodeRate r) {
  const auto& p = puncture_pattern(r);
  if (pairs % p.period != 0) {
    throw std::invalid_argument("punctured_length: pairs not a multiple of the pattern period");
  }
  return pairs / p.period * p.kept_per_period;
}

namespace {
template <typename T>
std::vector<T> puncture_impl(std::span<const T> coded, CodeRate r) {
  if (coded.size() % 2 != 0) throw std::invalid_argument("puncture: odd mother length");
  const auto& p = puncture_pattern(r);
  const size_t pairs = coded.size() / 2;
  if (pairs % p.period != 0) {
    throw std::invalid_argument("puncture: length incompatible with pattern period");
  }
  std::vector<T> out;
  out.reserve(punctured_length(pairs, r));
  for (size_t t = 0; t < pairs; ++t) {
    const int ph = static_cast<int>(t % p.period);
    if (p.keep_x[ph]) out.push_back(coded[2 * t]);
    if (p.keep_y[ph]) out.push_back(coded[2 * t + 1]);
  }
  return out;
}
}  // namespace

std::vector<std::uint8_t> puncture(std::span<const std::uint8_t> coded, CodeRate r) {
  return puncture_impl(coded, r);
}

std::vector<double> puncture_values(std::span<const double> coded, CodeRate r) {
  return puncture_impl(coded, r);
}

std::vector<double> depuncture(std::span<const double> llrs, CodeRate r, size_t pairs) {
  const auto& p = puncture_pattern(r);
  if (pairs % p.period != 0) {
    throw std::invalid_argument("depuncture: pairs not a multiple of the pattern period");
  }
  if (llrs.size() != punctured_length(pairs, r)) {
    throw std::invalid_argument("depuncture: LLR count does not match the punctured length");
  }
  std::vector<double> out(2 * pairs, 0.0);
  size_t k = 0;
  for (size_t t = 0; t < pairs; ++t) {
    const int ph = static_cast<int>(t % p.period);
    if (p.keep_x[ph]) out[2 * t] = llrs[k++];
    if (p.keep_y[ph]) out[2 * t + 1] = llrs[k++];
  }
  return out;
}

Interleaver::Interleaver(size_t n, std::uint64_t seed) : perm_(n) {
  for (size_t i = 0; i < n; ++i) perm_[i] = static_cast<std::uint32_t>(i);
  Rng rng(seed, 0x494c5652ull);
  for (size_t i = n; i > 1; --i) {
    const size_t j = rng.next_below(static_cast<std::uint32_t>(i));
    std::swap(perm_[i - 1], perm_[j]);
  }
}

SisoResult bcjr_decode(std::span<const double> apriori_coded,
                       std::span<const double> apriori_info, const SisoConfig& cfg) {
  if (apriori_coded.size() % 2 != 0 || apriori_coded.size() < 2 * (ConvCode::kTail + 1)) {
    throw std::invalid_argument("bcjr_decode: bad coded length");
  }
  const size_t steps = apriori_coded.size() / 2;   // K + 6
  const size_t k_info = steps - ConvCode::kTail;   // K
  if (!apriori_info.empty() && apriori_info.size() != k_info) {
    throw std::invalid_argument("bcjr_decode: info prior length mismatch");
  }
  const auto& tr = trellis();
  const bool exact = cfg.exact;
  const int ns = ConvCode::kStates;

  // Transition cost for step t taking input u from state s:
  //   x*Lx + y*Ly + u*Li  (bit value times its LLR), so that the path
  // minimum corresponds to the max-log sequence posterior.
  auto gamma = [&](size_t t, int s, int u) -> double {
    const double lx = clamp_llr(apriori_coded[2 * t], cfg.llr_clamp);
    const double ly = clamp_llr(apriori_coded[2 * t + 1], cfg.llr_clamp);
    double g = tr.out_x[s][u] * lx + tr.out_y[s][u] * ly;
    if (t < k_info) {
      if (!apriori_info.empty() && u) g += clamp_llr(apriori_info[t], cfg.llr_clamp);
    }
    return g;
  };

  // Forward pass, all alphas stored; terminated trellis on both ends.
  std::vector<double> alpha((steps + 1) * ns, kInf);
  alpha[0] = 0.0;
  for (size_t t = 0; t < steps; ++t) {
    const double* at = &alpha[t * ns];
    double* an = &alpha[(t + 1) * ns];
    const int umax = t < k_info ? 2 : 1;  // tail forces u = 0
    for (int s = 0; s < ns; ++s) {
      if (at[s] == kInf) continue;
      for (int u = 0; u < umax; ++u) {
        const int nx = tr.next[s][u];
        const double cand = at[s] + gamma(t, s, u);
        an[nx] = reduce(an[nx], cand, exact);
      }
    }
    // Normalise to keep metrics bounded.
    double m = kInf;
    for (int s = 0; s < ns; ++s) m = std::min(m, an[s]);
    for (int s = 0; s < ns; ++s) an[s] -= m;
  }

  SisoResult res;
  res.extrinsic_coded.assign(2 * steps, 0.0);
  res.posterior_info.assign(k_info, 0.0);

  // Backward pass with per-step output accumulation.
  std::vector<double> beta(ns, kInf), beta_next(ns, kInf);
  beta[0] = 0.0;  // zero tail
  for (size_t ti = steps; ti-- > 0;) {
    const double* at = &alpha[ti * ns];
    double min_x[2] = {kInf, kInf};
    double min_y[2] = {kInf, kInf};
    double min_u[2] = {kInf, kInf};
    std::fill(beta_next.begin(), beta_next.end(), kInf);
    const int umax = ti < k_info ? 2 : 1;
    for (int s = 0; s < ns; ++s) {
      if (at[s] == kInf) continue;
      for (int u = 0; u < umax; ++u) {
        const int nx = tr.next[s][u];
        if (beta[nx] == kInf) continue;
        const double g = gamma(ti, s, u);
        const double full = at[s] + g + beta[nx];
        min_x[tr.out_x[s][u]] = reduce(min_x[tr.out_x[s][u]], full, exact);
        min_y[tr.out_y[s][u]] = reduce(min_y[tr.out_y[s][u]], full, exact);
        min_u[u] = reduce(min_u[u], full, exact);
        beta_next[s] = reduce(beta_next[s], g + beta[nx], exact);
      }
    }
    // Posterior coded LLRs, extrinsic = posterior - prior.
    const double post_x = min_x[1] - min_x[0];
    const double post_y = min_y[1] - min_y[0];
    res.extrinsic_coded[2 * ti] =
        clamp_llr(post_x - clamp_llr(apriori_coded[2 * ti], cfg.llr_clamp), cfg.llr_clamp);
    res.extrinsic_coded[2 * ti + 1] =
        clamp_llr(post_y - clamp_llr(apriori_coded[2 * ti + 1], cfg.llr_clamp), cfg.llr_clamp);
    if (ti < k_info) {
      res.posterior_info[ti] = clamp_llr(min_u[1] - min_u[0], cfg.llr_clamp);
    }
    double m = kInf;
    for (int s = 0; s < ns; ++s) m = std::min(m, beta_next[s]);
    for (int s = 0; s < ns; ++s) beta_next[s] -= m;
    std::swap(beta, beta_next);
  }
  return res;
}

std::vector<std::uint8_t> viterbi_decode(std::span<const double> coded_llrs, size_t info_len) {
  const size_t steps = info_len + ConvCode::kTail;
  if (coded_llrs.size() != 2 * steps) {
    throw std::invalid_argument("viterbi_decode: coded length mismatch");
  }
  const auto& tr = trellis();
  const int ns = ConvCode::kStates;

  std::vector<double> metric(ns, kInf), metric_next(ns, kInf);
  metric[0] = 0.0;
  std::vector<std::uint8_t> choice(steps * ns);
  for (size_t t = 0; t < steps; ++t) {
    const double lx = coded_llrs[2 * t];
    const double ly = coded_llrs[2 * t + 1];
    std::fill(metric_next.begin(), metric_next.end(), kInf);
    const int umax = t < info_len ? 2 : 1;
    for (int s = 0; s < ns; ++s) {
      if (metric[s] == kInf) continue;
      for (int u = 0; u < umax; ++u) {
        const int nx = tr.next[s][u];
        const double m = metric[s] + tr.out_x[s][u] * lx + tr.out_y[s][u] * ly;
        if (m < metric_next[nx]) {
          metric_next[nx] = m;
          choice[t * ns + nx] = static_cast<std::uint8_t>((s << 1) | u);
        }
      }
    }
    std::swap(metric, metric_next);
  }

  std::vector<std::uint8_t> info(info_len);
  int state = 0;  // terminated
  for (size_t t = steps; t-- > 0;) {
    const std::uint8_t c = choice[t * ns + state];
    const int u = c & 1;
    state = c >> 1;
    if (t < info_len) info[t] = static_cast<std::uint8_t>(u);
  }
  return info;
}

}  // namespace stsbc
